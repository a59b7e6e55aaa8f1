// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suite.

#ifndef SECMIMO_TEST_UTIL_HPP
#define SECMIMO_TEST_UTIL_HPP

#include "secmimo/config.hpp"

namespace secmimo::test {

struct ConfigBuilder {
  std::size_t n_bs = 128, k_users = 4, n_eve = 4, n_lo = 2, m_groups = 2;
  std::size_t t_coh = 500, b_train = 4, b_o = 1;
  double p_total = 10.0, phi = 0.5;
  double sigma_psi_deg = 0.6, sigma_phi_deg = 0.6;
  double kt_mt = 0.0225, kr_bs = 0.0225, kt_bs = 0.0225, kr_mt = 0.0225;
  double xi_ul = 1.58, xi_dl = 1.58;
  double p_tau = -1.0;   // < 0: p_total / k_users
  double beta_k = 1.0;
  double beta_eve = 1.0;

  ValidatedConfig build() const {
    SystemDims dims{n_bs, k_users, n_eve, n_lo, m_groups, t_coh, b_train};
    HwiParams hwi = HwiParams::from_degrees(kt_mt, kr_bs, kt_bs, kr_mt, sigma_psi_deg,
                                            sigma_phi_deg, xi_ul, xi_dl);
    const double tau = p_tau > 0 ? p_tau : p_total / static_cast<double>(k_users);
    PilotSchedule sched = build_pilot_schedule(b_train, b_o, k_users, tau);
    PowerAllocation pow = derived_powers(p_total, phi, dims);
    PathLossProfile pl{arma::vec(k_users, arma::fill::value(beta_k)), beta_eve};
    return validate_config(dims, hwi, std::move(sched), pow, std::move(pl));
  }
};

}  // namespace secmimo::test

#endif
