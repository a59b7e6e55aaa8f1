// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_TYPES_HPP
#define SECMIMO_TYPES_HPP

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace secmimo {

constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

/// Thrown when a configuration violates a structural or numeric constraint.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Antenna/user/oscillator/slot counts of the cell.
///
/// The base station has n_bs antennas driven by n_lo free-running local
/// oscillators (n_bs/n_lo antennas per oscillator). The artificial-noise
/// precoder is built per antenna group, with m_groups groups of n_bs/m_groups
/// antennas each; m_groups must divide n_lo so that groups align with
/// oscillator boundaries.
struct SystemDims {
  std::size_t n_bs = 0;      ///< BS antennas (N)
  std::size_t k_users = 0;   ///< single-antenna terminals (K)
  std::size_t n_eve = 0;     ///< eavesdropper antennas
  std::size_t n_lo = 1;      ///< BS local oscillators
  std::size_t m_groups = 1;  ///< AN precoder groups
  std::size_t t_coh = 0;     ///< coherence block length in slots (T)
  std::size_t b_train = 0;   ///< training slots (B)

  /// Dimensions available per AN precoder group: n_bs/m_groups - k_users.
  /// May be negative for infeasible layouts, hence the signed return.
  long an_dims() const {
    return static_cast<long>(n_bs / m_groups) - static_cast<long>(k_users);
  }
  double loading_ratio() const {
    return static_cast<double>(k_users) / static_cast<double>(n_bs);
  }
};

/// Residual transceiver impairment parameters.
///
/// Distortion ratios are the variance of the additive distortion relative to
/// the signal power at the corresponding port. Phase-increment deviations are
/// stored internally as per-slot variances in radians^2; the amplified noise
/// floors are linear relative to a unit thermal-noise variance.
struct HwiParams {
  double kappa_t_mt = 0.0;  ///< terminal transmit distortion ratio
  double kappa_r_bs = 0.0;  ///< BS receive distortion ratio
  double kappa_t_bs = 0.0;  ///< BS transmit distortion ratio
  double kappa_r_mt = 0.0;  ///< terminal receive distortion ratio
  double sigma_psi_sq = 0.0;  ///< BS oscillator increment variance [rad^2]
  double sigma_phi_sq = 0.0;  ///< terminal oscillator increment variance [rad^2]
  double xi_ul = 1.0;  ///< amplified uplink noise floor (>= 1)
  double xi_dl = 1.0;  ///< amplified downlink noise floor (>= 1)

  static HwiParams from_degrees(double kt_mt, double kr_bs, double kt_bs, double kr_mt,
                                double sigma_psi_deg, double sigma_phi_deg,
                                double xi_ul_lin, double xi_dl_lin) {
    HwiParams h;
    h.kappa_t_mt = kt_mt;
    h.kappa_r_bs = kr_bs;
    h.kappa_t_bs = kt_bs;
    h.kappa_r_mt = kr_mt;
    h.sigma_psi_sq = deg2rad(sigma_psi_deg) * deg2rad(sigma_psi_deg);
    h.sigma_phi_sq = deg2rad(sigma_phi_deg) * deg2rad(sigma_phi_deg);
    h.xi_ul = xi_ul_lin;
    h.xi_dl = xi_dl_lin;
    return h;
  }

  double sigma_psi_deg() const { return std::sqrt(sigma_psi_sq) * 180.0 / kPi; }
  double sigma_phi_deg() const { return std::sqrt(sigma_phi_sq) * 180.0 / kPi; }
  /// Combined per-slot phase-increment variance of a BS-terminal link.
  double sigma_sum_sq() const { return sigma_psi_sq + sigma_phi_sq; }
};

/// Partition of the training phase into sub-phases with orthogonal pilots.
///
/// Sub-phase b occupies b_b consecutive slots and serves the user set
/// assignments[b]; its pilot matrix has one column per served user, every
/// entry of magnitude sqrt(p_tau), and mutually orthogonal columns.
struct PilotSchedule {
  std::size_t b_o = 1;                       ///< sub-phase count
  std::vector<std::size_t> sub_lengths;      ///< per sub-phase slot count
  std::vector<std::vector<std::size_t>> assignments;  ///< user ids per sub-phase
  std::vector<arma::cx_mat> pilot_matrices;  ///< per sub-phase, b_b x |S_b|
  double p_tau = 0.0;                        ///< per-pilot-symbol power

  /// First slot (1-based) of sub-phase b.
  std::size_t first_slot(std::size_t b) const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < b; ++i) s += sub_lengths[i];
    return s;
  }
  /// Last slot (1-based) of sub-phase b.
  std::size_t last_slot(std::size_t b) const { return first_slot(b) + sub_lengths[b] - 1; }

  /// Sub-phase serving user k; throws if the user is unassigned.
  std::size_t sub_phase_of(std::size_t k) const {
    for (std::size_t b = 0; b < assignments.size(); ++b)
      for (std::size_t u : assignments[b])
        if (u == k) return b;
    throw ConfigError("user " + std::to_string(k) + " not assigned to any training sub-phase");
  }
  /// Column of user k inside its sub-phase's pilot matrix.
  std::size_t column_of(std::size_t b, std::size_t k) const {
    const auto& s = assignments[b];
    for (std::size_t c = 0; c < s.size(); ++c)
      if (s[c] == k) return c;
    throw ConfigError("user " + std::to_string(k) + " not in sub-phase " + std::to_string(b));
  }
};

/// Downlink power split between data and artificial noise.
struct PowerAllocation {
  double p_total = 0.0;   ///< total downlink power (linear)
  double phi_split = 1.0; ///< data fraction in (0, 1]
  double p_data = 0.0;    ///< per-user data power, phi*P/K
  double q_an = 0.0;      ///< per-AN-dimension power, (1-phi)*P/L; 0 when phi = 1
};

/// Large-scale fading of the terminals and the eavesdropper.
struct PathLossProfile {
  arma::vec beta_k;      ///< per-user path loss, strictly positive
  double beta_eve = 1.0; ///< eavesdropper path loss, strictly positive
};

}  // namespace secmimo

#endif  // SECMIMO_TYPES_HPP
