// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/training.hpp"

#include <cassert>
#include <cmath>

namespace secmimo {

TrainingStats::TrainingStats(const ValidatedConfig& cfg) : cfg_(cfg) {
  const auto& sched = cfg.schedule();
  const auto& hwi = cfg.hwi();
  const auto& beta = cfg.path_loss().beta_k;
  const double s2 = hwi.sigma_sum_sq();
  u_scale_ = (hwi.kappa_t_mt + hwi.kappa_r_bs) * sched.p_tau;

  lambda_.assign(cfg.dims().k_users, 0.0);
  sub_.resize(sched.b_o);
  for (std::size_t b = 0; b < sched.b_o; ++b) {
    SubPhase& sp = sub_[b];
    const std::size_t bb = sched.sub_lengths[b];
    sp.first_slot = sched.first_slot(b);
    sp.last_slot = sched.last_slot(b);

    sp.theta.set_size(bb);
    for (std::size_t i = 0; i < bb; ++i) {
      const double dist = static_cast<double>(bb - 1 - i);  // slots are consecutive
      sp.theta(i) = std::exp(-0.5 * s2 * dist);
    }
    sp.envelope.set_size(bb, bb);
    for (std::size_t i = 0; i < bb; ++i)
      for (std::size_t j = 0; j < bb; ++j)
        sp.envelope(i, j) = std::exp(-0.5 * s2 * std::abs(static_cast<double>(i) -
                                                          static_cast<double>(j)));

    const arma::cx_mat& omega = sched.pilot_matrices[b];
    sp.sigma = hwi.xi_ul * arma::cx_mat(arma::eye(bb, bb), arma::zeros(bb, bb));
    for (std::size_t c = 0; c < sched.assignments[b].size(); ++c) {
      const std::size_t user = sched.assignments[b][c];
      const arma::cx_vec w = omega.col(c);
      sp.sigma += beta(user) * ((w * w.t()) % arma::cx_mat(sp.envelope, arma::zeros(bb, bb)));
      sp.sigma += beta(user) * u_scale_ *
                  arma::cx_mat(arma::eye(bb, bb), arma::zeros(bb, bb));
    }
    // Hermitian positive definite by construction (xi_ul >= 1 on the diagonal).
    arma::cx_mat inv;
    const bool ok = arma::inv_sympd(inv, sp.sigma);
    assert(ok);
    if (!ok) throw std::runtime_error("training covariance not positive definite");
    sp.sigma_inv = std::move(inv);

    const arma::cx_vec theta_c = arma::conv_to<arma::cx_vec>::from(sp.theta);
    for (std::size_t c = 0; c < sched.assignments[b].size(); ++c) {
      const std::size_t user = sched.assignments[b][c];
      const arma::cx_vec tw = theta_c % omega.col(c);
      lambda_[user] = beta(user) * std::real(arma::cdot(tw, sp.sigma_inv * tw));
    }
  }
}

double TrainingStats::lambda_at(std::size_t k, std::size_t t) const {
  const std::size_t b = cfg_.schedule().sub_phase_of(k);
  const double dt = static_cast<double>(t) - static_cast<double>(sub_[b].last_slot);
  return lambda_[k] * std::exp(-cfg_.hwi().sigma_sum_sq() * std::abs(dt));
}

double TrainingStats::error_variance(std::size_t k, std::size_t t) const {
  return cfg_.path_loss().beta_k(k) * (1.0 - lambda_at(k, t));
}

arma::cx_mat TrainingStats::pilot_interference(std::size_t b, std::size_t k) const {
  const auto& sched = cfg_.schedule();
  const arma::cx_vec w = sched.pilot_matrices[b].col(sched.column_of(b, k));
  return (w * w.t()) % arma::cx_mat(sub_[b].envelope, arma::zeros(arma::size(sub_[b].envelope)));
}

arma::cx_vec TrainingStats::combining_weights(std::size_t k, std::size_t t) const {
  const auto& sched = cfg_.schedule();
  const std::size_t b = sched.sub_phase_of(k);
  const SubPhase& sp = sub_[b];
  const std::size_t bb = sched.sub_lengths[b];

  arma::vec theta_t(bb);
  const double s2 = cfg_.hwi().sigma_sum_sq();
  for (std::size_t i = 0; i < bb; ++i) {
    const double tau = static_cast<double>(sp.first_slot + i);
    theta_t(i) = std::exp(-0.5 * s2 * std::abs(static_cast<double>(t) - tau));
  }
  const arma::cx_vec tw = arma::conv_to<arma::cx_vec>::from(theta_t) %
                          sched.pilot_matrices[b].col(sched.column_of(b, k));
  return cfg_.path_loss().beta_k(k) * (sp.sigma_inv * tw);
}

}  // namespace secmimo
