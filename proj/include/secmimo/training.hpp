// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_TRAINING_HPP
#define SECMIMO_TRAINING_HPP

#include <armadillo>
#include <vector>

#include "secmimo/config.hpp"

namespace secmimo {

/// Closed-form second-order statistics of the uplink training phase.
///
/// Everything an LMMSE estimator or a rate expression needs is per training
/// sub-phase: the phase-coherence decay matrix Theta, the observation
/// covariance Sigma (per antenna, Hermitian positive definite), and the
/// per-user estimation quality lambda_k in (0, 1).
///
/// Decay inside a sub-phase is referenced to the sub-phase's final pilot
/// slot. With that reference the single-user (one slot per sub-phase)
/// schedule reproduces the scalar quality formula
///   lambda = p_tau*beta / (p_tau*beta*(1+kappa_t_mt+kappa_r_bs) + xi_ul)
/// exactly at any phase-noise level; the remaining decay between the
/// sub-phase and any later slot t is the factor exp(-(sp^2+sf^2)*(t - last)),
/// available through lambda_at(). Estimates built from these statistics are
/// invariant to the reference choice up to a positive scalar, so precoders
/// are unaffected by it.
class TrainingStats {
 public:
  struct SubPhase {
    std::size_t first_slot = 0;  ///< 1-based global slot
    std::size_t last_slot = 0;
    arma::vec theta;        ///< decay to the reference slot, per pilot slot
    arma::mat envelope;     ///< [i,j] = exp(-(sp^2+sf^2)/2 |i-j|)
    arma::cx_mat sigma;     ///< observation covariance per antenna
    arma::cx_mat sigma_inv;
  };

  explicit TrainingStats(const ValidatedConfig& cfg);

  const SubPhase& sub_phase(std::size_t b) const { return sub_[b]; }
  std::size_t sub_phase_count() const { return sub_.size(); }

  /// Estimation quality of user k at its sub-phase reference slot.
  double lambda(std::size_t k) const { return lambda_[k]; }

  /// Quality decayed to slot t >= reference slot of user k's sub-phase.
  double lambda_at(std::size_t k, std::size_t t) const;

  /// Per-antenna LMMSE error variance at slot t (diagonal covariance).
  double error_variance(std::size_t k, std::size_t t) const;

  /// Pilot-interference matrix of user k inside its sub-phase:
  /// W[i,j] = w_k(i) conj(w_k(j)) * envelope[i,j].
  arma::cx_mat pilot_interference(std::size_t b, std::size_t k) const;

  /// Additive distortion level on the pilot covariance diagonal,
  /// (kappa_t_mt + kappa_r_bs) * p_tau.
  double distortion_level() const { return u_scale_; }

  /// LMMSE combining weights for user k referenced to slot t: the estimate is
  /// ghat_k = sum_i conj(v_i) y(tau_i) over the sub-phase slots.
  arma::cx_vec combining_weights(std::size_t k, std::size_t t) const;

  /// The configuration is stored by value so statistics stay valid
  /// independently of the source object's lifetime.
  const ValidatedConfig& config() const { return cfg_; }

 private:
  ValidatedConfig cfg_;
  std::vector<SubPhase> sub_;
  std::vector<double> lambda_;
  double u_scale_ = 0.0;
};

/// Convenience factory mirroring the operation name used across the project.
inline TrainingStats training_statistics(const ValidatedConfig& cfg) { return TrainingStats(cfg); }

}  // namespace secmimo

#endif  // SECMIMO_TRAINING_HPP
