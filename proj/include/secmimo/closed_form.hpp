// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_CLOSED_FORM_HPP
#define SECMIMO_CLOSED_FORM_HPP

#include <cstddef>
#include <vector>

#include "secmimo/training.hpp"

namespace secmimo {

/// Inter-slot phase coherence between the precoder-design slot t0 and slot t.
struct PhaseDecay {
  double epsilon = 1.0;       ///< BS-side coherence exp(-sigma_psi^2 |t-t0|)
  double lambda_factor = 1.0; ///< factor turning lambda_k into lambda_bar_k(t)
};

PhaseDecay phase_decay(const HwiParams& hwi, std::size_t t, std::size_t t0);

/// Slot-dependent coefficients of the closed-form downlink SINR for one user.
struct SinrCoefficients {
  double a_k = 0.0;         ///< multiuser interference (per unit path loss)
  double c_k = 0.0;         ///< variance of the desired-signal gain
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;  ///< cross-pilot terms summed over co-scheduled users
  double epsilon = 1.0;
  double lambda_bar_k = 0.0;
  double mu_k = 0.0;        ///< AN leakage divided by beta_k and by q
  double xi_k = 0.0;        ///< loading-scaled receiver-side impairment term
};

/// Multiuser interference and desired-gain variance for user k at slot t.
/// The interference sum runs over the users sharing k's training sub-phase
/// (excluding k itself); every user outside the sub-phase contributes one
/// path-loss unit.
SinrCoefficients interference_coeffs(const TrainingStats& stats, std::size_t k, std::size_t t);

double desired_gain_variance(const TrainingStats& stats, std::size_t k, std::size_t t);

/// AN leakage power at user k for the group null-space precoder, and the
/// normalized leakage mu_k = L_AN / beta_k.
struct AnLeakage {
  double l_an = 0.0;
  double mu_k = 0.0;
};
AnLeakage an_leakage(const TrainingStats& stats, std::size_t k, std::size_t t);

/// Closed-form SINR and achievable-rate lower bound of user k at slot t.
struct RatePoint {
  double gamma = 0.0;
  double rate_bits = 0.0;
};
RatePoint downlink_rate_lb(const TrainingStats& stats, std::size_t k, std::size_t t);

/// Eavesdropper ergodic-capacity upper bound. The bound degenerates (secure
/// communication impossible) when the feasibility condition fails; that is
/// reported through the flag, never as a floating-point infinity.
struct CapacityBound {
  double bits = 0.0;
  bool unbounded = false;
};
CapacityBound eve_capacity_ub(const ValidatedConfig& cfg);

/// Ergodic secrecy-rate lower bound of user k: the per-slot positive part of
/// (rate lower bound - capacity bound), averaged over the coherence block.
double secrecy_rate_lb(const TrainingStats& stats, std::size_t k);

/// Rate lower bound averaged the same way but without the eavesdropper term.
double ergodic_rate_lb(const TrainingStats& stats, std::size_t k);

/// Inputs of the tolerable-eavesdropper-antenna expressions, evaluated at the
/// first data slot. Collected once so design sweeps can vary the loading
/// ratio beta = K/N in the final expressions while holding the
/// training-derived quantities fixed.
struct AlphaCoefficients {
  double lambda_bar = 0.0;
  double a_k = 0.0;
  double c_k = 0.0;
  double mu_k = 0.0;
  double n_bs = 0.0;
  double an_dims = 0.0;     ///< L = n_bs/m_groups - k_users
  double kappa_t_bs = 0.0;
  double xi_over_beta = 0.0;  ///< kappa_r_mt + kappa_t_bs + xi_dl/(beta_k * P)
};
AlphaCoefficients alpha_coefficients(const TrainingStats& stats, std::size_t k);

/// Largest eavesdropper-to-BS antenna ratio with positive secrecy when no AN
/// is emitted; proportional to the explicit loading ratio beta.
double alpha_an(const AlphaCoefficients& co, double beta_loading);
double alpha_an(const ValidatedConfig& cfg, const TrainingStats& stats);

/// Largest ratio when AN power dominates (phi -> 0); the loading ratio does
/// not appear explicitly in this expression.
double alpha_sec(const AlphaCoefficients& co);
double alpha_sec(const ValidatedConfig& cfg, const TrainingStats& stats);

/// Two sides of the criterion telling whether a small amount of BS transmit
/// distortion helps the secrecy rate (evaluated in the vanishing-distortion
/// limit). "beneficial" holds when lhs < rhs.
struct DistortionBenefit {
  double lhs = 0.0;
  double rhs = 0.0;
  bool beneficial = false;
};
DistortionBenefit distortion_benefit(const ValidatedConfig& cfg, std::size_t t);

}  // namespace secmimo

#endif  // SECMIMO_CLOSED_FORM_HPP
