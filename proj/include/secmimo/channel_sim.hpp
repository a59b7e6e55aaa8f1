// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_CHANNEL_SIM_HPP
#define SECMIMO_CHANNEL_SIM_HPP

#include <armadillo>
#include <cstdint>
#include <vector>

#include "secmimo/closed_form.hpp"
#include "secmimo/rng.hpp"

namespace secmimo {

/// One Monte Carlo draw of channels and oscillator phase trajectories.
struct ChannelRealization {
  arma::cx_mat g;       ///< n_bs x k_users, column k ~ CN(0, beta_k I)
  arma::cx_mat g_eve;   ///< n_bs x n_eve, entries CN(0, beta_eve)
  arma::mat psi_traj;   ///< n_lo x t_max BS oscillator phases, psi(0) = 0
  arma::mat phi_traj;   ///< k_users x t_max terminal phases, phi(0) = 0
  std::uint64_t seed = 0;

  /// Per-antenna phase rotation of the k-th user's link at slot t (1-based).
  arma::cx_vec link_rotation(std::size_t k, std::size_t t, std::size_t n_lo) const;
  /// BS-side rotation alone (the eavesdropper sees only this one).
  arma::cx_vec bs_rotation(std::size_t t, std::size_t n_lo) const;
};

/// Draws a realization with phase trajectories covering slots 1..t_max.
/// Fully determined by (config, seed, t_max).
ChannelRealization draw_realization(const ValidatedConfig& cfg, std::uint64_t seed,
                                    std::size_t t_max, Rng* rng = nullptr);

/// Received uplink pilot observations, one column per training slot.
struct UplinkObservations {
  arma::cx_mat y;  ///< n_bs x b_train
};

/// Simulates the uplink training phase: scheduled users emit their pilots
/// with transmit-side distortion, the BS adds receive distortion whose
/// per-antenna variance follows the realized channel powers, plus amplified
/// thermal noise.
UplinkObservations simulate_training(const ChannelRealization& real,
                                     const ValidatedConfig& cfg, Rng& rng);

/// LMMSE channel estimates referenced to slot t, one column per user. The
/// estimate is a weighted sum of the sub-phase's received vectors; the
/// b_b*n_bs x b_b*n_bs covariance is never materialized.
arma::cx_mat lmmse_estimate(const UplinkObservations& obs, const TrainingStats& stats,
                            std::size_t t);

/// Matched-filter data precoder and group null-space AN precoder.
struct Precoders {
  arma::cx_mat f_mat;  ///< n_bs x k_users, unit-norm columns
  arma::cx_mat a_mat;  ///< n_bs x L, orthonormal columns; empty when no AN
};

/// Normalizes the estimate columns and builds, per antenna group, an
/// orthonormal basis of the null space of the group's estimated channels.
/// The stacked AN matrix is scaled so its full columns are orthonormal.
Precoders build_precoders(const arma::cx_mat& estimates, const ValidatedConfig& cfg);

/// Execution policy of the trial loop. Results are bit-identical across
/// policies and thread counts: every trial derives its own random stream and
/// the reduction folds trials in index order.
enum class ExecPolicy { serial, openmp };

struct McOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::openmp;
  std::size_t batch_count = 32;  ///< batches for standard-error estimates
};

/// Reads the worker-count override (SECMIMO_WORKERS); 0 means library default.
std::size_t worker_count_from_env();

/// Empirical moments and rate estimates of a seeded ensemble.
struct EnsembleResult {
  std::vector<std::size_t> t_grid;  ///< evaluated slots

  // Per slot (outer) and user (inner): the four expectation groups of the
  // downlink SINR: desired-gain mean, summed second moments, AN+BS-distortion
  // quadratic form, terminal-distortion power.
  std::vector<std::vector<arma::cx_double>> gain_mean;
  std::vector<arma::mat> second_moments;  ///< per slot: k_users x k_users, [k][l]
  std::vector<std::vector<double>> an_bs_quad;
  std::vector<std::vector<double>> mt_distortion;

  std::vector<std::vector<double>> mc_gamma_k;     ///< per slot, per user
  std::vector<std::vector<double>> mc_gamma_se;    ///< batch-mean standard errors
  std::vector<double> mc_eve_capacity;             ///< per slot, mean log2(1+gamma_E)
  std::vector<double> mc_eve_capacity_se;
  bool eve_unbounded = false;  ///< a realization had a singular eavesdropper Gram

  std::vector<double> mc_secrecy_rate;  ///< per user
  std::size_t trial_count = 0;
  std::uint64_t seed = 0;
};

/// Estimates every expectation of the downlink SINR at the given slots by
/// ensemble means (a ratio of means, matching the closed-form layout), plus
/// the eavesdropper capacity at the same slots.
EnsembleResult mc_ensemble(const ValidatedConfig& cfg, const std::vector<std::size_t>& t_grid,
                           const McOptions& opts);

/// Per-user SINR estimates at one slot.
std::vector<double> mc_downlink_sinr(const ValidatedConfig& cfg, std::size_t t,
                                     const McOptions& opts, EnsembleResult* full = nullptr);

/// Eavesdropper ergodic-capacity estimate at one slot.
CapacityBound mc_eve_capacity(const ValidatedConfig& cfg, std::size_t t, const McOptions& opts);

/// Secrecy-rate estimate over a slot grid. A full grid reproduces the
/// per-slot sum exactly; a subsampled grid is combined with weights from the
/// piecewise-linear interpolant over the data window (flat extension beyond
/// the outermost grid points), then scaled by the training overhead.
EnsembleResult mc_secrecy_rate(const ValidatedConfig& cfg, const std::vector<std::size_t>& t_grid,
                               const McOptions& opts);

/// Evenly spaced slot grid over the data window including both endpoints.
std::vector<std::size_t> make_t_grid(const ValidatedConfig& cfg, std::size_t max_points);

/// Interpolation weights: w[i] such that sum_i w[i] f(t_i) equals the sum of
/// the piecewise-linear interpolant of f over every data slot.
std::vector<double> t_grid_weights(const ValidatedConfig& cfg, const std::vector<std::size_t>& grid);

}  // namespace secmimo

#endif  // SECMIMO_CHANNEL_SIM_HPP
