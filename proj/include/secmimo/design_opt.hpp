// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#ifndef SECMIMO_DESIGN_OPT_HPP
#define SECMIMO_DESIGN_OPT_HPP

#include <string>
#include <vector>

#include "secmimo/closed_form.hpp"

namespace secmimo {

enum class SweepParameter {
  phi,
  b_o,
  m_o,
  n_o,
  sigma,        ///< sets both oscillator deviations, in degrees
  kappa_t_bs,
  n_bs,
  beta_loading  ///< explicit loading ratio in the final expressions
};

enum class SweepObjective { secrecy_rate_lb, rate_lb, eve_capacity_ub, alpha_an, alpha_sec };

SweepParameter sweep_parameter_from_string(const std::string& s);
SweepObjective sweep_objective_from_string(const std::string& s);
std::string to_string(SweepParameter p);
std::string to_string(SweepObjective o);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::phi;
  std::vector<double> grid;
  SweepObjective objective = SweepObjective::secrecy_rate_lb;
};

struct SweepRow {
  double value = 0.0;      ///< parameter value
  double objective = 0.0;
  double lambda_bar = 0.0; ///< auxiliary coefficients at the first data slot
  double a_k = 0.0;
  double c_k = 0.0;
  double mu_k = 0.0;
  bool unbounded = false;  ///< eavesdropper bound infeasible at this point
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  std::size_t argmax_index = 0;  ///< ties resolved toward the smallest value

  const SweepRow& argmax() const { return rows[argmax_index]; }
};

/// Evaluates the objective over the grid. Structural parameters rebuild the
/// configuration per point; grid values that yield an invalid configuration
/// are skipped. Throws if every point is invalid.
///
/// A beta_loading sweep varies the loading ratio only where it appears
/// explicitly in the closed-form expressions; the training-derived
/// coefficients stay those of the base configuration, which keeps arbitrary
/// (non-integer-K) ratios evaluable along a curve.
SweepResult sweep(const ValidatedConfig& cfg, const SweepSpec& spec);

/// Best sub-phase count for the secrecy rate at the given phase-noise level
/// (degrees, both oscillators). The grid defaults to every divisor of b_train
/// that also divides k_users; a subset may be given to compare specific
/// designs. When every candidate yields zero secrecy, candidates are ranked
/// by the user rate instead.
std::size_t best_pilot_partition(const ValidatedConfig& cfg, double sigma_deg,
                                 const std::vector<std::size_t>& grid = {});

/// Best AN group count over the divisors of n_lo, maximizing the secrecy rate
/// with the data/AN power split optimized per candidate.
std::size_t best_mo(const ValidatedConfig& cfg);

/// Largest eavesdropper antenna count tolerating positive secrecy, with or
/// without AN emission: floor(alpha * n_bs).
std::size_t max_tolerable_ne(const ValidatedConfig& cfg, bool with_an);

/// Divisors of n in increasing order.
std::vector<std::size_t> divisors_of(std::size_t n);

}  // namespace secmimo

#endif  // SECMIMO_DESIGN_OPT_HPP
