// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/design_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secmimo {

std::vector<std::size_t> divisors_of(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

SweepParameter sweep_parameter_from_string(const std::string& s) {
  if (s == "phi") return SweepParameter::phi;
  if (s == "b_o") return SweepParameter::b_o;
  if (s == "m_o") return SweepParameter::m_o;
  if (s == "n_o") return SweepParameter::n_o;
  if (s == "sigma") return SweepParameter::sigma;
  if (s == "kappa_t_bs") return SweepParameter::kappa_t_bs;
  if (s == "n_bs") return SweepParameter::n_bs;
  if (s == "beta_loading") return SweepParameter::beta_loading;
  throw ConfigError("unknown sweep parameter: " + s);
}

SweepObjective sweep_objective_from_string(const std::string& s) {
  if (s == "secrecy_rate_lb") return SweepObjective::secrecy_rate_lb;
  if (s == "rate_lb") return SweepObjective::rate_lb;
  if (s == "eve_capacity_ub") return SweepObjective::eve_capacity_ub;
  if (s == "alpha_an") return SweepObjective::alpha_an;
  if (s == "alpha_sec") return SweepObjective::alpha_sec;
  throw ConfigError("unknown sweep objective: " + s);
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::phi: return "phi";
    case SweepParameter::b_o: return "b_o";
    case SweepParameter::m_o: return "m_o";
    case SweepParameter::n_o: return "n_o";
    case SweepParameter::sigma: return "sigma";
    case SweepParameter::kappa_t_bs: return "kappa_t_bs";
    case SweepParameter::n_bs: return "n_bs";
    case SweepParameter::beta_loading: return "beta_loading";
  }
  return "?";
}

std::string to_string(SweepObjective o) {
  switch (o) {
    case SweepObjective::secrecy_rate_lb: return "secrecy_rate_lb";
    case SweepObjective::rate_lb: return "rate_lb";
    case SweepObjective::eve_capacity_ub: return "eve_capacity_ub";
    case SweepObjective::alpha_an: return "alpha_an";
    case SweepObjective::alpha_sec: return "alpha_sec";
  }
  return "?";
}

namespace {

/// Rebuilds the configuration with one parameter changed; throws ConfigError
/// for inadmissible values, which sweep() treats as a skipped point.
ValidatedConfig rebuild(const ValidatedConfig& base, SweepParameter p, double value) {
  SystemDims dims = base.dims();
  HwiParams hwi = base.hwi();
  double phi = base.power().phi_split;
  std::size_t b_o = base.schedule().b_o;

  auto as_count = [](double v) {
    if (v < 1.0 || v != std::floor(v)) throw ConfigError("parameter must be a positive integer");
    return static_cast<std::size_t>(v);
  };

  switch (p) {
    case SweepParameter::phi:
      phi = value;
      break;
    case SweepParameter::b_o:
      b_o = as_count(value);
      break;
    case SweepParameter::m_o:
      dims.m_groups = as_count(value);
      break;
    case SweepParameter::n_o:
      dims.n_lo = as_count(value);
      if (dims.m_groups > dims.n_lo) dims.m_groups = dims.n_lo;
      break;
    case SweepParameter::sigma: {
      const double s2 = deg2rad(value) * deg2rad(value);
      hwi.sigma_psi_sq = s2;
      hwi.sigma_phi_sq = s2;
      break;
    }
    case SweepParameter::kappa_t_bs:
      hwi.kappa_t_bs = value;
      break;
    case SweepParameter::n_bs:
      dims.n_bs = as_count(value);
      break;
    case SweepParameter::beta_loading:
      throw ConfigError("beta_loading does not rebuild the configuration");
  }

  PathLossProfile pl = base.path_loss();
  PowerAllocation pow = derived_powers(base.power().p_total, phi, dims);
  PilotSchedule sched =
      build_pilot_schedule(dims.b_train, b_o, dims.k_users, base.schedule().p_tau);
  return validate_config(dims, hwi, std::move(sched), pow, std::move(pl), base.t0());
}

/// Eavesdropper bound with the loading ratio varied explicitly: the user and
/// AN dimension counts scale with beta while the power budget stays fixed.
CapacityBound eve_bound_at_beta(const ValidatedConfig& cfg, double beta) {
  const auto& d = cfg.dims();
  const double n = static_cast<double>(d.n_bs);
  const double k_users = beta * n;
  const double l = n / static_cast<double>(d.m_groups) - k_users;
  const double kap = cfg.hwi().kappa_t_bs;
  const double n_e = static_cast<double>(d.n_eve);
  const double phi = cfg.power().phi_split;
  const double p_total = cfg.power().p_total;

  CapacityBound out;
  if (phi >= 1.0) {
    if (kap <= 0.0 || k_users <= n_e) {
      out.unbounded = true;
      return out;
    }
    out.bits = std::log2(1.0 + n_e / (kap * (k_users - n_e)));
    return out;
  }
  if (l <= 0.0) {
    out.unbounded = true;
    return out;
  }
  const double p = phi * p_total / k_users;
  const double q = (1.0 - phi) * p_total / l;
  const double chi = ((1.0 + kap) * (1.0 + kap) * q * q * l + kap * kap * p * p * k_users) /
                     ((1.0 + kap) * q * l + kap * p * k_users);
  const double den = q * l + kap * p_total - chi * n_e;
  if (den <= 0.0) {
    out.unbounded = true;
    return out;
  }
  out.bits = std::log2(1.0 + p * n_e / den);
  return out;
}

ValidatedConfig rebuild_sigma(const ValidatedConfig& base, double sigma_deg) {
  HwiParams hwi = base.hwi();
  const double s2 = deg2rad(sigma_deg) * deg2rad(sigma_deg);
  hwi.sigma_psi_sq = s2;
  hwi.sigma_phi_sq = s2;
  PilotSchedule sched = build_pilot_schedule(base.dims().b_train, base.schedule().b_o,
                                             base.dims().k_users, base.schedule().p_tau);
  return validate_config(base.dims(), hwi, std::move(sched), base.power(), base.path_loss(),
                         base.t0());
}

}  // namespace

SweepResult sweep(const ValidatedConfig& cfg, const SweepSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("sweep grid must not be empty");

  std::vector<double> grid = spec.grid;
  std::sort(grid.begin(), grid.end());  // smallest-value tie-break by construction

  SweepResult result;
  result.spec = spec;
  result.spec.grid = grid;

  const bool beta_mode = spec.parameter == SweepParameter::beta_loading;
  // For explicit-loading sweeps the training-derived coefficients come from
  // the base configuration once; only the final expressions see the new beta.
  AlphaCoefficients base_co;
  if (beta_mode) {
    TrainingStats stats(cfg);
    base_co = alpha_coefficients(stats, cfg.dims().k_users - 1);
  }

  for (double value : grid) {
    SweepRow row;
    row.value = value;
    try {
      if (beta_mode) {
        row.lambda_bar = base_co.lambda_bar;
        row.a_k = base_co.a_k;
        row.c_k = base_co.c_k;
        row.mu_k = base_co.mu_k;
        switch (spec.objective) {
          case SweepObjective::alpha_an:
            row.objective = alpha_an(base_co, value);
            break;
          case SweepObjective::alpha_sec:
            row.objective = alpha_sec(base_co);
            break;
          case SweepObjective::eve_capacity_ub: {
            const auto ce = eve_bound_at_beta(cfg, value);
            row.unbounded = ce.unbounded;
            row.objective = ce.unbounded ? std::numeric_limits<double>::infinity() : ce.bits;
            break;
          }
          default:
            throw ConfigError(
                "beta_loading sweeps support eve_capacity_ub, alpha_an and alpha_sec only");
        }
      } else {
        const ValidatedConfig point = rebuild(cfg, spec.parameter, value);
        TrainingStats stats(point);
        const std::size_t k = point.dims().k_users - 1;
        const auto co = interference_coeffs(stats, k, point.t0());
        row.lambda_bar = co.lambda_bar_k;
        row.a_k = co.a_k;
        row.c_k = co.c_k;
        row.mu_k = co.mu_k;
        switch (spec.objective) {
          case SweepObjective::secrecy_rate_lb:
            row.objective = secrecy_rate_lb(stats, k);
            break;
          case SweepObjective::rate_lb:
            row.objective = ergodic_rate_lb(stats, k);
            break;
          case SweepObjective::eve_capacity_ub: {
            const auto ce = eve_capacity_ub(point);
            row.unbounded = ce.unbounded;
            row.objective = ce.unbounded ? std::numeric_limits<double>::infinity() : ce.bits;
            break;
          }
          case SweepObjective::alpha_an:
            row.objective = alpha_an(point, stats);
            break;
          case SweepObjective::alpha_sec:
            row.objective = alpha_sec(point, stats);
            break;
        }
      }
    } catch (const ConfigError&) {
      continue;  // inadmissible grid point
    }
    result.rows.push_back(row);
  }

  if (result.rows.empty()) throw ConfigError("every sweep grid point was invalid");
  for (std::size_t i = 1; i < result.rows.size(); ++i)
    if (result.rows[i].objective > result.rows[result.argmax_index].objective)
      result.argmax_index = i;
  return result;
}

std::size_t best_pilot_partition(const ValidatedConfig& cfg, double sigma_deg,
                                 const std::vector<std::size_t>& grid) {
  std::vector<std::size_t> candidates = grid;
  if (candidates.empty()) {
    for (std::size_t d : divisors_of(cfg.dims().b_train))
      if (cfg.dims().k_users % d == 0) candidates.push_back(d);
  }
  std::sort(candidates.begin(), candidates.end());

  SweepSpec spec;
  spec.parameter = SweepParameter::b_o;
  spec.objective = SweepObjective::secrecy_rate_lb;
  for (std::size_t c : candidates) spec.grid.push_back(static_cast<double>(c));

  ValidatedConfig base = rebuild_sigma(cfg, sigma_deg);
  SweepResult res = sweep(base, spec);
  const bool all_zero =
      std::all_of(res.rows.begin(), res.rows.end(), [](const SweepRow& r) { return r.objective <= 0.0; });
  if (all_zero) {
    // Zero secrecy everywhere: rank the partitions by the user rate instead.
    spec.objective = SweepObjective::rate_lb;
    res = sweep(base, spec);
  }
  return static_cast<std::size_t>(res.argmax().value);
}

std::size_t best_mo(const ValidatedConfig& cfg) {
  double best = -1.0;
  std::size_t best_mo_value = 1;
  for (std::size_t mo : divisors_of(cfg.dims().n_lo)) {
    double obj = -1.0;
    // Data/AN split optimized per candidate; the grid spans near-zero to
    // AN-free operation.
    std::vector<double> phis = {0.01, 0.99, 1.0};
    for (int i = 1; i <= 19; ++i) phis.push_back(0.05 * i);
    std::sort(phis.begin(), phis.end());
    for (double phi : phis) {
      try {
        SystemDims dims = cfg.dims();
        dims.m_groups = mo;
        PowerAllocation pow = derived_powers(cfg.power().p_total, phi, dims);
        PilotSchedule sched = build_pilot_schedule(dims.b_train, cfg.schedule().b_o,
                                                   dims.k_users, cfg.schedule().p_tau);
        ValidatedConfig point = validate_config(dims, cfg.hwi(), std::move(sched), pow,
                                                cfg.path_loss(), cfg.t0());
        TrainingStats stats(point);
        obj = std::max(obj, secrecy_rate_lb(stats, point.dims().k_users - 1));
      } catch (const ConfigError&) {
        continue;
      }
    }
    if (obj > best + 1e-15) {
      best = obj;
      best_mo_value = mo;
    }
  }
  if (best < 0.0) throw ConfigError("no admissible AN group count");
  return best_mo_value;
}

std::size_t max_tolerable_ne(const ValidatedConfig& cfg, bool with_an) {
  TrainingStats stats(cfg);
  const double alpha = with_an ? alpha_sec(cfg, stats) : alpha_an(cfg, stats);
  const double count = std::floor(alpha * static_cast<double>(cfg.dims().n_bs));
  return count > 0.0 ? static_cast<std::size_t>(count) : 0;
}

}  // namespace secmimo
