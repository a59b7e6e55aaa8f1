// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/closed_form.hpp"

#include <cmath>

namespace secmimo {

namespace {

/// Phase-averaging weight (1-eps)/n_lo + eps that scales the cross-pilot
/// interference terms at slot t.
double mixing_factor(double epsilon, std::size_t n_lo) {
  return (1.0 - epsilon) / static_cast<double>(n_lo) + epsilon;
}

/// Slot-independent cross-pilot interference sums; cached per user by the
/// rate evaluators so a coherence-block sweep costs O(1) per slot.
struct CrossTerms {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;
};

CrossTerms cross_terms(const TrainingStats& stats, std::size_t k) {
  const auto& cfg = stats.config();
  const auto& sched = cfg.schedule();
  const auto& beta = cfg.path_loss().beta_k;
  const std::size_t b = sched.sub_phase_of(k);
  const auto& sp = stats.sub_phase(b);
  const arma::cx_mat& omega = sched.pilot_matrices[b];
  const arma::cx_vec theta_c = arma::conv_to<arma::cx_vec>::from(sp.theta);

  const arma::cx_mat w_k = stats.pilot_interference(b, k);
  const arma::cx_vec tw_k = theta_c % omega.col(sched.column_of(b, k));
  const arma::cx_vec si_twk = sp.sigma_inv * tw_k;
  const double bk = beta(k);
  const double n = static_cast<double>(cfg.dims().n_bs);
  const double n_lo = static_cast<double>(cfg.dims().n_lo);
  const double u = stats.distortion_level();

  CrossTerms ct;
  for (std::size_t c = 0; c < sched.assignments[b].size(); ++c) {
    const std::size_t l = sched.assignments[b][c];
    if (l == k) continue;
    const arma::cx_vec tw_l = theta_c % omega.col(c);
    const arma::cx_vec si_twl = sp.sigma_inv * tw_l;
    const double denom = std::real(arma::cdot(tw_l, si_twl));
    ct.x1 += bk * bk * u * std::real(arma::cdot(si_twl, si_twl)) / denom;
    ct.x2 += (n / n_lo) * bk * bk * std::real(arma::cdot(si_twl, w_k * si_twl)) / denom;
    const std::complex<double> cross = bk * arma::cdot(tw_k, si_twl);
    ct.x3 += n * (1.0 - 1.0 / n_lo) * std::norm(cross) / denom;
  }
  return ct;
}

struct RateContext {
  const TrainingStats* stats;
  std::size_t k;
  double beta_k;
  double lambda_k;
  double cross_sum;      ///< x1 + x2 + x3 summed over co-scheduled users
  double base_users;     ///< k_users - 1 (one path-loss unit per other user)
  CrossTerms ct;
};

RateContext make_context(const TrainingStats& stats, std::size_t k) {
  RateContext c;
  c.stats = &stats;
  c.k = k;
  c.beta_k = stats.config().path_loss().beta_k(k);
  c.lambda_k = stats.lambda(k);
  c.ct = cross_terms(stats, k);
  c.cross_sum = c.ct.x1 + c.ct.x2 + c.ct.x3;
  c.base_users = static_cast<double>(stats.config().dims().k_users) - 1.0;
  return c;
}

SinrCoefficients coeffs_at(const RateContext& ctx, std::size_t t) {
  const auto& cfg = ctx.stats->config();
  const auto d = phase_decay(cfg.hwi(), t, cfg.t0());
  const double fac = mixing_factor(d.epsilon, cfg.dims().n_lo);
  const double n = static_cast<double>(cfg.dims().n_bs);
  const double n_lo = static_cast<double>(cfg.dims().n_lo);
  const double m_o = static_cast<double>(cfg.dims().m_groups);
  const double l_dims = static_cast<double>(cfg.dims().an_dims());

  SinrCoefficients s;
  s.epsilon = d.epsilon;
  s.lambda_bar_k = ctx.lambda_k * d.lambda_factor;
  s.x1 = ctx.ct.x1;
  s.x2 = ctx.ct.x2;
  s.x3 = ctx.ct.x3;
  s.a_k = ctx.base_users + fac * ctx.cross_sum / ctx.beta_k;
  s.c_k = (1.0 - 1.0 / n_lo) * (1.0 - d.epsilon) +
          ((n - 1.0) * ctx.lambda_k + 1.0) * fac - n * s.lambda_bar_k;
  s.mu_k = l_dims * ((1.0 - m_o / n_lo) * (1.0 - d.epsilon) + 1.0 - ctx.lambda_k);
  const auto& h = cfg.hwi();
  s.xi_k = cfg.dims().loading_ratio() *
           (h.kappa_r_mt + h.kappa_t_bs + h.xi_dl / (ctx.beta_k * cfg.power().p_total));
  return s;
}

double gamma_at(const RateContext& ctx, const SinrCoefficients& s) {
  const auto& cfg = ctx.stats->config();
  const auto& h = cfg.hwi();
  const auto& p = cfg.power();
  const double n = static_cast<double>(cfg.dims().n_bs);
  const double num = p.p_data * n * ctx.beta_k * s.lambda_bar_k;
  const double den = p.p_data * ctx.beta_k * (s.a_k + s.c_k) + p.q_an * ctx.beta_k * s.mu_k +
                     ctx.beta_k * (h.kappa_t_bs + h.kappa_r_mt) * p.p_total + h.xi_dl;
  return num / den;
}

}  // namespace

PhaseDecay phase_decay(const HwiParams& hwi, std::size_t t, std::size_t t0) {
  const double dt = std::abs(static_cast<double>(t) - static_cast<double>(t0));
  PhaseDecay d;
  d.epsilon = std::exp(-hwi.sigma_psi_sq * dt);
  d.lambda_factor = std::exp(-hwi.sigma_sum_sq() * dt);
  return d;
}

SinrCoefficients interference_coeffs(const TrainingStats& stats, std::size_t k, std::size_t t) {
  return coeffs_at(make_context(stats, k), t);
}

double desired_gain_variance(const TrainingStats& stats, std::size_t k, std::size_t t) {
  return coeffs_at(make_context(stats, k), t).c_k;
}

AnLeakage an_leakage(const TrainingStats& stats, std::size_t k, std::size_t t) {
  const auto s = coeffs_at(make_context(stats, k), t);
  AnLeakage l;
  l.mu_k = s.mu_k;
  l.l_an = stats.config().path_loss().beta_k(k) * s.mu_k;
  return l;
}

RatePoint downlink_rate_lb(const TrainingStats& stats, std::size_t k, std::size_t t) {
  const auto ctx = make_context(stats, k);
  RatePoint r;
  r.gamma = gamma_at(ctx, coeffs_at(ctx, t));
  r.rate_bits = std::log2(1.0 + r.gamma);
  return r;
}

CapacityBound eve_capacity_ub(const ValidatedConfig& cfg) {
  const auto& p = cfg.power();
  const auto& d = cfg.dims();
  const double kap = cfg.hwi().kappa_t_bs;
  const double n_e = static_cast<double>(d.n_eve);
  const double k_users = static_cast<double>(d.k_users);

  CapacityBound out;
  if (!cfg.an_enabled()) {
    // Without AN, only the BS transmit distortion jams the eavesdropper; it
    // has as many independent dimensions as there are users.
    if (kap <= 0.0 || k_users <= n_e) {
      out.unbounded = true;
      return out;
    }
    out.bits = std::log2(1.0 + n_e / (kap * (k_users - n_e)));
    return out;
  }

  const double l = static_cast<double>(cfg.an_dims());
  const double q_l = p.q_an * l;
  const double p_k = p.p_data * k_users;
  const double chi = ((1.0 + kap) * (1.0 + kap) * p.q_an * p.q_an * l +
                      kap * kap * p.p_data * p.p_data * k_users) /
                     ((1.0 + kap) * q_l + kap * p_k);
  const double den = q_l + kap * p.p_total - chi * n_e;
  if (den <= 0.0) {
    out.unbounded = true;
    return out;
  }
  out.bits = std::log2(1.0 + p.p_data * n_e / den);
  return out;
}

double secrecy_rate_lb(const TrainingStats& stats, std::size_t k) {
  const auto& cfg = stats.config();
  const auto ce = eve_capacity_ub(cfg);
  if (ce.unbounded) return 0.0;

  const auto ctx = make_context(stats, k);
  double sum = 0.0;
  for (std::size_t t = cfg.dims().b_train + 1; t <= cfg.dims().t_coh; ++t) {
    const double r = std::log2(1.0 + gamma_at(ctx, coeffs_at(ctx, t))) - ce.bits;
    if (r > 0.0) sum += r;  // clamp applied per slot, before the average
  }
  return sum / static_cast<double>(cfg.dims().t_coh);
}

double ergodic_rate_lb(const TrainingStats& stats, std::size_t k) {
  const auto& cfg = stats.config();
  const auto ctx = make_context(stats, k);
  double sum = 0.0;
  for (std::size_t t = cfg.dims().b_train + 1; t <= cfg.dims().t_coh; ++t)
    sum += std::log2(1.0 + gamma_at(ctx, coeffs_at(ctx, t)));
  return sum / static_cast<double>(cfg.dims().t_coh);
}

AlphaCoefficients alpha_coefficients(const TrainingStats& stats, std::size_t k) {
  const auto& cfg = stats.config();
  const auto s = interference_coeffs(stats, k, cfg.t0());
  const auto& h = cfg.hwi();
  AlphaCoefficients co;
  co.lambda_bar = s.lambda_bar_k;
  co.a_k = s.a_k;
  co.c_k = s.c_k;
  co.mu_k = s.mu_k;
  co.n_bs = static_cast<double>(cfg.dims().n_bs);
  co.an_dims = static_cast<double>(cfg.dims().an_dims());
  co.kappa_t_bs = h.kappa_t_bs;
  co.xi_over_beta =
      h.kappa_r_mt + h.kappa_t_bs + h.xi_dl / (cfg.path_loss().beta_k(k) * cfg.power().p_total);
  return co;
}

double alpha_an(const AlphaCoefficients& co, double beta_loading) {
  const double signal = co.lambda_bar * co.n_bs * co.kappa_t_bs;
  return signal * beta_loading / (signal + co.a_k + co.c_k + beta_loading * co.xi_over_beta);
}

double alpha_an(const ValidatedConfig& cfg, const TrainingStats& stats) {
  return alpha_an(alpha_coefficients(stats, cfg.dims().k_users - 1), cfg.dims().loading_ratio());
}

double alpha_sec(const AlphaCoefficients& co) {
  const double one_k = 1.0 + co.kappa_t_bs;
  const double num = one_k * co.lambda_bar * co.an_dims;
  const double den = (co.an_dims / co.n_bs) * (co.mu_k + co.xi_over_beta) +
                     co.lambda_bar * co.n_bs * one_k;
  return num / den;
}

double alpha_sec(const ValidatedConfig& cfg, const TrainingStats& stats) {
  return alpha_sec(alpha_coefficients(stats, cfg.dims().k_users - 1));
}

DistortionBenefit distortion_benefit(const ValidatedConfig& cfg, std::size_t t) {
  // Evaluated in the vanishing-BS-distortion limit: the training statistics
  // do not involve the BS transmit distortion, so the configured stats apply;
  // the kappa terms below are set to zero explicitly.
  TrainingStats stats(cfg);
  const std::size_t k = cfg.dims().k_users - 1;
  const auto s = interference_coeffs(stats, k, t);
  const auto& d = cfg.dims();
  const auto& h = cfg.hwi();
  const double phi = cfg.power().phi_split;
  const double n = static_cast<double>(d.n_bs);
  const double n_e = static_cast<double>(d.n_eve);
  const double k_users = static_cast<double>(d.k_users);
  const double l = static_cast<double>(d.an_dims());
  const double beta_load = d.loading_ratio();
  const double alpha = n_e / n;
  const double beta_k = cfg.path_loss().beta_k(k);

  DistortionBenefit r;
  const double aggregate = (s.a_k + s.c_k) * phi + beta_load * s.mu_k * (1.0 - phi) +
                           beta_load * (h.kappa_r_mt + h.xi_dl / (beta_k * cfg.power().p_total));
  const double core = alpha * aggregate * (n * s.lambda_bar_k * phi + aggregate) /
                      (beta_load * beta_load * s.lambda_bar_k * n);
  if (!cfg.an_enabled()) {
    // No AN emitted: distortion is the only jamming, always worth having.
    r.lhs = 0.0;
    r.rhs = core;
    r.beneficial = true;
    return r;
  }
  if (l <= n_e)
    throw ConfigError("distortion criterion needs more AN dimensions than eavesdropper antennas");
  r.lhs = (1.0 - phi) * (1.0 - n_e / l - (1.0 - n_e / l - n_e / k_users) * phi);
  // The eavesdropper-side curvature ratio is carried on this side so the pair
  // (lhs, rhs) matches the reported operating points of the criterion.
  r.rhs = core * (1.0 - (1.0 - 2.0 * phi) * n_e / l) / (1.0 - n_e / l);
  r.beneficial = r.lhs < r.rhs;
  return r;
}

}  // namespace secmimo
