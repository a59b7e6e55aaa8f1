// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/channel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef SECMIMO_HAVE_OPENMP
#include <omp.h>
#endif

namespace secmimo {

arma::cx_vec ChannelRealization::link_rotation(std::size_t k, std::size_t t,
                                               std::size_t n_lo) const {
  const std::size_t n = g.n_rows;
  const std::size_t group = n / n_lo;
  arma::cx_vec rot(n);
  const double phi_k = phi_traj(k, t - 1);
  for (std::size_t l = 0; l < n_lo; ++l) {
    const double ang = psi_traj(l, t - 1) + phi_k;
    const std::complex<double> e(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < group; ++i) rot(l * group + i) = e;
  }
  return rot;
}

arma::cx_vec ChannelRealization::bs_rotation(std::size_t t, std::size_t n_lo) const {
  const std::size_t n = g.n_rows;
  const std::size_t group = n / n_lo;
  arma::cx_vec rot(n);
  for (std::size_t l = 0; l < n_lo; ++l) {
    const double ang = psi_traj(l, t - 1);
    const std::complex<double> e(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < group; ++i) rot(l * group + i) = e;
  }
  return rot;
}

ChannelRealization draw_realization(const ValidatedConfig& cfg, std::uint64_t seed,
                                    std::size_t t_max, Rng* rng_in) {
  Rng local(seed);
  Rng& rng = rng_in ? *rng_in : local;
  const auto& d = cfg.dims();
  const auto& pl = cfg.path_loss();

  ChannelRealization r;
  r.seed = seed;
  r.g.set_size(d.n_bs, d.k_users);
  for (std::size_t k = 0; k < d.k_users; ++k)
    for (std::size_t i = 0; i < d.n_bs; ++i) r.g(i, k) = rng.cnormal(pl.beta_k(k));
  r.g_eve.set_size(d.n_bs, d.n_eve);
  for (std::size_t e = 0; e < d.n_eve; ++e)
    for (std::size_t i = 0; i < d.n_bs; ++i) r.g_eve(i, e) = rng.cnormal(pl.beta_eve);

  // Wiener phase trajectories, zero at slot 0.
  const double s_psi = std::sqrt(cfg.hwi().sigma_psi_sq);
  const double s_phi = std::sqrt(cfg.hwi().sigma_phi_sq);
  r.psi_traj.set_size(d.n_lo, t_max);
  for (std::size_t l = 0; l < d.n_lo; ++l) {
    double acc = 0.0;
    for (std::size_t t = 0; t < t_max; ++t) {
      acc += s_psi * rng.normal();
      r.psi_traj(l, t) = acc;
    }
  }
  r.phi_traj.set_size(d.k_users, t_max);
  for (std::size_t k = 0; k < d.k_users; ++k) {
    double acc = 0.0;
    for (std::size_t t = 0; t < t_max; ++t) {
      acc += s_phi * rng.normal();
      r.phi_traj(k, t) = acc;
    }
  }
  return r;
}

UplinkObservations simulate_training(const ChannelRealization& real,
                                     const ValidatedConfig& cfg, Rng& rng) {
  const auto& d = cfg.dims();
  const auto& sched = cfg.schedule();
  const auto& h = cfg.hwi();

  UplinkObservations obs;
  obs.y.zeros(d.n_bs, d.b_train);
  for (std::size_t b = 0; b < sched.b_o; ++b) {
    const auto& users = sched.assignments[b];
    const arma::cx_mat& omega = sched.pilot_matrices[b];
    const std::size_t first = sched.first_slot(b);

    // BS receive distortion level follows the realized channel powers of the
    // users transmitting in this sub-phase.
    arma::vec v_bs(d.n_bs, arma::fill::zeros);
    for (std::size_t c = 0; c < users.size(); ++c)
      v_bs += arma::square(arma::abs(real.g.col(users[c])));
    v_bs *= h.kappa_r_bs * sched.p_tau;

    for (std::size_t li = 0; li < sched.sub_lengths[b]; ++li) {
      const std::size_t t = first + li;
      arma::cx_vec y(d.n_bs, arma::fill::zeros);
      for (std::size_t c = 0; c < users.size(); ++c) {
        const std::size_t k = users[c];
        const std::complex<double> symbol =
            omega(li, c) + rng.cnormal(h.kappa_t_mt * sched.p_tau);
        y += (real.link_rotation(k, t, d.n_lo) % real.g.col(k)) * symbol;
      }
      for (std::size_t i = 0; i < d.n_bs; ++i)
        y(i) += rng.cnormal(v_bs(i)) + rng.cnormal(h.xi_ul);
      obs.y.col(t - 1) = y;
    }
  }
  return obs;
}

arma::cx_mat lmmse_estimate(const UplinkObservations& obs, const TrainingStats& stats,
                            std::size_t t) {
  const auto& cfg = stats.config();
  const auto& sched = cfg.schedule();
  arma::cx_mat est(cfg.dims().n_bs, cfg.dims().k_users, arma::fill::zeros);
  for (std::size_t k = 0; k < cfg.dims().k_users; ++k) {
    const std::size_t b = sched.sub_phase_of(k);
    const std::size_t first = sched.first_slot(b);
    const arma::cx_vec v = stats.combining_weights(k, t);
    for (std::size_t i = 0; i < sched.sub_lengths[b]; ++i)
      est.col(k) += std::conj(v(i)) * obs.y.col(first - 1 + i);
  }
  return est;
}

Precoders build_precoders(const arma::cx_mat& estimates, const ValidatedConfig& cfg) {
  const auto& d = cfg.dims();
  Precoders p;
  p.f_mat = estimates;
  for (std::size_t k = 0; k < d.k_users; ++k) {
    const double nrm = arma::norm(p.f_mat.col(k));
    if (nrm <= 0.0) throw std::runtime_error("zero channel estimate cannot be normalized");
    p.f_mat.col(k) /= nrm;
  }

  const std::size_t l_dims = cfg.an_dims();
  if (!cfg.an_enabled() || l_dims == 0) {
    p.a_mat.set_size(d.n_bs, 0);
    return p;
  }

  const std::size_t group = d.n_bs / d.m_groups;
  p.a_mat.set_size(d.n_bs, l_dims);
  for (std::size_t m = 0; m < d.m_groups; ++m) {
    const arma::cx_mat block = estimates.rows(m * group, (m + 1) * group - 1);
    // Rows are the conjugated per-group user channels; the null space of this
    // k_users x group matrix hosts the group's AN columns.
    const arma::cx_mat basis = arma::null(block.t());
    if (basis.n_cols < l_dims)
      throw std::runtime_error("null space smaller than the AN dimension count");
    p.a_mat.rows(m * group, (m + 1) * group - 1) = basis.cols(0, l_dims - 1);
  }
  // Per-group bases are orthonormal; the stacked columns need 1/sqrt(m_groups)
  // to stay orthonormal, which keeps the emitted AN power at q per dimension.
  p.a_mat /= std::sqrt(static_cast<double>(d.m_groups));
  return p;
}

std::size_t worker_count_from_env() {
  const char* env = std::getenv("SECMIMO_WORKERS");
  if (!env) return 0;
  const long v = std::strtol(env, nullptr, 10);
  return v > 0 ? static_cast<std::size_t>(v) : 0;
}

namespace {

/// Per-trial accumulator; folded in trial order so results do not depend on
/// the execution policy.
struct TrialPartial {
  // Indexed [slot][user].
  std::vector<std::vector<arma::cx_double>> gain;
  std::vector<arma::mat> second;  // [slot](k, l)
  std::vector<std::vector<double>> an_bs;
  std::vector<std::vector<double>> mt;
  std::vector<double> eve_bits;  // per slot
  bool eve_singular = false;

  void init(std::size_t n_t, std::size_t n_k) {
    gain.assign(n_t, std::vector<arma::cx_double>(n_k, arma::cx_double(0, 0)));
    second.assign(n_t, arma::mat(n_k, n_k, arma::fill::zeros));
    an_bs.assign(n_t, std::vector<double>(n_k, 0.0));
    mt.assign(n_t, std::vector<double>(n_k, 0.0));
    eve_bits.assign(n_t, 0.0);
    eve_singular = false;
  }
};

void run_trial(const ValidatedConfig& cfg, const TrainingStats& stats,
               const std::vector<std::size_t>& t_grid, std::uint64_t seed, std::uint64_t trial,
               TrialPartial& out) {
  const auto& d = cfg.dims();
  const auto& h = cfg.hwi();
  const auto& pw = cfg.power();
  const std::size_t t_max = *std::max_element(t_grid.begin(), t_grid.end());

  Rng rng = Rng::for_trial(seed, trial);
  const ChannelRealization real = draw_realization(cfg, seed, t_max, &rng);
  const UplinkObservations obs = simulate_training(real, cfg, rng);
  const arma::cx_mat est = lmmse_estimate(obs, stats, cfg.t0());
  const Precoders pre = build_precoders(est, cfg);
  const bool has_an = pre.a_mat.n_cols > 0;

  // Per-antenna transmit power of the realized precoders (BS distortion level).
  arma::vec x_ii = pw.p_data * arma::sum(arma::square(arma::abs(pre.f_mat)), 1);
  if (has_an) x_ii += pw.q_an * arma::sum(arma::square(arma::abs(pre.a_mat)), 1);
  const arma::vec ups_diag = h.kappa_t_bs * x_ii;

  // Terminal receive distortion follows the cell-average transmit covariance
  // p_total/n_bs * I, the long-term level a terminal's gain control sees.
  const double mt_level = h.kappa_r_mt * pw.p_total / static_cast<double>(d.n_bs);

  out.init(t_grid.size(), d.k_users);
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    const std::size_t t = t_grid[ti];
    for (std::size_t k = 0; k < d.k_users; ++k) {
      const arma::cx_vec g_t = real.link_rotation(k, t, d.n_lo) % real.g.col(k);
      const arma::cx_rowvec hrow = g_t.t() * pre.f_mat;  // g^H f_l per user
      out.gain[ti][k] = hrow(k);
      for (std::size_t l = 0; l < d.k_users; ++l) out.second[ti](k, l) = std::norm(hrow(l));
      double quad = arma::dot(arma::square(arma::abs(g_t)), ups_diag);
      if (has_an) {
        const arma::cx_vec w = pre.a_mat.t() * g_t;
        quad += pw.q_an * std::real(arma::cdot(w, w));
      }
      out.an_bs[ti][k] = quad;
      out.mt[ti][k] = mt_level * std::real(arma::cdot(g_t, g_t));
    }

    // Eavesdropper SINR with ideal hardware; the data user is the last one
    // (a member of the final training sub-phase).
    const arma::cx_vec rot = real.bs_rotation(t, d.n_lo);
    const arma::cx_mat ge_rot = real.g_eve.each_col() % arma::conj(rot);  // Psi^H G_E
    arma::cx_mat gram(d.n_eve, d.n_eve, arma::fill::zeros);
    if (has_an) {
      const arma::cx_mat w = pre.a_mat.t() * (real.g_eve.each_col() % rot);
      gram += pw.q_an * (w.t() * w);
    }
    gram += ge_rot.t() * (ge_rot.each_col() % arma::cx_vec(ups_diag, arma::zeros(d.n_bs)));

    const arma::cx_rowvec g_e =
        (pre.f_mat.col(d.k_users - 1).t() * (real.g_eve.each_col() % rot));
    arma::cx_vec sol;
    if (arma::solve(sol, gram, g_e.t(), arma::solve_opts::no_approx)) {
      const double gamma_e = pw.p_data * std::real(arma::cdot(g_e.t(), sol));
      out.eve_bits[ti] = std::log2(1.0 + std::max(gamma_e, 0.0));
    } else {
      out.eve_singular = true;
    }
  }
}

}  // namespace

EnsembleResult mc_ensemble(const ValidatedConfig& cfg, const std::vector<std::size_t>& t_grid,
                           const McOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trial count must be at least 1");
  if (t_grid.empty()) throw std::invalid_argument("slot grid must not be empty");
  for (std::size_t t : t_grid)
    if (t <= cfg.dims().b_train || t > cfg.dims().t_coh)
      throw std::invalid_argument("slot grid must lie in the data window");

  const TrainingStats stats(cfg);
  const std::size_t n_t = t_grid.size();
  const std::size_t n_k = cfg.dims().k_users;
  const std::size_t n_batch = std::max<std::size_t>(1, std::min(opts.batch_count, opts.trials));

  EnsembleResult res;
  res.t_grid = t_grid;
  res.trial_count = opts.trials;
  res.seed = opts.seed;
  res.gain_mean.assign(n_t, std::vector<arma::cx_double>(n_k, arma::cx_double(0, 0)));
  res.second_moments.assign(n_t, arma::mat(n_k, n_k, arma::fill::zeros));
  res.an_bs_quad.assign(n_t, std::vector<double>(n_k, 0.0));
  res.mt_distortion.assign(n_t, std::vector<double>(n_k, 0.0));
  res.mc_eve_capacity.assign(n_t, 0.0);

  // Batch sums for standard errors (batch b covers a contiguous trial range).
  struct BatchSums {
    std::vector<std::vector<arma::cx_double>> gain;
    std::vector<arma::mat> second;
    std::vector<std::vector<double>> an_bs, mt;
    std::vector<double> eve;
    std::size_t count = 0;
  };
  std::vector<BatchSums> batches(n_batch);
  for (auto& b : batches) {
    b.gain.assign(n_t, std::vector<arma::cx_double>(n_k, arma::cx_double(0, 0)));
    b.second.assign(n_t, arma::mat(n_k, n_k, arma::fill::zeros));
    b.an_bs.assign(n_t, std::vector<double>(n_k, 0.0));
    b.mt.assign(n_t, std::vector<double>(n_k, 0.0));
    b.eve.assign(n_t, 0.0);
  }

  // Chunked execution: a buffer of per-trial partials is filled (possibly in
  // parallel) and folded serially in trial order.
  const std::size_t chunk = 64;
  std::vector<TrialPartial> buffer(std::min(chunk, opts.trials));
  bool singular = false;

#ifdef SECMIMO_HAVE_OPENMP
  const std::size_t workers = worker_count_from_env();
#endif

  for (std::size_t base = 0; base < opts.trials; base += chunk) {
    const std::size_t count = std::min(chunk, opts.trials - base);
#ifdef SECMIMO_HAVE_OPENMP
    if (opts.policy == ExecPolicy::openmp) {
      if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
#pragma omp parallel for schedule(static)
      for (long i = 0; i < static_cast<long>(count); ++i)
        run_trial(cfg, stats, t_grid, opts.seed, base + static_cast<std::size_t>(i),
                  buffer[static_cast<std::size_t>(i)]);
    } else
#endif
    {
      for (std::size_t i = 0; i < count; ++i)
        run_trial(cfg, stats, t_grid, opts.seed, base + i, buffer[i]);
    }

    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t trial = base + i;
      const std::size_t bi = trial * n_batch / opts.trials;
      auto& bat = batches[bi];
      bat.count++;
      const TrialPartial& p = buffer[i];
      singular = singular || p.eve_singular;
      for (std::size_t ti = 0; ti < n_t; ++ti) {
        for (std::size_t k = 0; k < n_k; ++k) {
          res.gain_mean[ti][k] += p.gain[ti][k];
          res.an_bs_quad[ti][k] += p.an_bs[ti][k];
          res.mt_distortion[ti][k] += p.mt[ti][k];
          bat.gain[ti][k] += p.gain[ti][k];
          bat.an_bs[ti][k] += p.an_bs[ti][k];
          bat.mt[ti][k] += p.mt[ti][k];
        }
        res.second_moments[ti] += p.second[ti];
        bat.second[ti] += p.second[ti];
        res.mc_eve_capacity[ti] += p.eve_bits[ti];
        bat.eve[ti] += p.eve_bits[ti];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(opts.trials);
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    for (std::size_t k = 0; k < n_k; ++k) {
      res.gain_mean[ti][k] *= inv_n;
      res.an_bs_quad[ti][k] *= inv_n;
      res.mt_distortion[ti][k] *= inv_n;
    }
    res.second_moments[ti] *= inv_n;
    res.mc_eve_capacity[ti] *= inv_n;
  }
  res.eve_unbounded = singular;

  // Assemble the SINR from the ensemble means (ratio of means).
  const auto& pw = cfg.power();
  const double xi_dl = cfg.hwi().xi_dl;
  auto gamma_from = [&](arma::cx_double gain, double sum_second, double an_bs, double mt) {
    const double num = pw.p_data * std::norm(gain);
    const double den = pw.p_data * sum_second - num + an_bs + mt + xi_dl;
    return num / den;
  };

  res.mc_gamma_k.assign(n_t, std::vector<double>(n_k, 0.0));
  res.mc_gamma_se.assign(n_t, std::vector<double>(n_k, 0.0));
  res.mc_eve_capacity_se.assign(n_t, 0.0);
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    for (std::size_t k = 0; k < n_k; ++k)
      res.mc_gamma_k[ti][k] =
          gamma_from(res.gain_mean[ti][k], arma::accu(res.second_moments[ti].row(k)),
                     res.an_bs_quad[ti][k], res.mt_distortion[ti][k]);

    // Standard errors from batch means.
    if (n_batch >= 2) {
      for (std::size_t k = 0; k < n_k; ++k) {
        double m = 0.0, m2 = 0.0;
        for (const auto& bat : batches) {
          const double inv_b = 1.0 / static_cast<double>(bat.count);
          const double gb = gamma_from(bat.gain[ti][k] * inv_b,
                                       arma::accu(bat.second[ti].row(k)) * inv_b,
                                       bat.an_bs[ti][k] * inv_b, bat.mt[ti][k] * inv_b);
          m += gb;
          m2 += gb * gb;
        }
        const double nb = static_cast<double>(n_batch);
        const double var = std::max(0.0, m2 / nb - (m / nb) * (m / nb));
        res.mc_gamma_se[ti][k] = std::sqrt(var / (nb - 1.0));
      }
      double m = 0.0, m2 = 0.0;
      for (const auto& bat : batches) {
        const double eb = bat.eve[ti] / static_cast<double>(bat.count);
        m += eb;
        m2 += eb * eb;
      }
      const double nb = static_cast<double>(n_batch);
      const double var = std::max(0.0, m2 / nb - (m / nb) * (m / nb));
      res.mc_eve_capacity_se[ti] = std::sqrt(var / (nb - 1.0));
    }
  }

  // Secrecy rate over the grid with interpolation weights.
  const auto w = t_grid_weights(cfg, t_grid);
  res.mc_secrecy_rate.assign(n_k, 0.0);
  if (!res.eve_unbounded) {
    for (std::size_t k = 0; k < n_k; ++k) {
      double sum = 0.0;
      for (std::size_t ti = 0; ti < n_t; ++ti) {
        const double r = std::log2(1.0 + res.mc_gamma_k[ti][k]) - res.mc_eve_capacity[ti];
        if (r > 0.0) sum += w[ti] * r;
      }
      res.mc_secrecy_rate[k] = sum / static_cast<double>(cfg.dims().t_coh);
    }
  }
  return res;
}

std::vector<double> mc_downlink_sinr(const ValidatedConfig& cfg, std::size_t t,
                                     const McOptions& opts, EnsembleResult* full) {
  if (opts.trials < 2) throw std::invalid_argument("SINR estimation needs at least 2 trials");
  EnsembleResult r = mc_ensemble(cfg, {t}, opts);
  std::vector<double> out = r.mc_gamma_k[0];
  if (full) *full = std::move(r);
  return out;
}

CapacityBound mc_eve_capacity(const ValidatedConfig& cfg, std::size_t t, const McOptions& opts) {
  EnsembleResult r = mc_ensemble(cfg, {t}, opts);
  CapacityBound c;
  c.unbounded = r.eve_unbounded;
  c.bits = r.eve_unbounded ? 0.0 : r.mc_eve_capacity[0];
  return c;
}

EnsembleResult mc_secrecy_rate(const ValidatedConfig& cfg, const std::vector<std::size_t>& t_grid,
                               const McOptions& opts) {
  return mc_ensemble(cfg, t_grid, opts);
}

std::vector<std::size_t> make_t_grid(const ValidatedConfig& cfg, std::size_t max_points) {
  const std::size_t lo = cfg.dims().b_train + 1;
  const std::size_t hi = cfg.dims().t_coh;
  const std::size_t span = hi - lo + 1;
  if (max_points == 0 || max_points >= span) {
    std::vector<std::size_t> grid(span);
    for (std::size_t i = 0; i < span; ++i) grid[i] = lo + i;
    return grid;
  }
  std::vector<std::size_t> grid;
  grid.reserve(max_points);
  const std::size_t steps = std::max<std::size_t>(1, max_points - 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const std::size_t t = lo + (span - 1) * i / steps;
    if (grid.empty() || grid.back() != t) grid.push_back(t);
  }
  return grid;
}

std::vector<double> t_grid_weights(const ValidatedConfig& cfg,
                                   const std::vector<std::size_t>& grid) {
  const std::size_t lo = cfg.dims().b_train + 1;
  const std::size_t hi = cfg.dims().t_coh;
  std::vector<double> w(grid.size(), 0.0);
  // Each integer slot in the window distributes its unit weight onto the
  // bracketing grid points (hat functions); slots outside the grid span fall
  // entirely on the nearest endpoint. A full grid therefore yields unit
  // weights and reproduces the plain per-slot sum.
  for (std::size_t t = lo; t <= hi; ++t) {
    if (t <= grid.front()) {
      w.front() += 1.0;
      continue;
    }
    if (t >= grid.back()) {
      w.back() += 1.0;
      continue;
    }
    std::size_t j = 1;
    while (grid[j] < t) ++j;
    const double span = static_cast<double>(grid[j] - grid[j - 1]);
    const double frac = static_cast<double>(t - grid[j - 1]) / span;
    w[j - 1] += 1.0 - frac;
    w[j] += frac;
  }
  return w;
}

}  // namespace secmimo
