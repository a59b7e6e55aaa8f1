// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "secmimo/config.hpp"

namespace secmimo {

using nlohmann::json;

const char* kVersionString = "secmimo 0.1.0";

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json make_config_json(std::size_t n, std::size_t k, std::size_t n_e, std::size_t n_lo,
                      std::size_t m_o, std::size_t t_coh, std::size_t b, std::size_t b_o,
                      double p_total_db, double phi, double sigma_deg, double kt_mt, double kr_bs,
                      double kt_bs, double kr_mt) {
  json j;
  j["dims"] = {{"n_bs", n},   {"k_users", k}, {"n_eve", n_e}, {"n_lo", n_lo},
               {"m_groups", m_o}, {"t_coh", t_coh}, {"b_train", b}};
  j["hwi"] = {{"kappa_t_mt", kt_mt}, {"kappa_r_bs", kr_bs}, {"kappa_t_bs", kt_bs},
              {"kappa_r_mt", kr_mt}, {"sigma_psi_deg", sigma_deg}, {"sigma_phi_deg", sigma_deg},
              {"xi_ul_db", lin2db(1.58)}, {"xi_dl_db", lin2db(1.58)}};
  j["power"] = {{"p_total_db", p_total_db}, {"phi_split", phi}};
  j["pilots"] = {{"b_o", b_o}};
  return j;
}

ValidatedConfig config_of(const json& j) { return config_from_json(j.dump()); }

double best_phi_secrecy(json base_cfg, std::size_t m_o) {
  base_cfg["dims"]["m_groups"] = m_o;
  double best = 0.0;
  std::vector<double> phis = {0.01, 0.99, 1.0};
  for (int i = 1; i <= 19; ++i) phis.push_back(0.05 * i);
  for (double phi : phis) {
    base_cfg["power"]["phi_split"] = phi;
    try {
      ValidatedConfig cfg = config_of(base_cfg);
      TrainingStats stats(cfg);
      best = std::max(best, secrecy_rate_lb(stats, cfg.dims().k_users - 1));
    } catch (const ConfigError&) {
      continue;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Figure registry
// ---------------------------------------------------------------------------

struct Scale {
  std::size_t trials;
  std::size_t t_coh;
  std::size_t n_max;
};

Scale scale_of(const std::string& s) {
  if (s == "paper") return {5000, 500, 512};
  return {1000, 100, 128};  // desk
}

std::vector<ResultTable> reproduce_fig1(const Scale& sc) {
  // Eavesdropper capacity bound and ensemble estimate vs the loading ratio.
  std::vector<ResultTable> tables;
  for (std::size_t m_o : {1ul, 2ul, 4ul}) {
    ResultTable tab;
    tab.name = "fig1_mo" + std::to_string(m_o);
    tab.headers = {"beta", "ce_bar", "ce_mc", "ce_mc_se"};
    for (int bi = 1; bi <= 9; ++bi) {
      const double beta = 0.05 * bi;
      const std::size_t k = static_cast<std::size_t>(std::lround(beta * 128.0));
      json cj = make_config_json(128, k, 16, 4, m_o, sc.t_coh, k, 1, 10.0, 0.25, 0.06,
                                 0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15);
      double ce_mc = std::nan(""), ce_se = std::nan(""), ce_cf = std::nan("");
      try {
        ValidatedConfig cfg = config_of(cj);
        const auto bound = eve_capacity_ub(cfg);
        ce_cf = bound.unbounded ? std::numeric_limits<double>::infinity() : bound.bits;
        McOptions opts;
        opts.trials = sc.trials;
        opts.seed = 42;
        EnsembleResult r = mc_ensemble(cfg, {cfg.t0()}, opts);
        if (!r.eve_unbounded) {
          ce_mc = r.mc_eve_capacity[0];
          ce_se = r.mc_eve_capacity_se[0];
        }
      } catch (const ConfigError&) {
        continue;  // infeasible loading for this group count
      }
      tab.rows.push_back({beta, ce_cf, ce_mc, ce_se});
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

std::vector<ResultTable> reproduce_fig2(const Scale& sc) {
  // User rate, received-signal quality and multiuser interference vs the
  // phase-noise level for three pilot partitions.
  std::vector<ResultTable> tables;
  for (std::size_t b_o : {1ul, 2ul, 16ul}) {
    ResultTable tab;
    tab.name = "fig2_bo" + std::to_string(b_o);
    tab.headers = {"sigma_deg", "rate_lb", "lambda_bar", "a_k"};
    for (int si = 0; si <= 15; ++si) {
      const double sigma = 2.0 * si;
      json cj = make_config_json(128, 16, 16, 2, 2, sc.t_coh, 16, b_o, 10.0, 0.5, sigma,
                                 0.05 * 0.05, 0.05 * 0.05, 0.05 * 0.05, 0.05 * 0.05);
      ValidatedConfig cfg = config_of(cj);
      TrainingStats stats(cfg);
      const std::size_t k = cfg.dims().k_users - 1;
      const auto co = interference_coeffs(stats, k, cfg.t0());
      tab.rows.push_back({sigma, ergodic_rate_lb(stats, k), co.lambda_bar_k, co.a_k});
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

std::vector<ResultTable> reproduce_fig3(const Scale& sc) {
  // Secrecy rate vs BS antenna count for group AN precoding, best power split.
  std::vector<ResultTable> tables;
  const std::vector<std::size_t> n_grid =
      sc.n_max >= 512 ? std::vector<std::size_t>{64, 128, 192, 256, 384, 512}
                      : std::vector<std::size_t>{64, 96, 128, 192, 256};
  for (double sigma : {0.6, 6.0}) {
    for (std::size_t m_o : {1ul, 4ul, 16ul}) {
      ResultTable tab;
      std::ostringstream nm;
      nm << "fig3_mo" << m_o << "_sigma" << sigma;
      tab.name = nm.str();
      tab.headers = {"n_bs", "secrecy_rate_lb"};
      for (std::size_t n : n_grid) {
        json cj = make_config_json(n, 4, 4, 16, m_o, sc.t_coh, 4, 1, 10.0, 0.5, sigma,
                                   0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15);
        tab.rows.push_back({static_cast<double>(n), best_phi_secrecy(cj, m_o)});
      }
      tables.push_back(std::move(tab));
    }
  }
  return tables;
}

std::vector<ResultTable> reproduce_fig4(const Scale& sc) {
  // Secrecy rate vs the data/AN power split for both pilot extremes.
  std::vector<ResultTable> tables;
  struct Curve {
    const char* name;
    std::size_t b_o;
    double sigma;
    double kappa;
  };
  const Curve curves[] = {{"so_sigma0p6", 1, 0.6, 0.15 * 0.15}, {"to_sigma0p6", 4, 0.6, 0.15 * 0.15},
                          {"so_sigma6", 1, 6.0, 0.15 * 0.15},   {"to_sigma6", 4, 6.0, 0.15 * 0.15},
                          {"ideal", 1, 0.0, 0.0}};
  for (const auto& c : curves) {
    ResultTable tab;
    tab.name = std::string("fig4_") + c.name;
    tab.headers = {"phi", "secrecy_rate_lb"};
    for (int i = 1; i <= 19; ++i) {
      const double phi = 0.05 * i;
      json cj = make_config_json(128, 4, 4, 2, 2, sc.t_coh, 4, c.b_o, 10.0, phi, c.sigma,
                                 c.kappa, c.kappa, c.kappa, c.kappa);
      ValidatedConfig cfg = config_of(cj);
      TrainingStats stats(cfg);
      tab.rows.push_back({phi, secrecy_rate_lb(stats, cfg.dims().k_users - 1)});
    }
    tables.push_back(std::move(tab));
  }
  return tables;
}

std::vector<ResultTable> reproduce_fig5(const Scale& sc) {
  // Tolerable eavesdropper antenna ratios vs the loading ratio.
  std::vector<ResultTable> tables;
  for (std::size_t n_lo : {2ul, 4ul}) {
    for (std::size_t b_o : {1ul, 16ul}) {
      ResultTable tab;
      tab.name = "fig5_no" + std::to_string(n_lo) + (b_o == 1 ? "_so" : "_to");
      tab.headers = {"beta", "alpha_an", "alpha_sec"};
      json cj = make_config_json(128, 16, 4, n_lo, 2, sc.t_coh, 16, b_o, 10.0, 0.25, 6.0,
                                 0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15, 0.15 * 0.15);
      ValidatedConfig cfg = config_of(cj);
      SweepSpec spec;
      spec.parameter = SweepParameter::beta_loading;
      for (int i = 1; i <= 9; ++i) spec.grid.push_back(0.05 * i);
      spec.objective = SweepObjective::alpha_an;
      SweepResult an = sweep(cfg, spec);
      spec.objective = SweepObjective::alpha_sec;
      SweepResult sec = sweep(cfg, spec);
      for (std::size_t i = 0; i < an.rows.size(); ++i)
        tab.rows.push_back({an.rows[i].value, an.rows[i].objective, sec.rows[i].objective});
      tables.push_back(std::move(tab));
    }
  }
  return tables;
}

std::vector<ResultTable> reproduce_fig6(const Scale& sc) {
  // Secrecy rate vs the BS transmit distortion ratio.
  std::vector<ResultTable> tables;
  for (double phi : {0.05, 0.25}) {
    for (double sigma : {0.06, 6.0}) {
      ResultTable tab;
      std::ostringstream nm;
      nm << "fig6_phi" << phi << "_sigma" << sigma;
      tab.name = nm.str();
      tab.headers = {"kappa_t_bs", "secrecy_rate_lb"};
      for (int i = 0; i <= 9; ++i) {
        const double kbs = 0.0025 * i;
        json cj = make_config_json(128, 32, 4, 2, 2, sc.t_coh, 32, 1, 10.0, phi, sigma,
                                   0.15 * 0.15, 0.15 * 0.15, kbs, 0.15 * 0.15);
        ValidatedConfig cfg = config_of(cj);
        TrainingStats stats(cfg);
        tab.rows.push_back({kbs, secrecy_rate_lb(stats, cfg.dims().k_users - 1)});
      }
      tables.push_back(std::move(tab));
    }
  }
  return tables;
}

}  // namespace

std::vector<RegistryEntry> list_experiments() {
  return {
      {"fig1", "eavesdropper capacity bound vs ensemble estimate over the loading ratio",
       "n_bs=128 n_lo=4 n_eve=16 p_total=10dB phi=0.25 kappa_t_bs=0.15^2, groups {1,2,4}",
       "trials=1000, t_coh=100, beta grid 0.05..0.45", "trials=5000, t_coh=500"},
      {"fig2", "user rate, signal quality and interference vs phase noise per pilot partition",
       "n_bs=128 n_lo=2 n_eve=16 k=b=16 phi=0.5 kappa=0.05^2, partitions {1,2,16}",
       "t_coh=100, sigma grid 0..30deg step 2", "t_coh=500"},
      {"fig3", "secrecy rate vs antenna count for group AN precoding, best power split",
       "k=b=4 n_eve=4 n_lo=16 groups {1,4,16} kappa=0.15^2 sigma {0.6,6}deg",
       "t_coh=100, n grid 64..256", "t_coh=500, n grid 64..512"},
      {"fig4", "secrecy rate vs data/AN power split for both pilot extremes",
       "k=b=4 n_bs=128 n_lo=groups=2 n_eve=4 kappa=0.15^2 sigma {0.6,6}deg plus ideal",
       "t_coh=100, phi grid 0.05..0.95", "t_coh=500"},
      {"fig5", "tolerable eavesdropper antenna ratios vs loading ratio",
       "n_bs=128 groups=2 n_lo {2,4} sigma=6deg kappa=0.15^2, SO and TO pilots",
       "beta grid 0.05..0.45", "same grid"},
      {"fig6", "secrecy rate vs BS transmit distortion ratio",
       "n_bs=128 k=b=32 n_eve=4 n_lo=groups=2 kappa_others=0.15^2 phi {0.05,0.25} sigma {0.06,6}deg",
       "t_coh=100, ratio grid 0..0.0225", "t_coh=500"},
  };
}

ExperimentSpec parse_experiment(const std::string& json_text) {
  json j = json::parse(json_text);  // propagates nlohmann parse_error
  ExperimentSpec spec;

  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "evaluate") spec.mode = RunMode::evaluate;
  else if (mode == "simulate") spec.mode = RunMode::simulate;
  else if (mode == "sweep") spec.mode = RunMode::sweep_mode;
  else if (mode == "reproduce") spec.mode = RunMode::reproduce;
  else throw ConfigError("unknown mode: " + mode);

  if (spec.mode == RunMode::reproduce) {
    const auto& jr = j.at("reproduce");
    spec.figure = jr.at("figure").get<std::string>();
    spec.scale = jr.value("scale", "desk");
    bool known = false;
    for (const auto& e : list_experiments()) known = known || e.id == spec.figure;
    if (!known) throw ConfigError("unknown figure id: " + spec.figure);
    if (spec.scale != "desk" && spec.scale != "paper")
      throw ConfigError("scale must be desk or paper");
    return spec;
  }

  spec.config_json = j.at("config").dump();
  if (spec.mode == RunMode::simulate) {
    const auto jm = j.value("mc", json::object());
    spec.mc.trials = jm.value("trials", std::size_t{1000});
    spec.mc.seed = jm.value("seed", std::uint64_t{1});
    spec.mc.t_grid_policy = jm.value("t_grid_policy", std::string("full"));
    spec.mc.t_grid_points = jm.value("t_grid_points", std::size_t{20});
    if (spec.mc.t_grid_policy != "full" && spec.mc.t_grid_policy != "subsample")
      throw ConfigError("t_grid_policy must be full or subsample");
  }
  if (spec.mode == RunMode::sweep_mode) {
    const auto& js = j.at("sweep");
    spec.sweep_block.parameter = sweep_parameter_from_string(js.at("parameter").get<std::string>());
    spec.sweep_block.objective = sweep_objective_from_string(js.at("objective").get<std::string>());
    spec.sweep_block.grid = js.at("grid").get<std::vector<double>>();
  }
  return spec;
}

std::vector<ResultTable> run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  std::vector<ResultTable> tables;
  json manifest;
  manifest["version"] = kVersionString;
  manifest["mode"] = static_cast<int>(spec.mode);

  switch (spec.mode) {
    case RunMode::evaluate: {
      ValidatedConfig cfg = config_from_json(spec.config_json);
      TrainingStats stats(cfg);
      const std::size_t k = cfg.dims().k_users - 1;
      const auto co = interference_coeffs(stats, k, cfg.t0());
      const auto ce = eve_capacity_ub(cfg);
      ResultTable tab;
      tab.name = "evaluate";
      tab.headers = {"phi",       "secrecy_rate_lb", "rate_lb_t0", "gamma_t0",
                     "ce_bar",    "ce_unbounded",    "lambda",     "lambda_bar_t0",
                     "a_k",       "c_k",             "mu_k",       "alpha_an",
                     "alpha_sec", "tolerable_ne_an", "tolerable_ne_sec"};
      const auto rp = downlink_rate_lb(stats, k, cfg.t0());
      tab.rows.push_back({cfg.power().phi_split, secrecy_rate_lb(stats, k), rp.rate_bits,
                          rp.gamma, ce.unbounded ? 0.0 : ce.bits, ce.unbounded ? 1.0 : 0.0,
                          stats.lambda(k), co.lambda_bar_k, co.a_k, co.c_k, co.mu_k,
                          alpha_an(cfg, stats), alpha_sec(cfg, stats),
                          static_cast<double>(max_tolerable_ne(cfg, false)),
                          static_cast<double>(max_tolerable_ne(cfg, true))});
      manifest["config"] = json::parse(config_to_json(cfg));
      manifest["config_hash"] = config_hash(cfg);
      tables.push_back(std::move(tab));
      break;
    }
    case RunMode::simulate: {
      ValidatedConfig cfg = config_from_json(spec.config_json);
      McOptions opts;
      opts.trials = spec.mc.trials;
      opts.seed = spec.mc.seed;
      const auto grid = spec.mc.t_grid_policy == "full" ? make_t_grid(cfg, 0)
                                                        : make_t_grid(cfg, spec.mc.t_grid_points);
      EnsembleResult r = mc_ensemble(cfg, grid, opts);
      TrainingStats stats(cfg);

      ResultTable tab;
      tab.name = "simulate_slots";
      tab.headers = {"t", "user", "gamma_mc", "gamma_mc_se", "gamma_cf", "ce_mc", "ce_mc_se"};
      for (std::size_t ti = 0; ti < grid.size(); ++ti)
        for (std::size_t k = 0; k < cfg.dims().k_users; ++k)
          tab.rows.push_back({static_cast<double>(grid[ti]), static_cast<double>(k),
                              r.mc_gamma_k[ti][k], r.mc_gamma_se[ti][k],
                              downlink_rate_lb(stats, k, grid[ti]).gamma,
                              r.mc_eve_capacity[ti], r.mc_eve_capacity_se[ti]});
      tables.push_back(std::move(tab));

      ResultTable sum;
      sum.name = "simulate_secrecy";
      sum.headers = {"user", "mc_secrecy_rate", "cf_secrecy_rate", "eve_unbounded"};
      for (std::size_t k = 0; k < cfg.dims().k_users; ++k)
        sum.rows.push_back({static_cast<double>(k), r.mc_secrecy_rate[k],
                            secrecy_rate_lb(stats, k), r.eve_unbounded ? 1.0 : 0.0});
      tables.push_back(std::move(sum));
      manifest["config"] = json::parse(config_to_json(cfg));
      manifest["config_hash"] = config_hash(cfg);
      manifest["mc"] = {{"trials", opts.trials}, {"seed", opts.seed},
                        {"t_grid_policy", spec.mc.t_grid_policy}, {"t_grid_size", grid.size()}};
      break;
    }
    case RunMode::sweep_mode: {
      ValidatedConfig cfg = config_from_json(spec.config_json);
      SweepResult res = sweep(cfg, spec.sweep_block);
      ResultTable tab;
      tab.name = "sweep_" + to_string(spec.sweep_block.parameter) + "_" +
                 to_string(spec.sweep_block.objective);
      tab.headers = {to_string(spec.sweep_block.parameter), "objective", "lambda_bar", "a_k",
                     "c_k", "mu_k", "is_argmax"};
      for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& row = res.rows[i];
        tab.rows.push_back({row.value, row.objective, row.lambda_bar, row.a_k, row.c_k, row.mu_k,
                            i == res.argmax_index ? 1.0 : 0.0});
      }
      tables.push_back(std::move(tab));
      manifest["config"] = json::parse(config_to_json(cfg));
      manifest["config_hash"] = config_hash(cfg);
      manifest["sweep"] = {{"parameter", to_string(spec.sweep_block.parameter)},
                           {"objective", to_string(spec.sweep_block.objective)},
                           {"argmax", res.argmax().value}};
      break;
    }
    case RunMode::reproduce: {
      const Scale sc = scale_of(spec.scale);
      if (spec.figure == "fig1") tables = reproduce_fig1(sc);
      else if (spec.figure == "fig2") tables = reproduce_fig2(sc);
      else if (spec.figure == "fig3") tables = reproduce_fig3(sc);
      else if (spec.figure == "fig4") tables = reproduce_fig4(sc);
      else if (spec.figure == "fig5") tables = reproduce_fig5(sc);
      else if (spec.figure == "fig6") tables = reproduce_fig6(sc);
      manifest["figure"] = spec.figure;
      manifest["scale"] = spec.scale;
      break;
    }
  }

  const auto t_end = std::chrono::steady_clock::now();
  const double wall =
      std::chrono::duration_cast<std::chrono::duration<double>>(t_end - t_start).count();
  manifest["wall_time_s"] = wall;
  for (auto& tab : tables) {
    tab.metadata["version"] = kVersionString;
    tab.metadata["wall_time_s"] = fmt_double(wall);
    if (spec.mode == RunMode::simulate) tab.metadata["seed"] = std::to_string(spec.mc.seed);
    if (manifest.contains("config_hash"))
      tab.metadata["config_hash"] = std::to_string(manifest["config_hash"].get<std::uint64_t>());
  }
  write_tables(tables, out_dir, manifest.dump(2));
  return tables;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  for (const auto& [key, value] : table.metadata) os << "# " << key << ": " << value << "\n";
  for (std::size_t i = 0; i < table.headers.size(); ++i)
    os << table.headers[i] << (i + 1 < table.headers.size() ? "," : "\n");
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << fmt_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
  return os.str();
}

void write_tables(const std::vector<ResultTable>& tables, const std::string& out_dir,
                  const std::string& manifest_json) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const auto& tab : tables) {
    std::ofstream f(fs::path(out_dir) / (tab.name + ".csv"));
    f << to_csv(tab);
  }
  std::ofstream m(fs::path(out_dir) / "run_manifest.json");
  m << manifest_json << "\n";
}

}  // namespace secmimo
