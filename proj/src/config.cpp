// SPDX-License-Identifier: Apache-2.0
//
// secmimo: secrecy-rate analysis and link-level simulation for
// hardware-impaired massive MIMO downlinks.

#include "secmimo/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace secmimo {

using nlohmann::json;

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void check_schedule(const PilotSchedule& s, const SystemDims& d) {
  check(s.b_o >= 1 && s.b_o == s.sub_lengths.size() && s.b_o == s.assignments.size() &&
            s.b_o == s.pilot_matrices.size(),
        "pilot schedule arrays disagree with the sub-phase count");
  check(s.p_tau > 0.0, "per-pilot power must be positive");

  std::size_t total_slots = 0;
  std::vector<char> seen(d.k_users, 0);
  for (std::size_t b = 0; b < s.b_o; ++b) {
    const auto& users = s.assignments[b];
    const auto& omega = s.pilot_matrices[b];
    check(!users.empty(), "empty training sub-phase " + std::to_string(b));
    check(users.size() <= s.sub_lengths[b],
          "sub-phase " + std::to_string(b) + " serves more users than it has slots");
    check(omega.n_rows == s.sub_lengths[b] && omega.n_cols == users.size(),
          "pilot matrix shape mismatch in sub-phase " + std::to_string(b));
    total_slots += s.sub_lengths[b];
    for (std::size_t u : users) {
      check(u < d.k_users, "pilot schedule references unknown user");
      check(!seen[u], "user " + std::to_string(u) + " appears in two sub-phases");
      seen[u] = 1;
    }
    // per-pilot power constraint and column orthogonality
    for (arma::uword c = 0; c < omega.n_cols; ++c) {
      for (arma::uword r = 0; r < omega.n_rows; ++r)
        check(std::abs(std::norm(omega(r, c)) - s.p_tau) <= 1e-9 * s.p_tau,
              "pilot entry magnitude differs from sqrt(p_tau)");
      for (arma::uword c2 = c + 1; c2 < omega.n_cols; ++c2)
        check(std::abs(arma::cdot(omega.col(c), omega.col(c2))) <=
                  1e-9 * s.p_tau * static_cast<double>(omega.n_rows),
              "pilot columns within a sub-phase are not orthogonal");
    }
  }
  check(total_slots == d.b_train, "sub-phase lengths do not add up to b_train");
  check(std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }),
        "every user must appear in exactly one sub-phase");
}

}  // namespace

ValidatedConfig validate_config(SystemDims dims, HwiParams hwi, PilotSchedule sched,
                                PowerAllocation pow, PathLossProfile pl,
                                std::optional<std::size_t> t0) {
  check(dims.n_bs >= 1 && dims.k_users >= 1 && dims.n_eve >= 1, "counts must be positive");
  check(dims.n_lo >= 1 && dims.n_bs % dims.n_lo == 0,
        "n_bs must be a multiple of n_lo (one oscillator per antenna group)");
  check(dims.m_groups >= 1 && dims.m_groups <= dims.n_lo && dims.n_lo % dims.m_groups == 0,
        "m_groups must divide n_lo and lie in [1, n_lo]");
  check(dims.b_train < dims.t_coh, "training must leave room for data slots (b_train < t_coh)");
  check(dims.k_users <= dims.b_train, "k_users must not exceed b_train");

  check(pow.phi_split > 0.0 && pow.phi_split <= 1.0, "phi_split outside (0, 1]");
  check(pow.p_total > 0.0, "p_total must be positive");
  if (pow.phi_split < 1.0)
    check(dims.an_dims() >= 1, "AN requested (phi_split < 1) but n_bs/m_groups - k_users < 1");

  const double l_dims = static_cast<double>(dims.an_dims());
  const double budget = pow.p_data * dims.k_users + pow.q_an * std::max(l_dims, 0.0);
  check(std::abs(budget - pow.p_total) <= 1e-12 * pow.p_total,
        "power split does not conserve the total budget");

  check(hwi.kappa_t_mt >= 0 && hwi.kappa_r_bs >= 0 && hwi.kappa_t_bs >= 0 && hwi.kappa_r_mt >= 0,
        "distortion ratios must be nonnegative");
  check(hwi.sigma_psi_sq >= 0 && hwi.sigma_phi_sq >= 0, "phase variances must be nonnegative");
  check(hwi.xi_ul >= 1.0 && hwi.xi_dl >= 1.0,
        "amplified noise floors must be at least the thermal noise");

  check(pl.beta_k.n_elem == dims.k_users, "path-loss vector length differs from k_users");
  check(pl.beta_k.min() > 0.0 && pl.beta_eve > 0.0, "path losses must be strictly positive");

  check_schedule(sched, dims);

  const std::size_t design_slot = t0.value_or(dims.b_train + 1);
  check(design_slot > dims.b_train && design_slot <= dims.t_coh,
        "precoder-design slot must lie in the data window");

  ValidatedConfig cfg;
  cfg.dims_ = dims;
  cfg.hwi_ = hwi;
  cfg.sched_ = std::move(sched);
  cfg.pow_ = pow;
  cfg.pl_ = std::move(pl);
  cfg.t0_ = design_slot;
  return cfg;
}

PilotSchedule build_pilot_schedule(std::size_t b_train, std::size_t b_o,
                                   std::size_t k_users, double p_tau) {
  if (b_o == 0 || b_train % b_o != 0)
    throw ConfigError("sub-phase count must divide b_train evenly");
  if (k_users % b_o != 0)
    throw ConfigError("k_users must be divisible by the sub-phase count");
  if (p_tau <= 0.0) throw ConfigError("per-pilot power must be positive");

  const std::size_t b_b = b_train / b_o;
  const std::size_t per_phase = k_users / b_o;
  if (per_phase > b_b) throw ConfigError("more users per sub-phase than pilot slots");

  PilotSchedule s;
  s.b_o = b_o;
  s.p_tau = p_tau;
  s.sub_lengths.assign(b_o, b_b);
  s.assignments.resize(b_o);
  s.pilot_matrices.resize(b_o);
  for (std::size_t u = 0; u < k_users; ++u) s.assignments[u % b_o].push_back(u);

  // First |S_b| columns of the b_b-point DFT matrix, scaled so every entry
  // has magnitude sqrt(p_tau).
  const double amp = std::sqrt(p_tau);
  for (std::size_t b = 0; b < b_o; ++b) {
    arma::cx_mat omega(b_b, per_phase);
    for (std::size_t c = 0; c < per_phase; ++c)
      for (std::size_t r = 0; r < b_b; ++r) {
        const double ang = -2.0 * kPi * static_cast<double>(r) * static_cast<double>(c) /
                           static_cast<double>(b_b);
        omega(r, c) = amp * std::complex<double>(std::cos(ang), std::sin(ang));
      }
    s.pilot_matrices[b] = std::move(omega);
  }
  return s;
}

PowerAllocation derived_powers(double p_total, double phi_split, const SystemDims& dims) {
  if (phi_split <= 0.0 || phi_split > 1.0) throw ConfigError("phi_split outside (0, 1]");
  PowerAllocation p;
  p.p_total = p_total;
  p.phi_split = phi_split;
  p.p_data = phi_split * p_total / static_cast<double>(dims.k_users);
  if (phi_split < 1.0) {
    const long l = dims.an_dims();
    if (l < 1) throw ConfigError("AN requested (phi_split < 1) but n_bs/m_groups - k_users < 1");
    p.q_an = (1.0 - phi_split) * p_total / static_cast<double>(l);
  }
  return p;
}

namespace {

json config_echo(const ValidatedConfig& cfg) {
  const auto& d = cfg.dims();
  const auto& h = cfg.hwi();
  const auto& p = cfg.power();
  json j;
  j["dims"] = {{"n_bs", d.n_bs},       {"k_users", d.k_users}, {"n_eve", d.n_eve},
               {"n_lo", d.n_lo},       {"m_groups", d.m_groups}, {"t_coh", d.t_coh},
               {"b_train", d.b_train}};
  j["hwi"] = {{"kappa_t_mt", h.kappa_t_mt}, {"kappa_r_bs", h.kappa_r_bs},
              {"kappa_t_bs", h.kappa_t_bs}, {"kappa_r_mt", h.kappa_r_mt},
              {"sigma_psi_deg", h.sigma_psi_deg()}, {"sigma_phi_deg", h.sigma_phi_deg()},
              {"xi_ul_db", lin2db(h.xi_ul)}, {"xi_dl_db", lin2db(h.xi_dl)}};
  j["power"] = {{"p_total_db", lin2db(p.p_total)}, {"phi_split", p.phi_split},
                {"p_data", p.p_data}, {"q_an", p.q_an}};
  j["pilots"] = {{"b_o", cfg.schedule().b_o}, {"p_tau", cfg.schedule().p_tau}};
  j["path_loss"] = {{"beta_k", std::vector<double>(cfg.path_loss().beta_k.begin(),
                                                   cfg.path_loss().beta_k.end())},
                    {"beta_eve", cfg.path_loss().beta_eve}};
  j["t0"] = cfg.t0();
  return j;
}

}  // namespace

ValidatedConfig config_from_json(const std::string& json_text) {
  json j = json::parse(json_text);

  const auto& jd = j.at("dims");
  SystemDims dims;
  dims.n_bs = jd.at("n_bs").get<std::size_t>();
  dims.k_users = jd.at("k_users").get<std::size_t>();
  dims.n_eve = jd.at("n_eve").get<std::size_t>();
  dims.n_lo = jd.value("n_lo", std::size_t{1});
  dims.m_groups = jd.value("m_groups", std::size_t{1});
  dims.t_coh = jd.at("t_coh").get<std::size_t>();
  dims.b_train = jd.at("b_train").get<std::size_t>();

  const auto& jh = j.at("hwi");
  HwiParams hwi = HwiParams::from_degrees(
      jh.value("kappa_t_mt", 0.0), jh.value("kappa_r_bs", 0.0), jh.value("kappa_t_bs", 0.0),
      jh.value("kappa_r_mt", 0.0), jh.value("sigma_psi_deg", 0.0), jh.value("sigma_phi_deg", 0.0),
      db2lin(jh.value("xi_ul_db", 0.0)), db2lin(jh.value("xi_dl_db", 0.0)));

  const auto& jp = j.at("power");
  const double p_total = db2lin(jp.at("p_total_db").get<double>());
  PowerAllocation pow = derived_powers(p_total, jp.value("phi_split", 1.0), dims);

  const auto jpl = j.value("path_loss", json::object());
  PathLossProfile pl;
  if (jpl.contains("beta_k") && jpl["beta_k"].is_array()) {
    auto v = jpl["beta_k"].get<std::vector<double>>();
    pl.beta_k = arma::vec(v);
  } else {
    pl.beta_k = arma::vec(dims.k_users, arma::fill::value(jpl.value("beta_k", 1.0)));
  }
  pl.beta_eve = jpl.value("beta_eve", 1.0);

  const auto js = j.value("pilots", json::object());
  const std::size_t b_o = js.value("b_o", std::size_t{1});
  const double p_tau = js.contains("p_tau") ? js["p_tau"].get<double>()
                                            : p_total / static_cast<double>(dims.k_users);
  PilotSchedule sched = build_pilot_schedule(dims.b_train, b_o, dims.k_users, p_tau);

  std::optional<std::size_t> t0;
  if (j.contains("t0")) t0 = j["t0"].get<std::size_t>();

  return validate_config(dims, hwi, std::move(sched), pow, std::move(pl), t0);
}

std::string config_to_json(const ValidatedConfig& cfg) { return config_echo(cfg).dump(2); }

std::uint64_t config_hash(const ValidatedConfig& cfg) {
  const std::string s = config_echo(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace secmimo
