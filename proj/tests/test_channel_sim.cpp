// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "secmimo/channel_sim.hpp"
#include "test_util.hpp"

using namespace secmimo;
using secmimo::test::ConfigBuilder;

TEST_CASE("realizations are seed-deterministic") {
  ConfigBuilder b;
  const auto cfg = b.build();
  const auto r1 = draw_realization(cfg, 77, 20);
  const auto r2 = draw_realization(cfg, 77, 20);
  REQUIRE(arma::approx_equal(r1.g, r2.g, "absdiff", 0.0));
  REQUIRE(arma::approx_equal(r1.psi_traj, r2.psi_traj, "absdiff", 0.0));
  const auto r3 = draw_realization(cfg, 78, 20);
  REQUIRE_FALSE(arma::approx_equal(r1.g, r3.g, "absdiff", 1e-12));
}

TEST_CASE("zero deviation freezes the oscillators") {
  ConfigBuilder b;
  b.sigma_psi_deg = b.sigma_phi_deg = 0.0;
  const auto r = draw_realization(b.build(), 5, 50);
  REQUIRE(arma::abs(r.psi_traj).max() == 0.0);
  REQUIRE(arma::abs(r.phi_traj).max() == 0.0);
}

TEST_CASE("phase increments accumulate like a random walk") {
  ConfigBuilder b;
  b.sigma_psi_deg = 6.0;
  b.sigma_phi_deg = 0.0;
  const auto cfg = b.build();
  const std::size_t t_max = 100;
  double sum2 = 0.0;
  const std::size_t draws = 4000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto r = draw_realization(cfg, 1000 + i, t_max);
    const double endpoint = r.psi_traj(0, t_max - 1);
    sum2 += endpoint * endpoint;
  }
  const double expected = static_cast<double>(t_max) * cfg.hwi().sigma_psi_sq;
  REQUIRE(sum2 / draws == Catch::Approx(expected).epsilon(0.05));
}

TEST_CASE("training observations carry the modelled noise levels") {
  SECTION("distortion-free single user leaves only the amplified noise") {
    ConfigBuilder b;
    b.k_users = 1;
    b.b_train = 1;
    b.b_o = 1;
    b.t_coh = 10;
    b.n_eve = 1;
    b.phi = 1.0;
    b.kt_mt = b.kr_bs = 0.0;
    b.sigma_psi_deg = b.sigma_phi_deg = 0.0;
    b.p_tau = 2.5;
    const auto cfg = b.build();
    Rng rng(3);
    double resid2 = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < 400; ++i) {
      const auto real = draw_realization(cfg, 50 + i, 2);
      const auto obs = simulate_training(real, cfg, rng);
      const arma::cx_vec expect = real.g.col(0) * cfg.schedule().pilot_matrices[0](0, 0);
      resid2 += arma::accu(arma::square(arma::abs(obs.y.col(0) - expect)));
      count += cfg.dims().n_bs;
    }
    REQUIRE(resid2 / count == Catch::Approx(1.58).epsilon(0.05));
  }
  SECTION("BS receive distortion follows the realized channel power") {
    ConfigBuilder b;
    b.k_users = 2;
    b.b_train = 2;
    b.b_o = 1;
    b.t_coh = 10;
    b.kt_mt = 0.0;
    b.kr_bs = 0.36;  // exaggerated so the level is measurable above the floor
    b.sigma_psi_deg = b.sigma_phi_deg = 0.0;
    const auto cfg = b.build();
    const auto real = draw_realization(cfg, 9, 3);  // one fixed channel
    Rng rng(10);
    const std::size_t reps = 10000;
    arma::vec resid2(cfg.dims().n_bs, arma::fill::zeros);
    for (std::size_t i = 0; i < reps; ++i) {
      const auto obs = simulate_training(real, cfg, rng);
      arma::cx_vec expect(cfg.dims().n_bs, arma::fill::zeros);
      for (std::size_t c = 0; c < 2; ++c)
        expect += real.g.col(c) * cfg.schedule().pilot_matrices[0](0, c);
      resid2 += arma::square(arma::abs(obs.y.col(0) - expect));
    }
    resid2 /= static_cast<double>(reps);
    const arma::vec expected_var =
        0.36 * cfg.schedule().p_tau *
            (arma::square(arma::abs(real.g.col(0))) + arma::square(arma::abs(real.g.col(1)))) +
        1.58;
    // compare the array-average level, which the trial count supports
    REQUIRE(arma::mean(resid2) == Catch::Approx(arma::mean(expected_var)).epsilon(0.05));
  }
}

TEST_CASE("single-slot estimates match the scalar combining formula") {
  ConfigBuilder b;
  b.b_o = 4;
  b.sigma_psi_deg = b.sigma_phi_deg = 6.0;
  const auto cfg = b.build();
  TrainingStats stats(cfg);
  Rng rng(4);
  const auto real = draw_realization(cfg, 21, cfg.t0());
  const auto obs = simulate_training(real, cfg, rng);
  const auto est = lmmse_estimate(obs, stats, cfg.t0());
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t slot = k + 1;  // user k trains alone in slot k+1
    const double s2 = cfg.hwi().sigma_sum_sq();
    const std::complex<double> w = cfg.schedule().pilot_matrices[k](0, 0);
    const std::complex<double> v =
        std::exp(-0.5 * s2 * static_cast<double>(cfg.t0() - slot)) * w /
        (2.5 * (1.0 + 0.045) + 1.58);
    const arma::cx_vec direct = std::conj(v) * obs.y.col(slot - 1);
    REQUIRE(arma::abs(est.col(k) - direct).max() < 1e-12);
  }
}

TEST_CASE("estimates and errors are empirically uncorrelated") {
  ConfigBuilder b;
  b.n_bs = 32;
  b.sigma_psi_deg = b.sigma_phi_deg = 6.0;
  const auto cfg = b.build();
  TrainingStats stats(cfg);
  const std::size_t trials = 4000;
  arma::cx_double acc(0, 0);
  double acc2 = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = Rng::for_trial(99, i);
    const auto real = draw_realization(cfg, 99, cfg.t0(), &rng);
    const auto obs = simulate_training(real, cfg, rng);
    const auto est = lmmse_estimate(obs, stats, cfg.t0());
    const arma::cx_vec g_t = real.link_rotation(0, cfg.t0(), cfg.dims().n_lo) % real.g.col(0);
    const arma::cx_vec err = g_t - est.col(0);
    const arma::cx_double prod = arma::cdot(est.col(0), err) / double(cfg.dims().n_bs);
    acc += prod;
    acc2 += std::norm(prod);
  }
  const arma::cx_double mean = acc / double(trials);
  const double var = acc2 / trials - std::norm(mean);
  const double se = std::sqrt(var / trials);
  REQUIRE(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("precoder invariants hold for every group count") {
  ConfigBuilder b;
  b.n_bs = 64;
  b.k_users = 4;
  b.b_train = 4;
  b.n_lo = 4;
  for (std::size_t m_o : {1ul, 2ul, 4ul}) {
    b.m_groups = m_o;
    const auto cfg = b.build();
    Rng rng(7);
    arma::cx_mat est(64, 4);
    for (auto& v : est) v = rng.cnormal(1.0);
    const auto pre = build_precoders(est, cfg);

    for (std::size_t k = 0; k < 4; ++k)
      REQUIRE(arma::norm(pre.f_mat.col(k)) == Catch::Approx(1.0).margin(1e-12));

    const std::size_t l = cfg.an_dims();
    REQUIRE(pre.a_mat.n_cols == l);
    if (m_o == 1) REQUIRE(l == 60);

    const arma::cx_mat gram = pre.a_mat.t() * pre.a_mat;
    const arma::cx_mat eye = arma::cx_mat(arma::eye(l, l), arma::zeros(l, l));
    REQUIRE(arma::abs(gram - eye).max() < 1e-10);

    const std::size_t group = 64 / m_o;
    for (std::size_t m = 0; m < m_o; ++m) {
      const arma::cx_mat block_est = est.rows(m * group, (m + 1) * group - 1);
      const arma::cx_mat block_a = pre.a_mat.rows(m * group, (m + 1) * group - 1);
      REQUIRE(arma::abs(block_est.t() * block_a).max() < 1e-10);
    }
  }
}

TEST_CASE("ensemble runs are reproducible and policy-independent") {
  ConfigBuilder b;
  b.n_bs = 32;
  b.t_coh = 30;
  const auto cfg = b.build();
  McOptions opts;
  opts.trials = 64;
  opts.seed = 11;
  opts.policy = ExecPolicy::serial;
  const auto a = mc_ensemble(cfg, {5, 15, 30}, opts);
  const auto a2 = mc_ensemble(cfg, {5, 15, 30}, opts);
  opts.policy = ExecPolicy::openmp;
  const auto c = mc_ensemble(cfg, {5, 15, 30}, opts);
  for (std::size_t ti = 0; ti < 3; ++ti)
    for (std::size_t k = 0; k < 4; ++k) {
      REQUIRE(a.mc_gamma_k[ti][k] == a2.mc_gamma_k[ti][k]);
      REQUIRE(a.mc_gamma_k[ti][k] == c.mc_gamma_k[ti][k]);
    }
  REQUIRE(a.mc_eve_capacity == c.mc_eve_capacity);
  REQUIRE(a.mc_secrecy_rate == c.mc_secrecy_rate);
}

TEST_CASE("frozen oscillators make every slot statistically identical") {
  ConfigBuilder b;
  b.n_bs = 32;
  b.t_coh = 40;
  b.sigma_psi_deg = b.sigma_phi_deg = 0.0;
  const auto cfg = b.build();
  McOptions opts;
  opts.trials = 50;
  opts.seed = 3;
  const auto r = mc_ensemble(cfg, {5, 40}, opts);
  for (std::size_t k = 0; k < 4; ++k)
    REQUIRE(r.mc_gamma_k[0][k] == r.mc_gamma_k[1][k]);
  REQUIRE(r.mc_eve_capacity[0] == r.mc_eve_capacity[1]);
}

TEST_CASE("clean single-user beamforming approaches the noise-limited SINR") {
  ConfigBuilder b;
  b.n_bs = 256;
  b.k_users = 1;
  b.b_train = 1;
  b.b_o = 1;
  b.t_coh = 10;
  b.n_eve = 1;
  b.phi = 1.0;
  b.kt_mt = b.kr_bs = b.kt_bs = b.kr_mt = 0.0;
  b.sigma_psi_deg = b.sigma_phi_deg = 0.0;
  b.p_tau = 1e9;  // essentially perfect channel knowledge
  const auto cfg = b.build();
  McOptions opts;
  opts.trials = 1000;
  opts.seed = 44;
  const auto gam = mc_downlink_sinr(cfg, cfg.t0(), opts);
  // Exact single-user oracle: the received gain is the channel norm, so the
  // SINR is p (E||g||)^2 / (p var||g|| + xi_dl) with the chi-distribution
  // moments (E||g||)^2 = n - 1/4 + O(1/n) and var||g|| = 1/4 + O(1/n).
  const double n = 256.0;
  const double expect = 10.0 * (n - 0.25) / (10.0 * 0.25 + 1.58);
  REQUIRE(gam[0] == Catch::Approx(expect).epsilon(0.10));
  // the noise-limited level p*n/xi_dl is approached only once the beam-norm
  // variance term is negligible against the noise floor
  REQUIRE(gam[0] < 10.0 * n / 1.58);
}

TEST_CASE("ensemble second moments dominate the squared means") {
  ConfigBuilder b;
  b.n_bs = 32;
  const auto cfg = b.build();
  McOptions opts;
  opts.trials = 100;
  opts.seed = 2;
  const auto r = mc_ensemble(cfg, {cfg.t0()}, opts);
  REQUIRE(r.trial_count == 100);
  for (std::size_t k = 0; k < 4; ++k)
    REQUIRE(r.second_moments[0](k, k) >= std::norm(r.gain_mean[0][k]) - 1e-9);
  REQUIRE_THROWS(mc_ensemble(cfg, {cfg.t0()}, McOptions{0, 1}));
  REQUIRE_THROWS(mc_ensemble(cfg, {}, opts));
  REQUIRE_THROWS(mc_ensemble(cfg, {1}, opts));  // slot inside the training phase
}

TEST_CASE("quadrupling the trial count roughly halves the standard error") {
  ConfigBuilder b;
  b.n_bs = 32;
  const auto cfg = b.build();
  McOptions opts;
  opts.seed = 17;
  opts.trials = 800;
  const auto small = mc_ensemble(cfg, {cfg.t0()}, opts);
  opts.trials = 3200;
  const auto large = mc_ensemble(cfg, {cfg.t0()}, opts);
  const double ratio = small.mc_gamma_se[0][0] / large.mc_gamma_se[0][0];
  REQUIRE(ratio == Catch::Approx(2.0).epsilon(0.30));
}

TEST_CASE("eavesdropper SINR ignores its own path loss") {
  ConfigBuilder b;
  b.n_bs = 32;
  McOptions opts;
  opts.trials = 8;
  opts.seed = 123;
  b.beta_eve = 1.0;
  const auto c1 = mc_eve_capacity(b.build(), 5, opts);
  b.beta_eve = 10.0;
  const auto c2 = mc_eve_capacity(b.build(), 5, opts);
  REQUIRE_FALSE(c1.unbounded);
  REQUIRE(c1.bits == Catch::Approx(c2.bits).epsilon(1e-10));
}

TEST_CASE("eavesdropper capacity edge cases") {
  SECTION("AN-only jamming stays finite") {
    ConfigBuilder b;
    b.n_bs = 32;
    b.kt_bs = 0.0;
    b.phi = 0.5;  // q > 0, L = 12 >= n_eve
    McOptions opts;
    opts.trials = 20;
    opts.seed = 5;
    const auto c = mc_eve_capacity(b.build(), 5, opts);
    REQUIRE_FALSE(c.unbounded);
    REQUIRE(std::isfinite(c.bits));
  }
  SECTION("no jamming at all is singular") {
    ConfigBuilder b;
    b.n_bs = 32;
    b.kt_bs = 0.0;
    b.phi = 1.0;
    McOptions opts;
    opts.trials = 4;
    opts.seed = 5;
    const auto c = mc_eve_capacity(b.build(), 5, opts);
    REQUIRE(c.unbounded);
  }
}

TEST_CASE("slot-grid weights reproduce the exact window sum") {
  ConfigBuilder b;
  b.t_coh = 24;
  const auto cfg = b.build();
  SECTION("full grid gives unit weights") {
    const auto grid = make_t_grid(cfg, 0);
    REQUIRE(grid.size() == 20);
    for (double w : t_grid_weights(cfg, grid)) REQUIRE(w == 1.0);
  }
  SECTION("subsampled weights conserve the window length") {
    const auto grid = make_t_grid(cfg, 5);
    const auto w = t_grid_weights(cfg, grid);
    double sum = 0.0;
    for (double x : w) sum += x;
    REQUIRE(sum == Catch::Approx(20.0).margin(1e-12));
  }
}

TEST_CASE("secrecy estimate equals the assembled per-slot sum on a full grid") {
  ConfigBuilder b;
  b.n_bs = 32;
  b.t_coh = 20;
  const auto cfg = b.build();
  McOptions opts;
  opts.trials = 40;
  opts.seed = 9;
  const auto grid = make_t_grid(cfg, 0);
  const auto r = mc_secrecy_rate(cfg, grid, opts);
  for (std::size_t k = 0; k < 4; ++k) {
    double manual = 0.0;
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      const double v = std::log2(1.0 + r.mc_gamma_k[ti][k]) - r.mc_eve_capacity[ti];
      if (v > 0) manual += v;
    }
    manual /= static_cast<double>(cfg.dims().t_coh);
    REQUIRE(r.mc_secrecy_rate[k] == Catch::Approx(manual).margin(1e-15));
  }
}
