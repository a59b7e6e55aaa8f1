// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "secmimo/config.hpp"
#include "test_util.hpp"

using namespace secmimo;
using secmimo::test::ConfigBuilder;

TEST_CASE("validate_config accepts a standard downlink layout") {
  ConfigBuilder b;
  b.n_bs = 128;
  b.k_users = 4;
  b.n_lo = 2;
  b.m_groups = 2;
  b.b_train = 4;
  b.t_coh = 500;
  b.phi = 0.5;
  REQUIRE_NOTHROW(b.build());
}

TEST_CASE("validate_config rejects broken layouts") {
  SECTION("antenna count not divisible by oscillator count") {
    ConfigBuilder b;
    b.n_bs = 128;
    b.n_lo = 3;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
  }
  SECTION("no AN dimensions left while AN is requested") {
    ConfigBuilder b;
    b.n_bs = 128;
    b.m_groups = 4;
    b.n_lo = 4;
    b.k_users = 32;
    b.b_train = 32;
    b.phi = 0.5;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
    b.phi = 1.0;  // without AN the same layout is fine
    REQUIRE_NOTHROW(b.build());
  }
  SECTION("data fraction outside (0,1]") {
    ConfigBuilder b;
    b.phi = 0.0;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
    b.phi = 1.2;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
  }
  SECTION("training longer than the coherence block") {
    ConfigBuilder b;
    b.t_coh = 4;
    b.b_train = 4;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
  }
  SECTION("more users than training slots") {
    ConfigBuilder b;
    b.k_users = 8;
    b.b_train = 4;
    b.b_o = 1;
    REQUIRE_THROWS_AS(b.build(), ConfigError);
  }
  SECTION("empty sub-phase") {
    PilotSchedule s = build_pilot_schedule(4, 1, 4, 2.5);
    s.assignments[0].clear();
    SystemDims dims{128, 4, 4, 2, 2, 500, 4};
    HwiParams hwi;
    hwi.xi_ul = hwi.xi_dl = 1.58;
    PathLossProfile pl{arma::vec(4, arma::fill::ones), 1.0};
    REQUIRE_THROWS_AS(
        validate_config(dims, hwi, std::move(s), derived_powers(10.0, 0.5, dims), std::move(pl)),
        ConfigError);
  }
}

TEST_CASE("pilot schedules cover both orthogonality extremes") {
  SECTION("single sub-phase serves everyone at once") {
    const auto s = build_pilot_schedule(16, 1, 16, 10.0 / 16.0);
    REQUIRE(s.b_o == 1);
    REQUIRE(s.pilot_matrices[0].n_rows == 16);
    REQUIRE(s.pilot_matrices[0].n_cols == 16);
  }
  SECTION("one user per slot") {
    const auto s = build_pilot_schedule(16, 16, 16, 10.0 / 16.0);
    REQUIRE(s.b_o == 16);
    for (std::size_t b = 0; b < 16; ++b) {
      REQUIRE(s.pilot_matrices[b].n_rows == 1);
      REQUIRE(s.assignments[b].size() == 1);
    }
  }
  SECTION("non-divisible partitions are rejected") {
    REQUIRE_THROWS_AS(build_pilot_schedule(16, 3, 16, 1.0), ConfigError);
    REQUIRE_THROWS_AS(build_pilot_schedule(16, 4, 6, 1.0), ConfigError);
  }
}

TEST_CASE("pilot Gram matrices equal b_b * p_tau * I") {
  for (std::size_t b_o : {1ul, 2ul, 4ul, 8ul, 16ul}) {
    const double p_tau = 0.625;
    const auto s = build_pilot_schedule(16, b_o, 16, p_tau);
    for (std::size_t b = 0; b < b_o; ++b) {
      const arma::cx_mat& omega = s.pilot_matrices[b];
      const arma::cx_mat gram = omega.t() * omega;
      const double scale = static_cast<double>(omega.n_rows) * p_tau;
      const arma::cx_mat expected =
          scale * arma::cx_mat(arma::eye(omega.n_cols, omega.n_cols),
                               arma::zeros(omega.n_cols, omega.n_cols));
      REQUIRE(arma::abs(gram - expected).max() < 1e-12 * scale);
    }
  }
}

TEST_CASE("derived powers split and conserve the budget") {
  SECTION("quarter of the budget on data") {
    SystemDims dims{128, 32, 16, 1, 1, 500, 32};
    const auto p = derived_powers(10.0, 0.25, dims);
    REQUIRE(p.p_data == Catch::Approx(0.078125).epsilon(1e-14));
    REQUIRE(p.q_an == Catch::Approx(0.078125).epsilon(1e-14));
  }
  SECTION("no AN at full data fraction") {
    SystemDims dims{128, 4, 4, 2, 2, 500, 4};
    const auto p = derived_powers(10.0, 1.0, dims);
    REQUIRE(p.q_an == 0.0);
    REQUIRE(p.p_data == Catch::Approx(2.5).epsilon(1e-14));
  }
  SECTION("conservation across the split grid") {
    SystemDims dims{128, 4, 4, 2, 2, 500, 4};
    const double l = static_cast<double>(dims.an_dims());
    for (int i = 1; i <= 10; ++i) {
      const double phi = 0.1 * i;
      const auto p = derived_powers(10.0, phi, dims);
      const double total = p.p_data * dims.k_users + p.q_an * l;
      REQUIRE(total == Catch::Approx(10.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("JSON ingestion converts units at the boundary only") {
  const char* doc = R"({
    "dims": {"n_bs": 128, "k_users": 4, "n_eve": 4, "n_lo": 2, "m_groups": 2,
             "t_coh": 500, "b_train": 4},
    "hwi": {"kappa_t_mt": 0.0225, "kappa_r_bs": 0.0225, "kappa_t_bs": 0.0225,
            "kappa_r_mt": 0.0225, "sigma_psi_deg": 0.6, "sigma_phi_deg": 0.6,
            "xi_ul_db": 3.0, "xi_dl_db": 3.0},
    "power": {"p_total_db": 10.0, "phi_split": 0.5},
    "pilots": {"b_o": 1}
  })";
  const auto cfg = config_from_json(doc);
  REQUIRE(cfg.power().p_total == Catch::Approx(10.0).epsilon(1e-12));
  REQUIRE(cfg.hwi().xi_ul == Catch::Approx(db2lin(3.0)).epsilon(1e-12));
  REQUIRE(cfg.hwi().sigma_psi_sq == Catch::Approx(deg2rad(0.6) * deg2rad(0.6)).epsilon(1e-12));
  REQUIRE(cfg.schedule().p_tau == Catch::Approx(2.5).epsilon(1e-12));
  REQUIRE(cfg.t0() == 5);

  REQUIRE_THROWS(config_from_json("{ not json"));
  REQUIRE_THROWS(config_from_json("{}"));
  REQUIRE(!config_to_json(cfg).empty());
}
