#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "vrs/config.hpp"

using namespace vrs;

TEST_SUITE("config") {

TEST_CASE("empty physics section reproduces the device defaults") {
    const RunConfig cfg = parse_config("[physics]\n[run]\nmode = resonance\n");
    CHECK(cfg.g == 41.0);
    CHECK(cfg.kappa == 66.0);
    CHECK(cfg.gamma == 0.28);
    CHECK(cfg.gamma_ph == 3.0);
    CHECK(cfg.p_a == 0.065);
    CHECK(cfg.p_c == 0.0);
    CHECK(cfg.theta_a == 42.6);
    CHECK(cfg.phi_qd == 80.8);
    CHECK(cfg.beta == -31.0);
    CHECK(cfg.theta_c == 0.0);
    CHECK(cfg.amp_ratio_ab == 2.85);
    CHECK(cfg.instrument_fwhm == 13.5);
    CHECK(cfg.n_max == 3);
    CHECK(cfg.grid_points == 2001);
    CHECK(effective_g(cfg.qed_params()) == doctest::Approx(41.0).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config("[physics]\nkapa = 66\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("kapa") != std::string::npos);
    }
}

TEST_CASE("negative rates are rejected") {
    CHECK_THROWS_AS(parse_config("[physics]\ngamma = -1\n"), ValidationError);
}

TEST_CASE("malformed lines carry their position") {
    try {
        parse_config("[physics]\ngamma 0.28\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("keys outside a section are malformed") {
    CHECK_THROWS_AS(parse_config("gamma = 0.28\n"), ParseError);
}

TEST_CASE("duplicate keys are rejected") {
    CHECK_THROWS_AS(parse_config("[physics]\ngamma = 1\ngamma = 2\n"),
                    ValidationError);
}

TEST_CASE("theta and alpha are mutually exclusive") {
    CHECK_THROWS_AS(parse_config("[detection]\ntheta = 10\nalpha = 20\n"),
                    ValidationError);
}

TEST_CASE("unknown modes and sections are rejected") {
    CHECK_THROWS_AS(parse_config("[run]\nmode = detuningsweep\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config("[bad]\nx = 1\n"), ValidationError);
}

TEST_CASE("inverted grids and orthogonal dipoles are config errors") {
    CHECK_THROWS_AS(parse_config("[grid]\nstart = 10\nstop = -10\n"),
                    ValidationError);
    // beta = 90, theta_a = 0: the dipole cannot reach the cavity field, so
    // the requested effective g is unachievable.
    CHECK_THROWS_AS(
        parse_config("[physics]\nbeta = 90\ntheta_a = 0\ng = 41\n"),
        ValidationError);
}

TEST_CASE("sweep modes require a sweep list") {
    CHECK_THROWS_AS(parse_config("[run]\nmode = hwp-sweep\n"), ValidationError);
    const RunConfig ok =
        parse_config("[run]\nmode = hwp-sweep\nsweep = 47.5, 53.5\n");
    CHECK(ok.sweep == std::vector<double>{47.5, 53.5});
}

TEST_CASE("serialization round-trips exactly") {
    RunConfig cfg;
    cfg.omega_a = 0.1;
    cfg.omega_c = -17.25;
    cfg.g = 40.678901234567;
    cfg.gamma = 1e-7;
    cfg.kappa = 123.456;
    cfg.mode = RunMode::detuning_sweep;
    cfg.sweep = {-100.0, -33.3, 0.0, 33.3, 100.0};
    cfg.out_dir = "results/run1";
    cfg.svg = true;
    cfg.grid_points = 513;
    cfg.grid_start = {-300.5};
    cfg.grid_stop = {299.5};
    CHECK(parse_config(serialize_config(cfg)) == cfg);

    cfg.mode = RunMode::hwp_sweep;
    cfg.sweep = {47.5, 50.5, 53.5};
    cfg.theta_from_alpha = true;
    cfg.alpha = 50.5;
    CHECK(parse_config(serialize_config(cfg)) == cfg);

    const RunConfig defaults = parse_config("[physics]\n");
    CHECK(parse_config(serialize_config(defaults)) == defaults);
}

TEST_CASE("random valid configs round-trip exactly") {
    std::mt19937 rng(0xc0f1);
    auto pick = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng()) / 4294967296.0);
    };
    for (int trial = 0; trial < 40; ++trial) {
        RunConfig cfg;
        cfg.omega_a = pick(-100.0, 100.0);
        cfg.omega_c = pick(-100.0, 100.0);
        cfg.g = pick(0.5, 80.0);
        cfg.gamma = std::exp(pick(-18.0, 4.0));
        cfg.kappa = std::exp(pick(-18.0, 4.0));
        cfg.gamma_ph = std::exp(pick(-18.0, 4.0));
        cfg.p_a = std::exp(pick(-18.0, 0.0));
        cfg.p_c = std::exp(pick(-18.0, 0.0));
        cfg.theta_a = pick(0.0, 90.0);
        cfg.phi_qd = pick(0.0, 180.0);
        cfg.beta = pick(-180.0, 180.0);
        cfg.n_max = 1 + static_cast<int>(rng() % 6);
        cfg.theta_from_alpha = (rng() & 1u) != 0;
        cfg.theta = pick(0.0, 180.0);
        cfg.alpha = pick(0.0, 180.0);
        cfg.amp_ratio_ab = pick(0.1, 10.0);
        cfg.overlap_p = pick(0.0, 1.0);
        cfg.theta_c = pick(-180.0, 180.0);
        cfg.instrument_fwhm = pick(0.0, 30.0);
        if (rng() & 1u) {
            cfg.grid_start = pick(-500.0, -10.0);
            cfg.grid_stop = pick(10.0, 500.0);
        }
        cfg.grid_points = 2 + rng() % 4000;
        const int mode_pick = static_cast<int>(rng() % 3);
        cfg.mode = mode_pick == 0 ? RunMode::resonance
                   : mode_pick == 1 ? RunMode::detuning_sweep
                                    : RunMode::hwp_sweep;
        if (cfg.mode != RunMode::resonance) {
            const std::size_t n = 1 + rng() % 5;
            for (std::size_t i = 0; i < n; ++i)
                cfg.sweep.push_back(pick(-150.0, 150.0));
        }
        cfg.out_dir = "out/trial" + std::to_string(trial);
        cfg.svg = (rng() & 1u) != 0;
        CHECK(parse_config(serialize_config(cfg)) == cfg);
    }
}

TEST_CASE("comments and blank lines are ignored") {
    const RunConfig cfg = parse_config(
        "# device defaults\n\n[physics]\n; alternative comment style\n"
        "kappa = 70\n");
    CHECK(cfg.kappa == 70.0);
}

TEST_CASE("the default grid is centered between the two resonances") {
    const RunConfig centered = parse_config("[physics]\nomega_a = 60\nomega_c = 60\n");
    CHECK(centered.frequency_grid().start == doctest::Approx(-190.0));
    CHECK(centered.frequency_grid().stop == doctest::Approx(310.0));
    const RunConfig fixed = parse_config("[grid]\nstart = -10\nstop = 10\n");
    CHECK(fixed.frequency_grid().start == -10.0);
    CHECK(fixed.frequency_grid().stop == 10.0);
}

TEST_CASE("alpha input is mapped through the HWP relation") {
    const RunConfig cfg = parse_config("[detection]\nalpha = 50.5\n");
    CHECK(cfg.theta_effective() == doctest::Approx(90.0));
    CHECK(cfg.detection_params().theta_proj == doctest::Approx(90.0));
}

}  // TEST_SUITE
