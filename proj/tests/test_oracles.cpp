#include "shjb/integrator.hpp"
#include "shjb/oracles.hpp"
#include "shjb/presets.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace shjb;
using namespace shjb::testutil;

namespace {

SolverConfig desk_config(double T) {
    SolverConfig cfg;
    cfg.grid = make_grid(1, 128);
    cfg.mu = 0.1;
    cfg.gamma = 0.0;
    cfg.k = 3.0;
    cfg.k_prime = 7;
    cfg.dt = 1e-4;
    cfg.horizon = T;
    cfg.scheme = Scheme::ito_exp_em;
    cfg.potential = make_field(cfg.grid);
    cfg.initial = sin_field(cfg.grid);
    cfg.record_stride = 10;
    cfg.snapshot_stride = 10;
    return cfg;
}

} // namespace

TEST_CASE("cole-hopf: zero data stays zero") {
    TorusGrid g = make_grid(1, 64);
    std::vector<double> times{0.0, 0.05, 0.1};
    auto fields = cole_hopf_exact(make_field(g), 0.1, nullptr, times);
    for (const auto& f : fields) CHECK(sup_norm(f) < 1e-13);
}

TEST_CASE("cole-hopf: mean decays at the rate of the squared gradient") {
    TorusGrid g = make_grid(1, 128);
    SpatialField u0 = sin_field(g);
    const double h = 1e-3, t = 0.05;
    std::vector<double> times{t - h, t, t + h};
    auto fields = cole_hopf_exact(u0, 0.1, nullptr, times);
    double fd = (mean_value(fields[2]) - mean_value(fields[0])) / (2.0 * h);
    double rhs = -mean_value(truncated_nonlinearity(nullptr, fields[1]));
    CHECK(std::abs(fd - rhs) <= 1e-5);
}

TEST_CASE("cole-hopf: split-step converges at second order in the substep") {
    TorusGrid g = make_grid(1, 128);
    SpatialField u0 = sin_field(g);
    SpatialField well = field_preset(g, "neg_cos_well");
    std::vector<double> times{0.1};
    auto at = [&](double h) { return cole_hopf_exact(u0, 0.1, &well, times, h)[0]; };
    SpatialField fine = at(1e-5);
    double e1 = max_abs_diff(at(4e-3), fine);
    double e2 = max_abs_diff(at(2e-3), fine);
    CHECK(e1 / e2 > 3.5); // Strang is O(h^2); ratio near 4
    CHECK(e1 / e2 < 4.5);
    // at the default substep the splitting error sits far below every
    // solver-comparison tolerance
    CHECK(max_abs_diff(at(1e-4), fine) < 1e-8);
}

TEST_CASE("cole-hopf: positivity failure aborts with a diagnostic") {
    TorusGrid g = make_grid(1, 64);
    std::vector<double> times{0.1};
    CHECK_THROWS_AS(cole_hopf_exact(sin_field(g, 50.0), 0.1, nullptr, times),
                    std::runtime_error);
}

TEST_CASE("solver without noise tracks the cole-hopf oracle") {
    SolverConfig cfg = desk_config(0.02);
    NoisePath path = sample_path(1, 1, cfg.dt, cfg.steps());
    Trajectory traj = integrate(cfg, path);
    auto oracle = cole_hopf_exact(cfg.initial, cfg.mu, nullptr, traj.snapshot_times);
    auto report = compare_fields("cole_hopf", traj.snapshot_times, traj.snapshots, oracle,
                                 1e-4);
    CHECK(report.pass);
}

TEST_CASE("split-step cole-hopf handles a potential") {
    // reference: solver with V on and nonlinearity on, short horizon
    SolverConfig cfg = desk_config(0.02);
    cfg.potential = field_preset(cfg.grid, "neg_cos_well");
    NoisePath path = sample_path(1, 1, cfg.dt, cfg.steps());
    Trajectory traj = integrate(cfg, path);
    auto oracle = cole_hopf_exact(cfg.initial, cfg.mu, &cfg.potential, traj.snapshot_times,
                                  cfg.dt / 10.0);
    auto report =
        compare_fields("cole_hopf_V", traj.snapshot_times, traj.snapshots, oracle, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("shift oracle") {
    TorusGrid g = make_grid(1, 128);
    SpatialField u0 = sin_field(g);
    NoisePath path = sample_path(11, 1, 1e-4, 1000);
    std::vector<double> times{0.0, 0.05, 0.1};

    SUBCASE("nu = 0 reduces to the deterministic oracle") {
        auto shifted = shift_oracle(u0, 0.1, 0.0, path, times);
        auto plain = cole_hopf_exact(u0, 0.1, nullptr, times);
        for (std::size_t s = 0; s < times.size(); ++s)
            CHECK(shifted[s].values == plain[s].values);
    }
    SUBCASE("phase shift is unitary") {
        auto shifted = shift_oracle(u0, 0.1, 0.04, path, times);
        auto plain = cole_hopf_exact(u0, 0.1, nullptr, times);
        for (std::size_t s = 0; s < times.size(); ++s)
            CHECK(l2_norm(shifted[s]) == doctest::Approx(l2_norm(plain[s])).epsilon(1e-12));
    }
    SUBCASE("shift equals pointwise displacement") {
        const double nu = 0.04;
        auto shifted = shift_oracle(u0, 0.1, nu, path, times);
        auto plain = cole_hopf_exact(u0, 0.1, nullptr, times);
        for (std::size_t s = 0; s < times.size(); ++s) {
            int step = static_cast<int>(std::llround(times[s] / path.dt));
            double disp = std::sqrt(nu) * path.cumulative(step, 0);
            PointFn eval = field_evaluator(plain[s]);
            SpatialField direct = sample(g, [&](std::span<const double> x) {
                double y = x[0] - disp;
                return eval(std::span<const double>(&y, 1));
            });
            CHECK(max_abs_diff(shifted[s], direct) <= 1e-10);
        }
    }
    SUBCASE("off-grid sample times are rejected") {
        std::vector<double> bad{0.05 + 0.3e-4};
        CHECK_THROWS(shift_oracle(u0, 0.1, 0.04, path, bad));
    }
}

TEST_CASE("strat_heun run matches the shift oracle within scheme error") {
    SolverConfig cfg = desk_config(0.02);
    cfg.scheme = Scheme::strat_heun;
    const double nu = 0.04;
    cfg.transport = transport_preset(cfg.grid, "constant", -std::sqrt(nu), 0.0, cfg.k);
    NoisePath path = sample_path(21, 1, cfg.dt, cfg.steps());
    Trajectory traj = integrate(cfg, path);
    auto oracle = shift_oracle(cfg.initial, cfg.mu, nu, path, traj.snapshot_times);
    auto report =
        compare_fields("shift", traj.snapshot_times, traj.snapshots, oracle, 5e-3);
    CHECK(report.pass);
}

TEST_CASE("feynman-kac monte carlo") {
    TorusGrid g = make_grid(1, 128);
    auto zero_fn = [](std::span<const double>) { return 0.0; };

    SUBCASE("zero data gives exactly zero with a degenerate band") {
        std::vector<std::vector<double>> pts{{0.5}, {2.5}};
        auto res = feynman_kac_mc(zero_fn, zero_fn, 0.1, 0.1, pts, 1, 1000, 1);
        for (double v : res.value) CHECK(v == 0.0);
        for (double w : res.half_width) CHECK(w == 0.0);
    }
    SUBCASE("matches cole-hopf within three half-widths") {
        SpatialField u0 = sin_field(g);
        PointFn u0_eval = field_evaluator(u0);
        std::vector<double> t_final{0.1};
        auto exact = cole_hopf_exact(u0, 0.1, nullptr, t_final);
        PointFn exact_eval = field_evaluator(exact[0]);
        std::vector<std::vector<double>> pts{{0.7}, {2.1}, {4.9}};
        auto res = feynman_kac_mc(u0_eval, zero_fn, 0.1, 0.1, pts, 1, 20000, 12345);
        for (std::size_t p = 0; p < pts.size(); ++p) {
            double want = exact_eval(pts[p]);
            CHECK(std::abs(res.value[p] - want) <= 3.0 * res.half_width[p]);
        }
    }
    SUBCASE("nonzero potential against the split-step reference") {
        SpatialField u0 = sin_field(g);
        SpatialField well = field_preset(g, "neg_cos_well"); // -(1 + cos x)
        PointFn u0_eval = [](std::span<const double> x) { return std::sin(x[0]); };
        PointFn v_eval = [](std::span<const double> x) { return -(1.0 + std::cos(x[0])); };
        std::vector<double> t_final{0.1};
        auto reference = cole_hopf_exact(u0, 0.1, &well, t_final, 1e-5);
        PointFn ref_eval = field_evaluator(reference[0]);
        std::vector<std::vector<double>> pts{{0.7}, {2.1}, {4.9}};
        auto res = feynman_kac_mc(u0_eval, v_eval, 0.1, 0.1, pts, 1, 20000, 31);
        for (std::size_t p = 0; p < pts.size(); ++p)
            CHECK(std::abs(res.value[p] - ref_eval(pts[p])) <= 3.0 * res.half_width[p]);
    }
    SUBCASE("tripling the paths shrinks the band by about sqrt(3)") {
        SpatialField u0 = sin_field(g);
        PointFn u0_eval = field_evaluator(u0);
        std::vector<std::vector<double>> pts{{1.3}};
        auto small = feynman_kac_mc(u0_eval, zero_fn, 0.1, 0.1, pts, 1, 10000, 7);
        auto large = feynman_kac_mc(u0_eval, zero_fn, 0.1, 0.1, pts, 1, 30000, 7);
        double ratio = small.half_width[0] / large.half_width[0];
        CHECK(ratio > 1.4);
        CHECK(ratio < 2.1);
    }
}

TEST_CASE("burgers companion") {
    SUBCASE("constant initial data keeps the gradient at zero") {
        SolverConfig cfg = desk_config(0.01);
        cfg.initial = make_field(cfg.grid, 2.0);
        cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
        cfg.snapshot_stride = 10;
        NoisePath path = sample_path(3, 1, cfg.dt, cfg.steps());
        VectorTrajectory traj = burgers_companion(cfg, path);
        for (const auto& snap : traj.snapshots)
            for (double v : snap[0].values) CHECK(v == 0.0);
    }
    SUBCASE("deterministic self-refinement") {
        SolverConfig cfg = desk_config(0.05);
        cfg.transport = transport_preset(cfg.grid, "zero", 0.0, 0.0, cfg.k);
        cfg.snapshot_stride = 1000000;
        NoisePath coarse = sample_path(4, 1, 2e-4, 250);
        NoisePath fine = sample_path(4, 1, 5e-5, 1000);
        SolverConfig c1 = cfg;
        c1.dt = 2e-4;
        SolverConfig c2 = cfg;
        c2.dt = 5e-5;
        auto v1 = burgers_companion(c1, coarse);
        auto v2 = burgers_companion(c2, fine);
        CHECK(max_abs_diff(v1.snapshots.back()[0], v2.snapshots.back()[0]) <= 1e-4);
    }
    SUBCASE("gradient of the HJB run stays near the companion") {
        SolverConfig cfg = desk_config(0.02);
        cfg.scheme = Scheme::strat_heun;
        cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
        cfg.snapshot_stride = 20;
        NoisePath path = sample_path(5, 1, cfg.dt, cfg.steps());
        Trajectory hjb = integrate(cfg, path);
        VectorTrajectory burgers = burgers_companion(cfg, path);
        REQUIRE(hjb.snapshot_times.size() == burgers.times.size());
        for (std::size_t s = 0; s < hjb.snapshot_times.size(); ++s) {
            SpatialField grad_u = gradient(hjb.snapshots[s])[0];
            CHECK(l2_norm(grad_u - burgers.snapshots[s][0]) <= 10.0 * cfg.dt);
        }
    }
    SUBCASE("non-special operators are rejected") {
        SolverConfig cfg = desk_config(0.01);
        cfg.transport = transport_preset(cfg.grid, "sine", 1.0, 0.0, cfg.k);
        NoisePath path = sample_path(6, 1, cfg.dt, cfg.steps());
        CHECK_THROWS(burgers_companion(cfg, path));
    }
}

TEST_CASE("maximum principle checker") {
    SUBCASE("constant data passes trivially") {
        SolverConfig cfg = desk_config(0.01);
        cfg.initial = make_field(cfg.grid, 1.0);
        cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
        NoisePath path = sample_path(9, 1, cfg.dt, cfg.steps());
        Trajectory traj = integrate(cfg, path);
        auto report = max_principle_check(traj, cfg, default_max_principle_tol(cfg));
        CHECK(report.hypothesis_met);
        CHECK(report.pass);
    }
    SUBCASE("special-class noise keeps the gradient bounded") {
        SolverConfig cfg = desk_config(0.05);
        cfg.scheme = Scheme::strat_heun;
        cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
        NoisePath path = sample_path(10, 1, cfg.dt, cfg.steps());
        Trajectory traj = integrate(cfg, path);
        auto report = max_principle_check(traj, cfg, 1e-3);
        CHECK(report.hypothesis_met);
        CHECK(report.pass);
    }
    SUBCASE("an increasing potential voids the hypothesis") {
        SolverConfig cfg = desk_config(0.01);
        cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
        cfg.potential = field_preset(cfg.grid, "neg_cos_well", -1.0); // +(1+cos)
        NoisePath path = sample_path(11, 1, cfg.dt, cfg.steps());
        Trajectory traj = integrate(cfg, path);
        auto report = max_principle_check(traj, cfg, 1e-3);
        CHECK_FALSE(report.hypothesis_met);
        CHECK_FALSE(report.pass);
    }
    SUBCASE("variable coefficients void the hypothesis") {
        SolverConfig cfg = desk_config(0.01);
        cfg.transport = transport_preset(cfg.grid, "sine", 0.3, 0.0, cfg.k);
        NoisePath path = sample_path(12, 1, cfg.dt, cfg.steps());
        Trajectory traj = integrate(cfg, path);
        auto report = max_principle_check(traj, cfg, 1e-3);
        CHECK_FALSE(report.hypothesis_met);
    }
}

TEST_CASE("uniqueness experiment") {
    SolverConfig cfg = desk_config(0.02);
    cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
    cfg.initial = sin_field(cfg.grid, 0.5);

    SUBCASE("twin runs are bit identical") {
        auto report = uniqueness_experiment(cfg, 42, 0.0);
        CHECK(report.bit_identical);
    }
    SUBCASE("perturbed runs stay inside the envelope") {
        auto report = uniqueness_experiment(cfg, 42, 1e-6);
        CHECK(report.envelope_holds);
        CHECK(report.worst_ratio <= 1.0 + 1e-9);
    }
    SUBCASE("terminal gap scales linearly in delta") {
        auto small = uniqueness_experiment(cfg, 43, 1e-6);
        auto large = uniqueness_experiment(cfg, 43, 1e-4);
        double ratio = large.terminal_gap / small.terminal_gap;
        CHECK(ratio > 100.0 * 0.5);
        CHECK(ratio < 100.0 * 2.0);
    }
}

TEST_CASE("gamma refinement") {
    SolverConfig cfg = desk_config(0.02);
    cfg.transport = transport_preset(cfg.grid, "constant", -0.2, 0.0, cfg.k);
    cfg.initial = sin_field(cfg.grid, 0.5);
    cfg.snapshot_stride = 20;
    NoisePath path = sample_path(77, 1, cfg.dt, cfg.steps());

    SUBCASE("negligible gamma is bit-close to the limit run") {
        std::vector<double> gammas{1e-45}; // gamma |xi_max|^(2k') dt < 1e-14
        auto report = gamma_convergence_study(cfg, gammas, path);
        REQUIRE(report.rows.size() == 1);
        CHECK(report.rows[0].sup_diff_hbeta <= 1e-10);
    }
    SUBCASE("descending gammas shrink the differences") {
        std::vector<double> gammas{1e-8, 1e-9, 1e-10};
        auto report = gamma_convergence_study(cfg, gammas, path);
        REQUIRE(report.rows.size() == 3);
        CHECK(report.monotone);
    }
    SUBCASE("non-descending lists are rejected") {
        std::vector<double> bad{1e-9, 1e-8};
        CHECK_THROWS(gamma_convergence_study(cfg, bad, path));
    }
}

TEST_CASE("oracle report json is well formed") {
    TorusGrid g = make_grid(1, 32);
    std::vector<double> times{0.0};
    std::vector<SpatialField> a{sin_field(g)}, b{sin_field(g)};
    auto report = compare_fields("self", times, a, b, 1e-12);
    CHECK(report.pass);
    std::string json = oracle_report_json(report);
    CHECK(json.find("\"oracle\":\"self\"") != std::string::npos);
    CHECK(json.find("\"pass\":true") != std::string::npos);
}
