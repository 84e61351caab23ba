#include <cmath>

#include <doctest.h>

#include "errors.hpp"
#include "hypotheses.hpp"
#include "solver.hpp"

using namespace renskog;

namespace {
GridSpec hyp_grid(double t_max = 2.0) {
    GridSpec g;
    g.n_x = 5;
    g.n_p = 5;
    g.n_omega = 16;
    g.n_t = 5;
    g.t_max = t_max;
    return g;
}
} // namespace

TEST_CASE("estimate_k: zero kernel gives zero constants") {
    KernelSpec kernel;
    kernel.sigma_tilde0 = 0.0;
    const auto report = estimate_k(kernel, hyp_grid(), 0.1, 100, 3);
    CHECK(report.k1_estimate == 0.0);
    CHECK(report.k2_estimate == 0.0);
    CHECK(report.k == 0.0);
}

TEST_CASE("estimate_k: validation and report shape") {
    CHECK_THROWS_AS(estimate_k(KernelSpec{}, hyp_grid(), 0.1, 50, 3), InvalidInput);
    const auto report = estimate_k(KernelSpec{}, hyp_grid(), 0.1, 100, 3);
    CHECK(report.k > 0.0);
    CHECK(report.k == std::max(report.k1_estimate, report.k2_estimate));
    CHECK(report.samples == 100);
    REQUIRE(!report.t_probe.empty());
    CHECK(report.t_probe.back() == doctest::Approx(hyp_grid().t_max));
    CHECK(report.k1_at_probe.size() == report.t_probe.size());
    CHECK(std::isfinite(report.sigma_tilde_ratio_sup));
    CHECK(report.sigma_tilde_ratio_sup > 0.0);

    // sups over probe times are nondecreasing (nonnegative integrands)
    for (size_t i = 1; i < report.k1_at_probe.size(); ++i) {
        CHECK(report.k1_at_probe[i] >= report.k1_at_probe[i - 1]);
        CHECK(report.k2_at_probe[i] >= report.k2_at_probe[i - 1]);
    }
}

TEST_CASE("estimate_k: a = 0 shift, stable under sample doubling") {
    const auto base = estimate_k(KernelSpec{}, hyp_grid(), 0.0, 150, 5);
    const auto doubled = estimate_k(KernelSpec{}, hyp_grid(), 0.0, 300, 5);
    CHECK(std::isfinite(base.k));
    CHECK(std::isfinite(doubled.k));
    CHECK(std::abs(doubled.k - base.k) / base.k < 0.10);
}

TEST_CASE("estimate_k: growth across t_max doublings is finite and slows at long horizons") {
    // fixed time step across the doublings so the comparison isolates t_max
    auto grid_for = [](double t_max, int n_t) {
        GridSpec g = hyp_grid(t_max);
        g.n_t = n_t;
        return g;
    };
    const auto k2 = estimate_k(KernelSpec{}, grid_for(2.0, 5), 0.1, 100, 9);
    const auto k4 = estimate_k(KernelSpec{}, grid_for(4.0, 9), 0.1, 100, 9);
    const auto k8 = estimate_k(KernelSpec{}, grid_for(8.0, 17), 0.1, 100, 9);
    const auto k16 = estimate_k(KernelSpec{}, grid_for(16.0, 33), 0.1, 100, 9);
    CHECK(std::isfinite(k8.k));
    CHECK(k4.k >= k2.k);
    CHECK(k8.k >= k4.k);
    CHECK(k16.k >= k8.k);
    // every doubling adds strictly less than another full copy of the
    // cumulative mass, and the factors fall once the weight decay sets in
    const double factor_1 = k8.k / k4.k;
    const double factor_2 = k16.k / k8.k;
    CHECK(factor_1 < 2.0);
    CHECK(factor_2 < 2.0);
    CHECK(factor_2 < factor_1);
}

TEST_CASE("estimate_k feeds a strictly positive threshold") {
    const auto report = estimate_k(KernelSpec{}, hyp_grid(), 0.1, 100, 3);
    SolverParams params;
    params.R = 1.0;
    params.K = report.k;
    OperatorConfig cfg;
    cfg.y = {YKind::constant, 1.0, 0.0};
    const double threshold = smallness_threshold(params, cfg);
    CHECK(threshold > 0.0);
    CHECK(std::isfinite(threshold));
}

TEST_CASE("report JSON round-trip") {
    const auto report = estimate_k(KernelSpec{}, hyp_grid(), 0.1, 100, 3);
    const auto text = report.to_json();
    const auto back = HypothesisReport::from_json(text);
    CHECK(back.k1_estimate == report.k1_estimate);
    CHECK(back.k2_estimate == report.k2_estimate);
    CHECK(back.k == report.k);
    CHECK(back.samples == report.samples);
    CHECK(back.t_probe == report.t_probe);
    CHECK(back.sigma_tilde_ratio_sup == report.sigma_tilde_ratio_sup);
}

TEST_CASE("galeano bound") {
    const GaleanoParams params{1.0, 1.0, 1.0, 1.0};
    CHECK(galeano_bound(params, {0, 0, 0}) == 0.0);

    const Vec3 v{0.3, -0.4, 1.2};
    const double b1 = galeano_bound(params, v);
    CHECK(galeano_bound(params, 2.0 * v) == doctest::Approx(2.0 * b1).epsilon(1e-14));

    // infimum over v is 0: no positive R satisfies R^2 < bound for all v
    CHECK(b1 > 0.0);
    double inf = b1;
    for (double scale : {1e-1, 1e-3, 1e-6, 1e-12}) inf = std::min(inf, galeano_bound(params, scale * v));
    CHECK(inf < 1e-12);

    // repaired variant with fixed v0 > 0 admits a nonempty R interval
    const double v0 = 1.0;
    const double repaired = galeano_bound(params, {v0, 0, 0});
    CHECK(std::sqrt(repaired) > 0.0);

    GaleanoParams bad{0.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(galeano_bound(bad, v), InvalidInput);
}

TEST_CASE("y lipschitz estimate") {
    const GridSpec g = hyp_grid();
    const KernelSpec kernel;
    YFactorSpec cy{YKind::constant, 1.0, 0.0};
    CHECK(y_lipschitz_estimate(cy, g, kernel, 1.0, 5, 2) == 0.0);

    YFactorSpec lin{YKind::linear, 1.0, 0.3};
    const double l1 = y_lipschitz_estimate(lin, g, kernel, 1.0, 10, 2);
    CHECK(l1 > 0.0);
    // Y differences scale linearly with b
    YFactorSpec lin2{YKind::linear, 1.0, 0.6};
    const double l2 = y_lipschitz_estimate(lin2, g, kernel, 1.0, 10, 2);
    CHECK(l2 == doctest::Approx(2.0 * l1).epsilon(1e-12));
}
