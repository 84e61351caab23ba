#include <cmath>
#include <numbers>

#include <doctest.h>

#include "collision_op.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace renskog;

namespace {

GridSpec op_grid() {
    GridSpec g;
    g.n_x = 5;
    g.n_p = 5;
    g.n_omega = 16;
    return g;
}

OperatorConfig const_y_cfg() {
    OperatorConfig cfg;
    cfg.y.kind = YKind::constant;
    cfg.y.y0 = 1.0;
    return cfg;
}

} // namespace

TEST_CASE("density: zero slice, linearity, gaussian oracle") {
    GridSpec g;
    g.n_x = 3;
    g.n_p = 17;
    const FieldLattice zero(g);
    CHECK(density(zero, 0.7, {0.3, 0, 0}) == 0.0);

    const FieldLattice f = FieldLattice::gaussian(g, 1.0, 1.0, 1.0);
    FieldLattice scaled(g);
    for (size_t i = 0; i < f.values().size(); ++i) scaled.values()[i] = 3.5 * f.values()[i];
    const double r1 = density(f, 0.0, {0, 0, 0});
    CHECK(density(scaled, 0.0, {0, 0, 0}) == doctest::Approx(3.5 * r1).epsilon(1e-13));

    // f(0,x,p) = exp(-|x|^2 - |p|^2): rho(0,0) = pi^{3/2}
    CHECK(r1 == doctest::Approx(std::pow(std::numbers::pi, 1.5)).epsilon(1e-3));
}

TEST_CASE("F+ and F- compose Y with the contact-point density") {
    GridSpec g;
    g.n_x = 5;
    g.n_p = 9;
    OperatorConfig cfg;
    cfg.a = 0.5;
    cfg.y = {YKind::linear, 1.0, 0.3};
    const FieldLattice f = FieldLattice::gaussian(g, 1.0, 1.0, 1.0);

    OperatorConfig cy = cfg;
    cy.y = {YKind::constant, 1.0, 0.0};
    CHECK(f_plus(f, 0.4, {1, 0, 0}, {0, 0, 1}, cy) == 1.0);

    const FieldLattice zero(g);
    CHECK(f_plus(zero, 0.0, {0.5, 0, 0}, {0, 1, 0}, cfg) == 1.0);
    CHECK(f_minus(zero, 0.0, {0.5, 0, 0}, {0, 1, 0}, cfg) == 1.0);

    // contact point at the origin, where the density oracle is pi^{3/2}
    const Vec3 w{0, 0, 1};
    const double fp = f_plus(f, 0.0, {0, 0, -cfg.a / 2.0}, w, cfg);
    const double fm = f_minus(f, 0.0, {0, 0, cfg.a / 2.0}, w, cfg);
    const double expected = 1.0 + 0.3 * std::pow(std::numbers::pi, 1.5);
    CHECK(fp == doctest::Approx(expected).epsilon(2e-3));
    CHECK(fm == doctest::Approx(expected).epsilon(2e-3));

    OperatorConfig bz = cfg;
    bz.mode = CollisionMode::boltzmann;
    bz.lambda = 0.04;
    CHECK(f_plus(f, 0.3, {0, 0, 0}, w, bz) == 1.0);
}

TEST_CASE("gain and loss vanish on the zero slice and with a = 0") {
    const GridSpec g = op_grid();
    const OperatorConfig cfg = const_y_cfg();
    const FieldLattice zero(g);
    CHECK(gain_sharp(zero, 1.0, {0, 0, 0}, Momentum3({1, 0, 0}), cfg) == 0.0);
    CHECK(loss_sharp(zero, 1.0, {0, 0, 0}, Momentum3({1, 0, 0}), cfg) == 0.0);

    OperatorConfig degenerate = cfg;
    degenerate.a = 0.0; // prefactor a^2 kills the operator
    const FieldLattice f = FieldLattice::gaussian(g, 0.5, 2.0, 2.0);
    CHECK(gain_sharp(f, 1.0, {0.3, 0, 0}, Momentum3({1, 0, 0}), degenerate) == 0.0);
    CHECK(loss_sharp(f, 1.0, {0.3, 0, 0}, Momentum3({1, 0, 0}), degenerate) == 0.0);
}

TEST_CASE("loss factorizes through f^#(t,x,p)") {
    const GridSpec g = op_grid();
    const OperatorConfig cfg = const_y_cfg();
    FieldLattice f = FieldLattice::gaussian(g, 0.5, 2.0, 2.0);
    const int ix = 13, ip = 17;
    f.value(ix, ip) = 0.0;
    const double loss = loss_sharp(f, 0.8, g.x_node(ix), Momentum3(g.p_node(ip)), cfg);
    CHECK(loss == 0.0);
}

TEST_CASE("positivity of parts and quadratic homogeneity") {
    const GridSpec g = op_grid();
    const OperatorConfig cfg = const_y_cfg();
    const KernelSpec kernel;
    const WeightTable weights(g, kernel);
    Rng rng(31);
    const Trajectory traj = testing::random_trajectory(g, weights, 0.5, rng, /*nonnegative=*/true);
    const FieldLattice& f = traj.slices[0];
    FieldLattice f2(g);
    for (size_t i = 0; i < f.values().size(); ++i) f2.values()[i] = 2.0 * f.values()[i];

    CollisionEngine eng(g, cfg);
    const auto bs = eng.bind(f, 0.9);
    const auto bs2 = eng.bind(f2, 0.9);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x = rng.uniform_box(g.x_max);
        const Momentum3 p(rng.uniform_box(g.p_max));
        const double gain1 = eng.gain(bs, x, p);
        const double loss1 = eng.loss(bs, x, p);
        CHECK(gain1 >= 0.0);
        CHECK(loss1 >= 0.0);
        CHECK(eng.gain(bs2, x, p) == doctest::Approx(4.0 * gain1).epsilon(1e-10));
        CHECK(eng.loss(bs2, x, p) == doctest::Approx(4.0 * loss1).epsilon(1e-10));
    }
    const Vec3 x{0.4, -0.2, 0.1};
    const Momentum3 p(Vec3{0.5, 0.1, -0.3});
    const double q1 = collision_sharp(f, 0.9, x, p, cfg);
    const double q2 = collision_sharp(f2, 0.9, x, p, cfg);
    CHECK(q2 == doctest::Approx(4.0 * q1).epsilon(1e-10));
    const FieldLattice zero(g);
    CHECK(collision_sharp(zero, 0.9, x, p, cfg) == 0.0);
}

TEST_CASE("sweep matches the per-point path at grid nodes") {
    const GridSpec g = op_grid();
    Rng rng(32);
    for (bool linear : {false, true}) {
        OperatorConfig cfg = const_y_cfg();
        if (linear) cfg.y = {YKind::linear, 1.0, 0.3};
        const KernelSpec kernel;
        const WeightTable weights(g, kernel);
        const Trajectory traj = testing::random_trajectory(g, weights, 0.4, rng, true);
        const FieldLattice& f = traj.slices[0];
        CollisionEngine eng(g, cfg);
        const auto bs = eng.bind(f, 1.3);
        std::vector<double> gain(g.node_count()), loss(g.node_count());
        eng.sweep(bs, gain, loss);
        for (int trial = 0; trial < 40; ++trial) {
            const int ix = rng.index(g.x_count());
            const int ip = rng.index(g.p_count());
            const double gp = eng.gain(bs, g.x_node(ix), Momentum3(g.p_node(ip)));
            const double lp = eng.loss(bs, g.x_node(ix), Momentum3(g.p_node(ip)));
            const double gs = gain[static_cast<size_t>(ix) * g.p_count() + ip];
            const double ls = loss[static_cast<size_t>(ix) * g.p_count() + ip];
            CHECK(gs == doctest::Approx(gp).epsilon(1e-11));
            CHECK(ls == doctest::Approx(lp).epsilon(1e-11));
        }
    }
}

TEST_CASE("boltzmann mode matches enskog with constant Y and suppressed shifts") {
    const GridSpec g = op_grid();
    OperatorConfig ensk;
    ensk.a = 0.2;
    ensk.y = {YKind::constant, 1.7, 0.0};
    OperatorConfig bz = ensk;
    bz.mode = CollisionMode::boltzmann;
    bz.lambda = ensk.a * ensk.a * ensk.y.y0;

    const FieldLattice f = FieldLattice::gaussian(g, 0.5, 2.0, 2.0);
    CollisionEngine ensk_eng(g, ensk, /*shift_scale=*/0.0); // same path, shift suppressed
    CollisionEngine bz_eng(g, bz);
    const auto bse = ensk_eng.bind(f, 1.1);
    const auto bsb = bz_eng.bind(f, 1.1);
    Rng rng(33);
    for (int trial = 0; trial < 25; ++trial) {
        const Vec3 x = rng.uniform_box(g.x_max / 2.0);
        const Momentum3 p(rng.uniform_box(g.p_max / 2.0));
        const double ge = ensk_eng.gain(bse, x, p);
        const double gb = bz_eng.gain(bsb, x, p);
        CHECK(ge == doctest::Approx(gb).epsilon(1e-12));
        const double le = ensk_eng.loss(bse, x, p);
        const double lb = bz_eng.loss(bsb, x, p);
        CHECK(le == doctest::Approx(lb).epsilon(1e-12));
    }
}

TEST_CASE("deterministic quadrature agrees with the Monte Carlo oracle") {
    GridSpec g;
    g.n_x = 5;
    g.n_p = 5;
    OperatorConfig cfg; // default: enskog, linear Y
    const FieldLattice f = FieldLattice::gaussian(g, 0.5, 2.0, 2.0);
    CollisionEngine eng(g, cfg);
    const auto bs = eng.bind(f, 1.0);
    Rng rng(34);
    for (int trial = 0; trial < 3; ++trial) {
        const Vec3 x = rng.uniform_box(2.0);
        const Momentum3 p(rng.uniform_box(2.0));
        const double gq = eng.gain(bs, x, p);
        const auto gm = testing::mc_gain(eng, bs, x, p, 400000, 100 + trial);
        CHECK(std::abs(gq - gm.value) < 3.0 * gm.se);
        const double lq = eng.loss(bs, x, p);
        const auto lm = testing::mc_loss(eng, bs, x, p, 400000, 200 + trial);
        CHECK(std::abs(lq - lm.value) < 3.0 * lm.se);
    }
}

TEST_CASE("operator config validation") {
    OperatorConfig cfg;
    cfg.a = -0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = OperatorConfig{};
    cfg.mode = CollisionMode::boltzmann;
    cfg.lambda = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
