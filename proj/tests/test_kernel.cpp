#include <cmath>

#include <doctest.h>

#include "errors.hpp"
#include "kernel.hpp"
#include "rng.hpp"

using namespace renskog;

namespace {
Momentum3 mom(double x, double y, double z) { return Momentum3(Vec3{x, y, z}); }
const KernelSpec kDefault{};
}

TEST_CASE("weight_m") {
    CHECK(weight_m({0, 0, 0}, mom(0, 0, 0), kDefault) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    // x parallel to p: the cross product vanishes
    CHECK(weight_m({2, 0, 0}, mom(3, 0, 0), kDefault)
          == doctest::Approx(std::exp(-std::sqrt(10.0))).epsilon(1e-15));
    CHECK(weight_m({1, 0, 0}, mom(0, 2, 0), kDefault)
          == doctest::Approx(std::pow(3.0, -0.75) * std::exp(-std::sqrt(5.0))).epsilon(1e-15));

    Rng rng(11);
    for (int i = 0; i < 5000; ++i) {
        const Vec3 x = rng.uniform_box(6.0);
        const Momentum3 p(rng.uniform_box(6.0));
        const double m = weight_m(x, p, kDefault);
        CHECK(m > 0.0);
        CHECK(m <= std::exp(-p.p0) * (1.0 + 1e-15));
        CHECK(m <= std::exp(-1.0) * (1.0 + 1e-15));
    }
}

TEST_CASE("kernel spec validation") {
    KernelSpec bad;
    bad.delta = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad.delta = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = KernelSpec{};
    bad.sigma_tilde0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("cross_section") {
    // parallel momenta: cross product vanishes
    CHECK(cross_section(mom(1, 0, 0), mom(2, 0, 0), {0, 0, 1}, kDefault) == 0.0);
    KernelSpec zero = kDefault;
    zero.sigma_tilde0 = 0.0;
    CHECK(cross_section(mom(1, 0, 0), mom(0, 1, 0), {0, 0, 1}, zero) == 0.0);
    // frozen: p=(1,0,0), p1=(0,1,0), omega=z, sigma_tilde=1, delta=0.5 -> 2/3
    CHECK(cross_section(mom(1, 0, 0), mom(0, 1, 0), {0, 0, 1}, kDefault)
          == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // g = 0 convention
    CHECK(cross_section(mom(1, 1, 0), mom(1, 1, 0), {0, 0, 1}, kDefault) == 0.0);
}

TEST_CASE("kernel_b: cancelled form matches g sqrt(s) sigma / 2") {
    CHECK(kernel_b(mom(1, 1, 0), mom(1, 1, 0), {0, 0, 1}, kDefault) == 0.0);
    KernelSpec zero = kDefault;
    zero.sigma_tilde0 = 0.0;
    CHECK(kernel_b(mom(1, 0, 0), mom(0, 1, 0), {0, 0, 1}, zero) == 0.0);

    Rng rng(12);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const Momentum3 p(rng.uniform_box(5.0));
        const Momentum3 p1(rng.uniform_box(5.0));
        const Vec3 w = rng.unit_vector();
        const double b = kernel_b(p, p1, w, kDefault);
        CHECK(b >= 0.0);
        CHECK(std::isfinite(b));
        const auto inv = collision_invariants(p, p1);
        if (inv.g > 1e-8) {
            const double uncancelled = inv.g * std::sqrt(inv.s) * cross_section(p, p1, w, kDefault) / 2.0;
            worst = std::max(worst, std::abs(b - uncancelled) / std::max(1.0, uncancelled));
        }
        if (b == 0.0) {
            // zero only when the triple product or sigma_tilde vanishes
            CHECK(std::abs(dot(w, cross(p1.p, p.p))) == 0.0);
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("y_factor") {
    YFactorSpec cy{YKind::constant, 1.0, 0.0};
    CHECK(y_factor(0.0, cy) == 1.0);
    CHECK(y_factor(7.5, cy) == 1.0);
    YFactorSpec flat{YKind::linear, 1.0, 0.0};
    CHECK(y_factor(3.0, flat) == 1.0);
    YFactorSpec lin{YKind::linear, 1.0, 0.3};
    CHECK(y_factor(2.0, lin) == doctest::Approx(1.6).epsilon(1e-15));
    CHECK_THROWS_AS(y_factor(-0.1, lin), InvalidInput);
    CHECK(lin.at_zero() == 1.0);
    YFactorSpec c2{YKind::constant, 2.5, 0.0};
    CHECK(c2.at_zero() == 2.5);
}

TEST_CASE("y_factor: monotone and Lipschitz in rho") {
    YFactorSpec lin{YKind::linear, 1.0, 0.3};
    Rng rng(13);
    for (int i = 0; i < 10000; ++i) {
        const double r1 = rng.uniform(0.0, 50.0);
        const double r2 = rng.uniform(0.0, 50.0);
        const double d = y_factor(r1, lin) - y_factor(r2, lin);
        if (r1 >= r2) CHECK(d >= 0.0);
        CHECK(std::abs(d) <= lin.b * std::abs(r1 - r2) + 1e-13);
    }
}
