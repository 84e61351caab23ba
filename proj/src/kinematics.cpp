#include "kinematics.hpp"

#include <algorithm>

#include "errors.hpp"

namespace renskog {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kClampTol = 1e-12;

void require_unit(const Vec3& omega) {
    if (std::abs(norm(omega) - 1.0) > kUnitTol)
        throw InvalidInput("omega must be a unit vector (|omega| = 1 within 1e-12)");
}

double clamped_acos(double c) {
    if (c > 1.0) {
        if (c > 1.0 + kClampTol) throw DomainViolation("cos(theta) exceeds 1 beyond round-off tolerance");
        c = 1.0;
    } else if (c < -1.0) {
        if (c < -1.0 - kClampTol) throw DomainViolation("cos(theta) below -1 beyond round-off tolerance");
        c = -1.0;
    }
    return std::acos(c);
}

} // namespace

Invariants collision_invariants(const Momentum3& p, const Momentum3& p1) {
    const double esum = p.p0 + p1.p0;
    const double s = esum * esum - norm2(p.p + p1.p);
    const double ediff = p1.p0 - p.p0;
    const double rad = norm2(p1.p - p.p) - ediff * ediff;
    const double g = std::sqrt(std::max(rad, 0.0)) / 2.0;
    const double v_moller = g * std::sqrt(s) / (p.p0 * p1.p0);
    return {s, g, v_moller};
}

bool in_s_plus(const Momentum3& p, const Momentum3& p1, const Vec3& omega) {
    require_unit(omega);
    return dot(omega, p1.velocity() - p.velocity()) >= 0.0;
}

double collision_q(const Momentum3& p, const Momentum3& p1, const Vec3& omega) {
    const double esum = p.p0 + p1.p0;
    const double num = 2.0 * esum * p.p0 * p1.p0 * dot(omega, p1.velocity() - p.velocity());
    const double proj = dot(omega, p.p + p1.p);
    return num / (esum * esum - proj * proj);
}

PostCollision post_collision(const Momentum3& p, const Momentum3& p1, const Vec3& omega) {
    if (!in_s_plus(p, p1, omega))
        throw DomainViolation("omega outside S+2: omega.(p1/p10 - p/p0) < 0");
    const double q = collision_q(p, p1, omega);
    return {Momentum3(p.p + q * omega), Momentum3(p1.p - q * omega), q};
}

double omega_flux(const Momentum3& p, const Momentum3& p1, const Vec3& omega) {
    require_unit(omega);
    const double esum = p.p0 + p1.p0;
    const double num = 8.0 * esum * esum * std::abs(dot(omega, p1.velocity() - p.velocity()));
    const double proj = dot(omega, p.p + p1.p);
    const double bracket = esum * esum - proj * proj;
    return num / (bracket * bracket);
}

CollisionGeometry CollisionGeometry::compute(const Momentum3& p, const Momentum3& p1, const Vec3& omega) {
    require_unit(omega);
    CollisionGeometry geo;
    geo.p = p;
    geo.p1 = p1;
    geo.omega = omega;
    const Invariants inv = collision_invariants(p, p1);
    geo.s = inv.s;
    geo.g = inv.g;
    geo.v_moller = inv.v_moller;
    geo.q = collision_q(p, p1, omega);
    geo.p_prime = Momentum3(p.p + geo.q * omega);
    geo.p1_prime = Momentum3(p1.p - geo.q * omega);
    if (geo.g > 0.0) {
        const double num = (p.p0 - p1.p0) * (p.p0 - geo.p_prime.p0) - dot(p.p - p1.p, p.p - geo.p_prime.p);
        geo.theta = clamped_acos(1.0 - 2.0 * num / (4.0 - geo.s));
    } else {
        geo.theta = 0.0;
    }
    return geo;
}

double scattering_angle(const CollisionGeometry& geom) {
    if (geom.g == 0.0)
        throw DomainViolation("scattering angle undefined for degenerate collision (g = 0)");
    const double num = (geom.p.p0 - geom.p1.p0) * (geom.p.p0 - geom.p_prime.p0)
                     - dot(geom.p.p - geom.p1.p, geom.p.p - geom.p_prime.p);
    return clamped_acos(1.0 - 2.0 * num / (4.0 - geom.s));
}

} // namespace renskog
