#pragma once

#include "vec3.hpp"

namespace renskog {

// Dimensionless 3-momentum (units mc = 1) with its derived energy
// p0 = (1 + |p|^2)^{1/2} >= 1 kept alongside.
struct Momentum3 {
    Vec3 p;
    double p0;

    Momentum3() : p{}, p0(1.0) {}
    explicit Momentum3(const Vec3& v) : p(v), p0(std::sqrt(1.0 + norm2(v))) {}

    Vec3 velocity() const { return p / p0; }
};

inline double energy(const Vec3& p) { return std::sqrt(1.0 + norm2(p)); }

// s = (p10+p0)^2 - |p1+p|^2, g = sqrt(|p1-p|^2 - (p10-p0)^2)/2,
// v_moller = g sqrt(s) / (p0 p10). The radicand is analytically >= 0
// (|grad p0| < 1); round-off negatives are clamped to zero.
struct Invariants {
    double s;
    double g;
    double v_moller;
};

Invariants collision_invariants(const Momentum3& p, const Momentum3& p1);

// True iff omega . (p1/p10 - p/p0) >= 0. Requires |omega| = 1 within 1e-12.
bool in_s_plus(const Momentum3& p, const Momentum3& p1, const Vec3& omega);

// Transferred momentum along omega:
//   q = 2 (p0+p10) p0 p10 [omega.(p1/p10 - p/p0)] / {(p0+p10)^2 - [omega.(p+p1)]^2}.
// Valid for any unit omega; q >= 0 exactly when omega is in S+2.
double collision_q(const Momentum3& p, const Momentum3& p1, const Vec3& omega);

struct PostCollision {
    Momentum3 p_prime;
    Momentum3 p1_prime;
    double q;
};

// p' = p + q omega, p1' = p1 - q omega. Requires omega in S+2 (unit within 1e-12).
PostCollision post_collision(const Momentum3& p, const Momentum3& p1, const Vec3& omega);

// The omega-parametrization flux factor
//   8 (p0+p10)^2 |omega.(p1/p10 - p/p0)| / {(p0+p10)^2 - [omega.(p+p1)]^2}^2.
// Finite: the denominator bracket is bounded below by s > 0.
double omega_flux(const Momentum3& p, const Momentum3& p1, const Vec3& omega);

// A pre-collision pair with a unit impact direction and everything derived
// from it. theta is set to 0 by convention when g = 0 (the kernel vanishes
// there, so the convention never reaches an integral).
struct CollisionGeometry {
    Momentum3 p;
    Momentum3 p1;
    Vec3 omega;
    double s = 4.0;
    double g = 0.0;
    double q = 0.0;
    double v_moller = 0.0;
    double theta = 0.0;
    Momentum3 p_prime;
    Momentum3 p1_prime;

    static CollisionGeometry compute(const Momentum3& p, const Momentum3& p1, const Vec3& omega);
};

// theta = arccos(1 - 2[(p0-p10)(p0-p0') - (p-p1).(p-p')]/(4-s)), clamped to
// [-1,1] with tolerance 1e-12. Throws DomainViolation when g = 0.
double scattering_angle(const CollisionGeometry& geom);

} // namespace renskog
