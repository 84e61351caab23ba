#pragma once

#include "kinematics.hpp"

namespace renskog {

// Hard-sphere collision kernel family: cross section
//   sigma = |omega.(p1 x p)| sigma_tilde(omega) / [p10 g (1+g^2)^{delta+1/2}]
// together with the weight m(x,p) = (1+|x x p|)^{-(1+delta)/2} e^{-p0}.
struct KernelSpec {
    double delta = 0.5;        // exponent, strictly in (0,1)
    double sigma_tilde0 = 1.0; // constant angular factor
    double c0 = 1.0;           // reported constant of the sigma_tilde integral condition

    double sigma_tilde(const Vec3& /*omega*/) const { return sigma_tilde0; }
    void validate() const;
};

// (1+|x x p|)^{-(1+delta)/2} e^{-p0}; values in (0, e^{-1}].
double weight_m(const Vec3& x, const Momentum3& p, const KernelSpec& spec);

// Returns 0 at g = 0; the physical product g*sigma is continuous there.
double cross_section(const Momentum3& p, const Momentum3& p1, const Vec3& omega, const KernelSpec& spec);

// B(g,theta) = g sqrt(s) sigma / 2, implemented with the g factors cancelled:
//   sqrt(s) |omega.(p1 x p)| sigma_tilde(omega) / [2 p10 (1+g^2)^{delta+1/2}].
double kernel_b(const Momentum3& p, const Momentum3& p1, const Vec3& omega, const KernelSpec& spec);

enum class YKind {
    constant,
    linear, // Y(rho) = 1 + b rho
};

struct YFactorSpec {
    YKind kind = YKind::linear;
    double y0 = 1.0; // value for the constant kind
    double b = 0.3;  // slope for the linear kind

    void validate() const;
    double at_zero() const { return kind == YKind::constant ? y0 : 1.0; }
};

// Throws InvalidInput on rho < 0.
double y_factor(double rho, const YFactorSpec& spec);

} // namespace renskog
