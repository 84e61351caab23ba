#include "kernel.hpp"

#include "errors.hpp"

namespace renskog {

void KernelSpec::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("kernel.delta must lie strictly in (0,1)");
    if (!(sigma_tilde0 >= 0.0)) throw InvalidInput("kernel.sigma_tilde must be nonnegative");
    if (!(c0 > 0.0)) throw InvalidInput("kernel.c0 must be positive");
}

double weight_m(const Vec3& x, const Momentum3& p, const KernelSpec& spec) {
    const double xp = norm(cross(x, p.p));
    return std::pow(1.0 + xp, -(1.0 + spec.delta) / 2.0) * std::exp(-p.p0);
}

double cross_section(const Momentum3& p, const Momentum3& p1, const Vec3& omega, const KernelSpec& spec) {
    const Invariants inv = collision_invariants(p, p1);
    if (inv.g == 0.0) return 0.0;
    const double num = std::abs(dot(omega, cross(p1.p, p.p))) * spec.sigma_tilde(omega);
    return num / (p1.p0 * inv.g * std::pow(1.0 + inv.g * inv.g, spec.delta + 0.5));
}

double kernel_b(const Momentum3& p, const Momentum3& p1, const Vec3& omega, const KernelSpec& spec) {
    const Invariants inv = collision_invariants(p, p1);
    const double num = std::sqrt(inv.s) * std::abs(dot(omega, cross(p1.p, p.p))) * spec.sigma_tilde(omega);
    return num / (2.0 * p1.p0 * std::pow(1.0 + inv.g * inv.g, spec.delta + 0.5));
}

void YFactorSpec::validate() const {
    if (kind == YKind::constant) {
        if (!(y0 > 0.0)) throw InvalidInput("y.y0 must be positive");
    } else {
        if (!(b >= 0.0)) throw InvalidInput("y.b must be nonnegative");
    }
}

double y_factor(double rho, const YFactorSpec& spec) {
    if (rho < 0.0) throw InvalidInput("density passed to Y must be nonnegative");
    return spec.kind == YKind::constant ? spec.y0 : 1.0 + spec.b * rho;
}

} // namespace renskog
