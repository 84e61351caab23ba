#pragma once

#include <array>
#include <span>
#include <vector>

#include "lattice.hpp"

namespace renskog {

enum class CollisionMode {
    enskog,
    boltzmann, // a^2 F± replaced by the constant lambda, a = 0 in all position shifts
};

struct OperatorConfig {
    double a = 0.1;
    CollisionMode mode = CollisionMode::enskog;
    double lambda = 0.01;
    KernelSpec kernel;
    YFactorSpec y;

    void validate() const;
    double prefactor() const { return mode == CollisionMode::enskog ? a * a : lambda; }
    double shift_scale() const { return mode == CollisionMode::enskog ? a : 0.0; }
    // F±(0), the collision frequency at the zero distribution
    double f_at_zero() const { return mode == CollisionMode::enskog ? y.at_zero() : 1.0; }
};

// rho(t,x) = integral of f(t,x,p) d^3p over the momentum rule, with
// f(t,x,p) = f^#(t, x - t p/p0, p).
double density(const FieldLattice& slice, double t, const Vec3& x);

// F± = Y(rho(t, x ± a omega/2)); identically 1 in boltzmann mode.
double f_plus(const FieldLattice& slice, double t, const Vec3& x, const Vec3& omega, const OperatorConfig& cfg);
double f_minus(const FieldLattice& slice, double t, const Vec3& x, const Vec3& omega, const OperatorConfig& cfg);

// Quadrature engine for the gain/loss operators in # form. The omega
// integral runs over a per-pair rotated rule whose pole is v1 - v, so every
// node lies in S+2; the momentum integral is the momentum_rule of the grid.
class CollisionEngine {
public:
    CollisionEngine(const GridSpec& grid, const OperatorConfig& cfg);
    // Same quadrature with the a-omega shift scale overridden (the Boltzmann
    // consistency checks run the enskog path with the shift forced to zero).
    CollisionEngine(const GridSpec& grid, const OperatorConfig& cfg, double shift_scale);

    const GridSpec& grid() const { return grid_; }
    const OperatorConfig& config() const { return cfg_; }
    const std::vector<MomentumNode>& momentum_nodes() const { return pnodes_; }

    // Slice context: the density lattice behind F± is computed once here and
    // interpolated at contact points by both the point and sweep paths.
    struct BoundSlice {
        const FieldLattice* slice = nullptr;
        double t = 0.0;
        std::vector<double> y_field; // Y(rho) at x nodes; empty when Y is constant
        double y_const = 1.0;
    };
    BoundSlice bind(const FieldLattice& slice, double t) const;

    double gain(const BoundSlice& bs, const Vec3& x, const Momentum3& p) const;
    double loss(const BoundSlice& bs, const Vec3& x, const Momentum3& p) const;

    struct Entry;
    // same evaluations with a caller-held entry table (entries depend only on
    // p, so repeated queries at one momentum can share the build)
    double gain_with(const BoundSlice& bs, const Vec3& x, const Momentum3& p,
                     const std::vector<Entry>& entries) const;
    double loss_with(const BoundSlice& bs, const Vec3& x, const Momentum3& p,
                     const std::vector<Entry>& entries) const;

    // Gain and loss at every (x,p) grid node, x-major-then-p layout.
    void sweep(const BoundSlice& bs, std::span<double> gain_out, std::span<double> loss_out) const;

    struct Entry {
        Vec3 omega;
        Vec3 p_prime, p1_prime;
        Vec3 v_prime, v1_prime;
        double wb; // (w_p1 / p10) * w_omega * B(g, theta)
        int p1_index;
        int pbase1, pbase2; // interpolation footing of p' and p1' in the p lattice
        double fr1[3], fr2[3];
        bool in1, in2;
    };
    // All (p1-node, omega-node) quadrature entries for a fixed query momentum,
    // p1-major. Entries with identically zero kernel weight are dropped.
    void build_entries(const Momentum3& p, std::vector<Entry>& out) const;

    double y_lookup(const BoundSlice& bs, const Vec3& pos) const;

private:
    GridSpec grid_;
    OperatorConfig cfg_;
    double shift_;
    std::vector<MomentumNode> pnodes_;
    std::vector<Vec3> v1_;                  // velocity of each momentum node
    std::vector<int> p1base_;               // interpolation footing of each momentum node
    std::vector<std::array<double, 3>> p1fr_;
    // hemisphere rule in the local frame: Gauss-Legendre in cos(theta) on
    // [0,1] x uniform midpoints in psi
    std::vector<double> hemi_ct_, hemi_st_, hemi_w_;
    std::vector<double> hemi_cpsi_, hemi_spsi_;
};

// Per-point operator values; these construct an engine on the fly and are
// meant for tests and the C surface, not for inner loops.
double gain_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p, const OperatorConfig& cfg);
double loss_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p, const OperatorConfig& cfg);
double collision_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p, const OperatorConfig& cfg);

} // namespace renskog
