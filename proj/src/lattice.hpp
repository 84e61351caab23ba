#pragma once

#include <span>
#include <vector>

#include "kernel.hpp"
#include "vec3.hpp"

namespace renskog {

// Truncated uniform (x,p) grid with odd node counts per axis, so the origin
// is a node, plus the sphere-rule size and the uniform time grid on [0,t_max].
struct GridSpec {
    double x_max = 4.0;
    double p_max = 4.0;
    int n_x = 7;      // nodes per spatial axis, odd >= 3
    int n_p = 7;      // nodes per momentum axis, odd >= 3
    int n_omega = 32; // sphere-rule node budget, >= 6
    double t_max = 2.0;
    int n_t = 9;      // time nodes, >= 2

    void validate() const;

    double dx() const { return 2.0 * x_max / (n_x - 1); }
    double dp() const { return 2.0 * p_max / (n_p - 1); }
    double dt() const { return t_max / (n_t - 1); }
    double time(int k) const { return t_max * k / (n_t - 1); }

    int x_count() const { return n_x * n_x * n_x; }
    int p_count() const { return n_p * n_p * n_p; }
    long node_count() const { return static_cast<long>(x_count()) * p_count(); }

    double x_coord(int i) const { return -x_max + dx() * i; }
    double p_coord(int i) const { return -p_max + dp() * i; }
    Vec3 x_node(int flat) const;
    Vec3 p_node(int flat) const;

    bool operator==(const GridSpec&) const = default;
};

std::vector<double> gauss_legendre_nodes(int n);   // on [-1,1]
std::vector<double> gauss_legendre_weights(int n);

struct SphereNode {
    Vec3 omega;
    double weight;
};

// Product rule over the full sphere: Gauss-Legendre in cos(theta) x uniform
// midpoints in psi, sized n_theta = ceil(sqrt(n_omega/2)), n_psi = 2 n_theta,
// so at least n_omega nodes. Weights sum to 4*pi.
std::vector<SphereNode> sphere_rule(int n_omega);

struct MomentumNode {
    Vec3 p;
    double weight;
};

// Tensorized composite Gauss-Legendre rule on [-p_max, p_max]^3: the 1-point
// rule on two subcells per lattice cell per axis (2(n_p-1) nodes per axis).
// Exact on any multilinear interpolant stored on the lattice.
std::vector<MomentumNode> momentum_rule(const GridSpec& spec);

inline constexpr int kMomentumSubcells = 2;

// f^#(t,.,.) on the (x,p) lattice at one time node. Values are stored x-major
// then p; each 3-D index runs (axis0, axis1, axis2) with axis2 fastest.
// Evaluation outside the truncation box returns 0.
class FieldLattice {
public:
    FieldLattice() = default;
    explicit FieldLattice(const GridSpec& spec);

    static FieldLattice zeros(const GridSpec& spec) { return FieldLattice(spec); }
    static FieldLattice gaussian(const GridSpec& spec, double amplitude, double x_width, double p_width);

    template <typename F>
    static FieldLattice from_function(const GridSpec& spec, F&& f) {
        FieldLattice out(spec);
        for (int ix = 0; ix < spec.x_count(); ++ix) {
            const Vec3 x = spec.x_node(ix);
            for (int ip = 0; ip < spec.p_count(); ++ip)
                out.values_[static_cast<size_t>(ix) * spec.p_count() + ip] = f(x, spec.p_node(ip));
        }
        return out;
    }

    const GridSpec& spec() const { return spec_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double value(int ix, int ip) const { return values_[static_cast<size_t>(ix) * spec_.p_count() + ip]; }
    double& value(int ix, int ip) { return values_[static_cast<size_t>(ix) * spec_.p_count() + ip]; }

    // 6-D multilinear interpolation; exact at nodes, 0 outside the box.
    double interpolate(const Vec3& x, const Vec3& p) const;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

// Per-axis interpolation footing: base cell and fraction, or outside flag.
struct AxisHit {
    int cell;
    double frac;
    bool inside;
};

AxisHit axis_hit(double v, double lo, double h, int n);

struct Trajectory {
    GridSpec spec;
    std::vector<FieldLattice> slices;

    static Trajectory constant(const FieldLattice& f0);
    double time(int k) const { return spec.time(k); }
};

// m(x,p) evaluated at every (x-node, p-node); shared by the weighted norm,
// trajectory generation and the Lemma-style bounds.
class WeightTable {
public:
    WeightTable(const GridSpec& spec, const KernelSpec& kernel);
    const GridSpec& spec() const { return spec_; }
    double m(int ix, int ip) const { return m_[static_cast<size_t>(ix) * spec_.p_count() + ip]; }
    std::span<const double> values() const { return m_; }

private:
    GridSpec spec_;
    std::vector<double> m_;
};

// Discrete ||f|| = max over nodes of |f^#| m^{-1}(x,p).
double weighted_norm(const FieldLattice& slice, const WeightTable& weights);
double weighted_norm(const FieldLattice& slice, const KernelSpec& kernel);
double weighted_norm(const Trajectory& traj, const WeightTable& weights);
double weighted_norm(const Trajectory& traj, const KernelSpec& kernel);
double weighted_norm_diff(const Trajectory& a, const Trajectory& b, const WeightTable& weights);

// Trapezoid-weighted integral of a slice over the (x,p) box (diagnostics).
double slice_mass(const FieldLattice& slice);

} // namespace renskog
