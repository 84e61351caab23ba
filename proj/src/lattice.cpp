#include "lattice.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace renskog {

void GridSpec::validate() const {
    if (!(x_max > 0.0)) throw InvalidInput("grid.x_max must be positive");
    if (!(p_max > 0.0)) throw InvalidInput("grid.p_max must be positive");
    if (n_x < 3 || n_x % 2 == 0) throw InvalidInput("grid.n_x must be an odd integer >= 3");
    if (n_p < 3 || n_p % 2 == 0) throw InvalidInput("grid.n_p must be an odd integer >= 3");
    if (n_omega < 6) throw InvalidInput("grid.n_omega must be >= 6");
    if (!(t_max > 0.0)) throw InvalidInput("grid.t_max must be positive");
    if (n_t < 2) throw InvalidInput("grid.n_t must be >= 2");
}

Vec3 GridSpec::x_node(int flat) const {
    const int i2 = flat % n_x;
    const int i1 = (flat / n_x) % n_x;
    const int i0 = flat / (n_x * n_x);
    return {x_coord(i0), x_coord(i1), x_coord(i2)};
}

Vec3 GridSpec::p_node(int flat) const {
    const int i2 = flat % n_p;
    const int i1 = (flat / n_p) % n_p;
    const int i0 = flat / (n_p * n_p);
    return {p_coord(i0), p_coord(i1), p_coord(i2)};
}

namespace {

// Newton iteration on the Legendre recurrence.
void legendre_points(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        // refresh derivative at the converged node
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

} // namespace

std::vector<double> gauss_legendre_nodes(int n) {
    std::vector<double> x, w;
    legendre_points(n, x, w);
    return x;
}

std::vector<double> gauss_legendre_weights(int n) {
    std::vector<double> x, w;
    legendre_points(n, x, w);
    return w;
}

std::vector<SphereNode> sphere_rule(int n_omega) {
    if (n_omega < 6) throw InvalidInput("sphere rule requires n_omega >= 6");
    const int n_theta = static_cast<int>(std::ceil(std::sqrt(n_omega / 2.0)));
    const int n_psi = 2 * n_theta;
    std::vector<double> ct, wt;
    legendre_points(n_theta, ct, wt);
    std::vector<SphereNode> out;
    out.reserve(static_cast<size_t>(n_theta) * n_psi);
    const double wpsi = 2.0 * std::numbers::pi / n_psi;
    for (int i = 0; i < n_theta; ++i) {
        const double st = std::sqrt(std::max(0.0, 1.0 - ct[i] * ct[i]));
        for (int j = 0; j < n_psi; ++j) {
            const double psi = wpsi * (j + 0.5);
            out.push_back({{std::cos(psi) * st, std::sin(psi) * st, ct[i]}, wt[i] * wpsi});
        }
    }
    return out;
}

std::vector<MomentumNode> momentum_rule(const GridSpec& spec) {
    const int cells = (spec.n_p - 1) * kMomentumSubcells;
    const double h = spec.dp() / kMomentumSubcells;
    std::vector<double> axis(cells);
    for (int c = 0; c < cells; ++c) axis[c] = -spec.p_max + h * (c + 0.5);
    std::vector<MomentumNode> out;
    out.reserve(static_cast<size_t>(cells) * cells * cells);
    const double w = h * h * h;
    for (int i0 = 0; i0 < cells; ++i0)
        for (int i1 = 0; i1 < cells; ++i1)
            for (int i2 = 0; i2 < cells; ++i2)
                out.push_back({{axis[i0], axis[i1], axis[i2]}, w});
    return out;
}

FieldLattice::FieldLattice(const GridSpec& spec) : spec_(spec) {
    spec.validate();
    values_.assign(spec.node_count(), 0.0);
}

FieldLattice FieldLattice::gaussian(const GridSpec& spec, double amplitude, double x_width, double p_width) {
    if (!(x_width > 0.0) || !(p_width > 0.0)) throw InvalidInput("gaussian widths must be positive");
    return from_function(spec, [&](const Vec3& x, const Vec3& p) {
        return amplitude * std::exp(-norm2(x) / (x_width * x_width) - norm2(p) / (p_width * p_width));
    });
}

AxisHit axis_hit(double v, double lo, double h, int n) {
    const double t = (v - lo) / h;
    if (t < 0.0 || t > n - 1) return {0, 0.0, false};
    int cell = static_cast<int>(t);
    if (cell > n - 2) cell = n - 2; // v exactly at the upper edge
    return {cell, t - cell, true};
}

double FieldLattice::interpolate(const Vec3& x, const Vec3& p) const {
    const double hx = spec_.dx(), hp = spec_.dp();
    AxisHit ax[3], ap[3];
    for (int k = 0; k < 3; ++k) {
        ax[k] = axis_hit(x[k], -spec_.x_max, hx, spec_.n_x);
        if (!ax[k].inside) return 0.0;
        ap[k] = axis_hit(p[k], -spec_.p_max, hp, spec_.n_p);
        if (!ap[k].inside) return 0.0;
    }
    const int nx = spec_.n_x, np = spec_.n_p;
    const int xbase = (ax[0].cell * nx + ax[1].cell) * nx + ax[2].cell;
    const int pbase = (ap[0].cell * np + ap[1].cell) * np + ap[2].cell;
    double xw[8], pw[8];
    int xoff[8], poff[8];
    for (int c = 0; c < 8; ++c) {
        const int c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
        xw[c] = (c0 ? ax[0].frac : 1.0 - ax[0].frac) * (c1 ? ax[1].frac : 1.0 - ax[1].frac)
              * (c2 ? ax[2].frac : 1.0 - ax[2].frac);
        xoff[c] = (c0 * nx + c1) * nx + c2;
        pw[c] = (c0 ? ap[0].frac : 1.0 - ap[0].frac) * (c1 ? ap[1].frac : 1.0 - ap[1].frac)
              * (c2 ? ap[2].frac : 1.0 - ap[2].frac);
        poff[c] = (c0 * np + c1) * np + c2;
    }
    const int pcount = spec_.p_count();
    double acc = 0.0;
    for (int cx = 0; cx < 8; ++cx) {
        if (xw[cx] == 0.0) continue;
        const double* row = values_.data() + static_cast<size_t>(xbase + xoff[cx]) * pcount + pbase;
        double inner = 0.0;
        for (int cp = 0; cp < 8; ++cp) inner += pw[cp] * row[poff[cp]];
        acc += xw[cx] * inner;
    }
    return acc;
}

Trajectory Trajectory::constant(const FieldLattice& f0) {
    Trajectory t;
    t.spec = f0.spec();
    t.slices.assign(t.spec.n_t, f0);
    return t;
}

WeightTable::WeightTable(const GridSpec& spec, const KernelSpec& kernel) : spec_(spec) {
    m_.resize(spec.node_count());
    const int np = spec.p_count();
    std::vector<Momentum3> pm(np);
    for (int ip = 0; ip < np; ++ip) pm[ip] = Momentum3(spec.p_node(ip));
    for (int ix = 0; ix < spec.x_count(); ++ix) {
        const Vec3 x = spec.x_node(ix);
        for (int ip = 0; ip < np; ++ip) m_[static_cast<size_t>(ix) * np + ip] = weight_m(x, pm[ip], kernel);
    }
}

double weighted_norm(const FieldLattice& slice, const WeightTable& weights) {
    if (!(slice.spec() == weights.spec())) throw InvalidInput("grid mismatch between slice and weight table");
    double best = 0.0;
    const auto v = slice.values();
    const auto m = weights.values();
    for (size_t i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i]) / m[i]);
    return best;
}

double weighted_norm(const FieldLattice& slice, const KernelSpec& kernel) {
    return weighted_norm(slice, WeightTable(slice.spec(), kernel));
}

double weighted_norm(const Trajectory& traj, const WeightTable& weights) {
    double best = 0.0;
    for (const auto& s : traj.slices) best = std::max(best, weighted_norm(s, weights));
    return best;
}

double weighted_norm(const Trajectory& traj, const KernelSpec& kernel) {
    return weighted_norm(traj, WeightTable(traj.spec, kernel));
}

double weighted_norm_diff(const Trajectory& a, const Trajectory& b, const WeightTable& weights) {
    if (!(a.spec == b.spec)) throw InvalidInput("grid mismatch between trajectories");
    double best = 0.0;
    const auto m = weights.values();
    for (size_t k = 0; k < a.slices.size(); ++k) {
        const auto va = a.slices[k].values();
        const auto vb = b.slices[k].values();
        for (size_t i = 0; i < va.size(); ++i) best = std::max(best, std::abs(va[i] - vb[i]) / m[i]);
    }
    return best;
}

double slice_mass(const FieldLattice& slice) {
    const GridSpec& spec = slice.spec();
    auto axis_w = [](int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
    const double cell = std::pow(spec.dx(), 3) * std::pow(spec.dp(), 3);
    double total = 0.0;
    for (int ix = 0; ix < spec.x_count(); ++ix) {
        const int i2 = ix % spec.n_x, i1 = (ix / spec.n_x) % spec.n_x, i0 = ix / (spec.n_x * spec.n_x);
        const double wx = axis_w(i0, spec.n_x) * axis_w(i1, spec.n_x) * axis_w(i2, spec.n_x);
        double row = 0.0;
        for (int ip = 0; ip < spec.p_count(); ++ip) {
            const int j2 = ip % spec.n_p, j1 = (ip / spec.n_p) % spec.n_p, j0 = ip / (spec.n_p * spec.n_p);
            row += axis_w(j0, spec.n_p) * axis_w(j1, spec.n_p) * axis_w(j2, spec.n_p) * slice.value(ix, ip);
        }
        total += wx * row;
    }
    return total * cell;
}

} // namespace renskog
