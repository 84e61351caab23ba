#include "collision_op.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "kinematics.hpp"

namespace renskog {

void OperatorConfig::validate() const {
    kernel.validate();
    y.validate();
    if (mode == CollisionMode::enskog) {
        if (!(a >= 0.0)) throw InvalidInput("operator.a must be nonnegative in enskog mode");
    } else {
        if (!(lambda > 0.0)) throw InvalidInput("operator.lambda must be positive in boltzmann mode");
        if (!(a >= 0.0)) throw InvalidInput("operator.a must be nonnegative");
    }
}

double density(const FieldLattice& slice, double t, const Vec3& x) {
    double acc = 0.0;
    for (const auto& node : momentum_rule(slice.spec())) {
        const Momentum3 p1(node.p);
        acc += node.weight * slice.interpolate(x - t * p1.velocity(), node.p);
    }
    return acc;
}

double f_plus(const FieldLattice& slice, double t, const Vec3& x, const Vec3& omega, const OperatorConfig& cfg) {
    if (cfg.mode == CollisionMode::boltzmann) return 1.0;
    return y_factor(density(slice, t, x + (cfg.a / 2.0) * omega), cfg.y);
}

double f_minus(const FieldLattice& slice, double t, const Vec3& x, const Vec3& omega, const OperatorConfig& cfg) {
    if (cfg.mode == CollisionMode::boltzmann) return 1.0;
    return y_factor(density(slice, t, x - (cfg.a / 2.0) * omega), cfg.y);
}

namespace {

// Orthonormal rows (e1, e2, e3) with e3 along d; caller guarantees d != 0.
struct Frame {
    Vec3 e1, e2, e3;
};

Frame frame_along(const Vec3& d, double dn) {
    Frame f;
    f.e3 = d / dn;
    int k = 0;
    double best = std::abs(f.e3.x);
    if (std::abs(f.e3.y) < best) { k = 1; best = std::abs(f.e3.y); }
    if (std::abs(f.e3.z) < best) k = 2;
    Vec3 axis{0.0, 0.0, 0.0};
    axis[k] = 1.0;
    f.e1 = cross(f.e3, axis);
    f.e1 = f.e1 / norm(f.e1);
    f.e2 = cross(f.e3, f.e1);
    return f;
}

// Uniform-grid interpolation shift: evaluating at (node_i + s) uses the same
// fraction for every node, so a shift fixes one 8-corner stencil for the
// whole axis range that stays inside the box.
struct ShiftAxis {
    int K = 0;
    double fr = 0.0;
    int ilo = 0, ihi = -1;
};

struct Shift3 {
    ShiftAxis ax[3];
    bool any = false;
};

Shift3 make_shift(const Vec3& s, double h, int n) {
    Shift3 out;
    out.any = true;
    for (int k = 0; k < 3; ++k) {
        const double u = s[k] / h;
        const int K = static_cast<int>(std::floor(u));
        ShiftAxis a;
        a.K = K;
        a.fr = u - K;
        a.ilo = std::max(0, static_cast<int>(std::ceil(-u)));
        a.ihi = std::min(n - 1, static_cast<int>(std::floor((n - 1) - u)));
        if (a.ilo > a.ihi) out.any = false;
        out.ax[k] = a;
    }
    return out;
}

// G[ix] = interpolated A at (x_node(ix) + shift); `fill` outside the box.
void gather_shift(const Shift3& sh, int n, const double* A, double* G, int count, double fill) {
    for (int i = 0; i < count; ++i) G[i] = fill;
    if (!sh.any) return;
    const ShiftAxis &a0 = sh.ax[0], &a1 = sh.ax[1], &a2 = sh.ax[2];
    const double w0[2] = {1.0 - a0.fr, a0.fr};
    const double w1[2] = {1.0 - a1.fr, a1.fr};
    const double w2[2] = {1.0 - a2.fr, a2.fr};
    // clear the in-box range, then accumulate the corners
    for (int i0 = a0.ilo; i0 <= a0.ihi; ++i0)
        for (int i1 = a1.ilo; i1 <= a1.ihi; ++i1)
            for (int i2 = a2.ilo; i2 <= a2.ihi; ++i2) G[(i0 * n + i1) * n + i2] = 0.0;
    for (int c = 0; c < 8; ++c) {
        const int c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
        const double w = w0[c0] * w1[c1] * w2[c2];
        if (w == 0.0) continue;
        for (int i0 = a0.ilo; i0 <= a0.ihi; ++i0) {
            const int src0 = (i0 + a0.K + c0) * n;
            for (int i1 = a1.ilo; i1 <= a1.ihi; ++i1) {
                const double* src = A + (src0 + i1 + a1.K + c1) * n + a2.K + c2;
                double* dst = G + (i0 * n + i1) * n;
                for (int i2 = a2.ilo; i2 <= a2.ihi; ++i2) dst[i2] += w * src[i2];
            }
        }
    }
}

void corner_weights(const double fr[3], double w[8]) {
    const double f0 = fr[0], f1 = fr[1], f2 = fr[2];
    const double g0 = 1.0 - f0, g1 = 1.0 - f1, g2 = 1.0 - f2;
    w[0] = g0 * g1 * g2;
    w[1] = g0 * g1 * f2;
    w[2] = g0 * f1 * g2;
    w[3] = g0 * f1 * f2;
    w[4] = f0 * g1 * g2;
    w[5] = f0 * g1 * f2;
    w[6] = f0 * f1 * g2;
    w[7] = f0 * f1 * f2;
}

// A[ix] = sum of the 8 p-corner values of V at row ix (p footing fixed).
void p_collapse(const double* V, int x_count, int p_count, int pbase, const double w[8], const int off[8],
                double* A) {
    const double* base = V + pbase;
    for (int ix = 0; ix < x_count; ++ix) {
        const double* row = base + static_cast<size_t>(ix) * p_count;
        A[ix] = w[0] * row[off[0]] + w[1] * row[off[1]] + w[2] * row[off[2]] + w[3] * row[off[3]]
              + w[4] * row[off[4]] + w[5] * row[off[5]] + w[6] * row[off[6]] + w[7] * row[off[7]];
    }
}

} // namespace

CollisionEngine::CollisionEngine(const GridSpec& grid, const OperatorConfig& cfg)
    : CollisionEngine(grid, cfg, cfg.shift_scale()) {}

CollisionEngine::CollisionEngine(const GridSpec& grid, const OperatorConfig& cfg, double shift_scale)
    : grid_(grid), cfg_(cfg), shift_(shift_scale) {
    grid.validate();
    cfg.validate();
    pnodes_ = momentum_rule(grid);
    v1_.reserve(pnodes_.size());
    p1base_.reserve(pnodes_.size());
    p1fr_.reserve(pnodes_.size());
    const double hp = grid.dp();
    for (const auto& node : pnodes_) {
        const Momentum3 m(node.p);
        v1_.push_back(m.velocity());
        AxisHit h[3];
        for (int k = 0; k < 3; ++k) h[k] = axis_hit(node.p[k], -grid.p_max, hp, grid.n_p);
        p1base_.push_back((h[0].cell * grid.n_p + h[1].cell) * grid.n_p + h[2].cell);
        p1fr_.push_back({h[0].frac, h[1].frac, h[2].frac});
    }
    const int n_theta = static_cast<int>(std::ceil(std::sqrt(grid.n_omega / 2.0)));
    const int n_psi = 2 * n_theta;
    const auto gx = gauss_legendre_nodes(n_theta);
    const auto gw = gauss_legendre_weights(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        const double ct = 0.5 * (gx[i] + 1.0); // cos(theta) on [0,1]: the S+2 hemisphere
        hemi_ct_.push_back(ct);
        hemi_st_.push_back(std::sqrt(std::max(0.0, 1.0 - ct * ct)));
        hemi_w_.push_back(0.5 * gw[i] * 2.0 * std::numbers::pi / n_psi);
    }
    for (int j = 0; j < n_psi; ++j) {
        const double psi = 2.0 * std::numbers::pi * (j + 0.5) / n_psi;
        hemi_cpsi_.push_back(std::cos(psi));
        hemi_spsi_.push_back(std::sin(psi));
    }
}

void CollisionEngine::build_entries(const Momentum3& p, std::vector<Entry>& out) const {
    out.clear();
    out.reserve(pnodes_.size() * hemi_ct_.size() * hemi_cpsi_.size());
    const Vec3 vp = p.velocity();
    const double hp = grid_.dp();
    const double expo = cfg_.kernel.delta + 0.5;
    for (size_t i = 0; i < pnodes_.size(); ++i) {
        const Momentum3 p1(pnodes_[i].p);
        const Vec3 d = v1_[i] - vp;
        const double dn = norm(d);
        if (dn == 0.0) continue; // coincident momenta: the kernel vanishes
        const Vec3 cr = cross(p1.p, p.p);
        const Invariants inv = collision_invariants(p, p1);
        const double bscale = std::sqrt(inv.s) / (2.0 * p1.p0 * std::pow(1.0 + inv.g * inv.g, expo));
        const double wp = pnodes_[i].weight / p1.p0;
        const Frame fr = frame_along(d, dn);
        for (size_t a = 0; a < hemi_ct_.size(); ++a) {
            const double ct = hemi_ct_[a], st = hemi_st_[a];
            for (size_t j = 0; j < hemi_cpsi_.size(); ++j) {
                Entry e;
                e.omega = st * (hemi_cpsi_[j] * fr.e1 + hemi_spsi_[j] * fr.e2) + ct * fr.e3;
                const double b = bscale * std::abs(dot(e.omega, cr)) * cfg_.kernel.sigma_tilde(e.omega);
                e.wb = wp * hemi_w_[a] * b;
                if (e.wb == 0.0) continue;
                const double q = collision_q(p, p1, e.omega);
                const Momentum3 pp(p.p + q * e.omega);
                const Momentum3 p1p(p1.p - q * e.omega);
                e.p_prime = pp.p;
                e.p1_prime = p1p.p;
                e.v_prime = pp.velocity();
                e.v1_prime = p1p.velocity();
                e.p1_index = static_cast<int>(i);
                AxisHit h[3];
                e.in1 = true;
                for (int k = 0; k < 3; ++k) {
                    h[k] = axis_hit(pp.p[k], -grid_.p_max, hp, grid_.n_p);
                    e.in1 = e.in1 && h[k].inside;
                    e.fr1[k] = h[k].frac;
                }
                e.pbase1 = e.in1 ? (h[0].cell * grid_.n_p + h[1].cell) * grid_.n_p + h[2].cell : 0;
                e.in2 = true;
                for (int k = 0; k < 3; ++k) {
                    h[k] = axis_hit(p1p.p[k], -grid_.p_max, hp, grid_.n_p);
                    e.in2 = e.in2 && h[k].inside;
                    e.fr2[k] = h[k].frac;
                }
                e.pbase2 = e.in2 ? (h[0].cell * grid_.n_p + h[1].cell) * grid_.n_p + h[2].cell : 0;
                out.push_back(e);
            }
        }
    }
}

CollisionEngine::BoundSlice CollisionEngine::bind(const FieldLattice& slice, double t) const {
    if (!(slice.spec() == grid_)) throw InvalidInput("slice grid does not match the engine grid");
    BoundSlice bs;
    bs.slice = &slice;
    bs.t = t;
    if (cfg_.mode == CollisionMode::boltzmann) {
        bs.y_const = 1.0;
    } else if (cfg_.y.kind == YKind::constant) {
        bs.y_const = cfg_.y.y0;
    } else {
        bs.y_const = 1.0;
        bs.y_field.resize(grid_.x_count());
        for (int ix = 0; ix < grid_.x_count(); ++ix) {
            const Vec3 x = grid_.x_node(ix);
            double rho = 0.0;
            for (size_t i = 0; i < pnodes_.size(); ++i)
                rho += pnodes_[i].weight * slice.interpolate(x - t * v1_[i], pnodes_[i].p);
            // the linear form extends to signed iterates; Y(0) applies outside the box
            bs.y_field[ix] = 1.0 + cfg_.y.b * rho;
        }
    }
    return bs;
}

double CollisionEngine::y_lookup(const BoundSlice& bs, const Vec3& pos) const {
    if (bs.y_field.empty()) return bs.y_const;
    const double h = grid_.dx();
    AxisHit a[3];
    for (int k = 0; k < 3; ++k) {
        a[k] = axis_hit(pos[k], -grid_.x_max, h, grid_.n_x);
        if (!a[k].inside) return 1.0 + cfg_.y.b * 0.0;
    }
    const int n = grid_.n_x;
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        const int c0 = (c >> 2) & 1, c1 = (c >> 1) & 1, c2 = c & 1;
        const double w = (c0 ? a[0].frac : 1.0 - a[0].frac) * (c1 ? a[1].frac : 1.0 - a[1].frac)
                       * (c2 ? a[2].frac : 1.0 - a[2].frac);
        if (w == 0.0) continue;
        acc += w * bs.y_field[((a[0].cell + c0) * n + a[1].cell + c1) * n + a[2].cell + c2];
    }
    return acc;
}

double CollisionEngine::gain(const BoundSlice& bs, const Vec3& x, const Momentum3& p) const {
    std::vector<Entry> entries;
    build_entries(p, entries);
    return gain_with(bs, x, p, entries);
}

double CollisionEngine::gain_with(const BoundSlice& bs, const Vec3& x, const Momentum3& p,
                                  const std::vector<Entry>& entries) const {
    const Vec3 vp = p.velocity();
    const double t = bs.t;
    const Vec3 xs = x + t * vp; // physical position of the sharp query
    double acc = 0.0;
    for (const auto& e : entries) {
        if (!e.in1 || !e.in2) continue;
        const double f1 = bs.slice->interpolate(x + t * (vp - e.v_prime), e.p_prime);
        if (f1 == 0.0) continue;
        const double f2 = bs.slice->interpolate(x + shift_ * e.omega + t * (vp - e.v1_prime), e.p1_prime);
        const double fp = y_lookup(bs, xs + (shift_ / 2.0) * e.omega);
        acc += e.wb * fp * f1 * f2;
    }
    return cfg_.prefactor() / p.p0 * acc;
}

double CollisionEngine::loss(const BoundSlice& bs, const Vec3& x, const Momentum3& p) const {
    std::vector<Entry> entries;
    build_entries(p, entries);
    return loss_with(bs, x, p, entries);
}

double CollisionEngine::loss_with(const BoundSlice& bs, const Vec3& x, const Momentum3& p,
                                  const std::vector<Entry>& entries) const {
    const double self = bs.slice->interpolate(x, p.p);
    if (self == 0.0) return 0.0;
    const Vec3 vp = p.velocity();
    const double t = bs.t;
    const Vec3 xs = x + t * vp;
    double acc = 0.0;
    for (const auto& e : entries) {
        const Vec3& v1 = v1_[e.p1_index];
        const double f2 = bs.slice->interpolate(x - shift_ * e.omega + t * (vp - v1), pnodes_[e.p1_index].p);
        if (f2 == 0.0) continue;
        const double fm = y_lookup(bs, xs - (shift_ / 2.0) * e.omega);
        acc += e.wb * fm * f2;
    }
    return cfg_.prefactor() / p.p0 * self * acc;
}

void CollisionEngine::sweep(const BoundSlice& bs, std::span<double> gain_out, std::span<double> loss_out) const {
    const int NX = grid_.x_count();
    const int NP = grid_.p_count();
    if (gain_out.size() != static_cast<size_t>(NX) * NP || loss_out.size() != static_cast<size_t>(NX) * NP)
        throw InvalidInput("sweep output spans must hold x_count*p_count values");
    const double* V = bs.slice->values().data();
    const double t = bs.t;
    const double hx = grid_.dx();
    const int nx = grid_.n_x;
    const bool linear_y = !bs.y_field.empty();
    const double* yf = linear_y ? bs.y_field.data() : nullptr;
    const double y_fill = 1.0; // Y(0) for the linear kind

#pragma omp parallel
    {
        std::vector<Entry> entries;
        std::vector<double> A1(NX), A2(NX), A3(NX), G1(NX), G2(NX), G3(NX), FP(NX), FM(NX);
        std::vector<double> gacc(NX), lacc(NX);
#pragma omp for schedule(dynamic)
        for (int ip = 0; ip < NP; ++ip) {
            const Momentum3 p(grid_.p_node(ip));
            const Vec3 vp = p.velocity();
            build_entries(p, entries);
            std::fill(gacc.begin(), gacc.end(), 0.0);
            std::fill(lacc.begin(), lacc.end(), 0.0);
            int cur_p1 = -1;
            for (const auto& e : entries) {
                if (e.p1_index != cur_p1) {
                    cur_p1 = e.p1_index;
                    double w8[8];
                    int off8[8];
                    const auto& fr = p1fr_[cur_p1];
                    const double frr[3] = {fr[0], fr[1], fr[2]};
                    corner_weights(frr, w8);
                    for (int c = 0; c < 8; ++c)
                        off8[c] = (((c >> 2) & 1) * grid_.n_p + ((c >> 1) & 1)) * grid_.n_p + (c & 1);
                    p_collapse(V, NX, NP, p1base_[cur_p1], w8, off8, A3.data());
                }
                // loss factor f^#(t, x - a w + t(vp - v1), p1)
                const Vec3 s3 = -shift_ * e.omega + t * (vp - v1_[e.p1_index]);
                const Shift3 sh3 = make_shift(s3, hx, nx);
                gather_shift(sh3, nx, A3.data(), G3.data(), NX, 0.0);
                if (linear_y) {
                    const Vec3 sfm = t * vp - (shift_ / 2.0) * e.omega;
                    gather_shift(make_shift(sfm, hx, nx), nx, yf, FM.data(), NX, y_fill);
                    for (int ix = 0; ix < NX; ++ix) lacc[ix] += e.wb * FM[ix] * G3[ix];
                } else {
                    for (int ix = 0; ix < NX; ++ix) lacc[ix] += e.wb * G3[ix];
                }
                if (e.in1 && e.in2) {
                    double w8[8];
                    int off8[8];
                    for (int c = 0; c < 8; ++c)
                        off8[c] = (((c >> 2) & 1) * grid_.n_p + ((c >> 1) & 1)) * grid_.n_p + (c & 1);
                    corner_weights(e.fr1, w8);
                    p_collapse(V, NX, NP, e.pbase1, w8, off8, A1.data());
                    corner_weights(e.fr2, w8);
                    p_collapse(V, NX, NP, e.pbase2, w8, off8, A2.data());
                    const Vec3 s1 = t * (vp - e.v_prime);
                    const Vec3 s2 = shift_ * e.omega + t * (vp - e.v1_prime);
                    gather_shift(make_shift(s1, hx, nx), nx, A1.data(), G1.data(), NX, 0.0);
                    gather_shift(make_shift(s2, hx, nx), nx, A2.data(), G2.data(), NX, 0.0);
                    if (linear_y) {
                        const Vec3 sfp = t * vp + (shift_ / 2.0) * e.omega;
                        gather_shift(make_shift(sfp, hx, nx), nx, yf, FP.data(), NX, y_fill);
                        for (int ix = 0; ix < NX; ++ix) gacc[ix] += e.wb * FP[ix] * G1[ix] * G2[ix];
                    } else {
                        for (int ix = 0; ix < NX; ++ix) gacc[ix] += e.wb * G1[ix] * G2[ix];
                    }
                }
            }
            const double pref = cfg_.prefactor() / p.p0 * bs.y_const;
            for (int ix = 0; ix < NX; ++ix) {
                gain_out[static_cast<size_t>(ix) * NP + ip] = pref * gacc[ix];
                loss_out[static_cast<size_t>(ix) * NP + ip] =
                    pref * lacc[ix] * V[static_cast<size_t>(ix) * NP + ip];
            }
        }
    }
}

double gain_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p,
                  const OperatorConfig& cfg) {
    CollisionEngine eng(slice.spec(), cfg);
    return eng.gain(eng.bind(slice, t), x, p);
}

double loss_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p,
                  const OperatorConfig& cfg) {
    CollisionEngine eng(slice.spec(), cfg);
    return eng.loss(eng.bind(slice, t), x, p);
}

double collision_sharp(const FieldLattice& slice, double t, const Vec3& x, const Momentum3& p,
                       const OperatorConfig& cfg) {
    CollisionEngine eng(slice.spec(), cfg);
    const auto bs = eng.bind(slice, t);
    return eng.gain(bs, x, p) - eng.loss(bs, x, p);
}

} // namespace renskog
