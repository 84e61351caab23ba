#include "hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "errors.hpp"
#include "kinematics.hpp"
#include "rng.hpp"

namespace renskog {

using nlohmann::json;

std::string HypothesisReport::to_json() const {
    json j{{"k1_estimate", k1_estimate},
           {"k2_estimate", k2_estimate},
           {"k", k},
           {"samples", samples},
           {"seed", seed},
           {"a", a},
           {"t_probe", t_probe},
           {"k1_at_probe", k1_at_probe},
           {"k2_at_probe", k2_at_probe},
           {"sigma_tilde_ratio_sup", sigma_tilde_ratio_sup},
           {"label", label}};
    return j.dump(2);
}

HypothesisReport HypothesisReport::from_json(const std::string& text) {
    HypothesisReport r;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed hypothesis report: ") + e.what());
    }
    r.k1_estimate = j.at("k1_estimate").get<double>();
    r.k2_estimate = j.at("k2_estimate").get<double>();
    r.k = j.at("k").get<double>();
    r.samples = j.at("samples").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.a = j.at("a").get<double>();
    r.t_probe = j.at("t_probe").get<std::vector<double>>();
    r.k1_at_probe = j.at("k1_at_probe").get<std::vector<double>>();
    r.k2_at_probe = j.at("k2_at_probe").get<std::vector<double>>();
    r.sigma_tilde_ratio_sup = j.at("sigma_tilde_ratio_sup").get<double>();
    r.label = j.value("label", "");
    return r;
}

namespace {

double sigma_ratio_sup(const KernelSpec& kernel, const GridSpec& grid) {
    // aligned hemisphere rule with the pole along z-hat; sample a few fixed
    // directions in case sigma_tilde is ever made anisotropic
    const int budget = std::max(128, grid.n_omega);
    const int n_theta = static_cast<int>(std::ceil(std::sqrt(budget / 2.0)));
    const int n_psi = 2 * n_theta;
    const auto gx = gauss_legendre_nodes(n_theta);
    const auto gw = gauss_legendre_weights(n_theta);
    const Vec3 dirs[4] = {{1, 0, 0},
                          {0, 1, 0},
                          {0, 0, 1},
                          {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}};
    double sup = 0.0;
    for (int iz = 0; iz <= 40; ++iz) {
        const double zn = std::pow(10.0, -2.0 + 4.0 * iz / 40.0);
        for (const Vec3& dir : dirs) {
            Vec3 axis{0, 0, 1};
            if (std::abs(dir.z) > 0.9) axis = {1, 0, 0};
            Vec3 e1 = cross(dir, axis);
            e1 = e1 / norm(e1);
            const Vec3 e2 = cross(dir, e1);
            double integral = 0.0;
            for (int i = 0; i < n_theta; ++i) {
                const double ct = 0.5 * (gx[i] + 1.0);
                const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                const double w = 0.5 * gw[i] * 2.0 * std::numbers::pi / n_psi;
                for (int jp = 0; jp < n_psi; ++jp) {
                    const double psi = 2.0 * std::numbers::pi * (jp + 0.5) / n_psi;
                    const Vec3 omega = st * (std::cos(psi) * e1 + std::sin(psi) * e2) + ct * dir;
                    integral += w * kernel.sigma_tilde(omega) / (1.0 + zn * std::abs(dot(omega, dir)));
                }
            }
            sup = std::max(sup, zn * integral);
        }
    }
    return sup;
}

} // namespace

HypothesisReport estimate_k(const KernelSpec& kernel, const GridSpec& grid, double a, int n_samples,
                            std::uint64_t seed) {
    if (n_samples < 100) throw InvalidInput("estimate_k requires n_samples >= 100");
    grid.validate();
    kernel.validate();
    if (!(a >= 0.0)) throw InvalidInput("hard-sphere diameter must be nonnegative");

    OperatorConfig probe_cfg;
    probe_cfg.mode = CollisionMode::boltzmann; // engine is used for its quadrature entries only
    probe_cfg.lambda = 1.0;
    probe_cfg.a = a;
    probe_cfg.kernel = kernel;
    probe_cfg.y.kind = YKind::constant;
    probe_cfg.y.y0 = 1.0;
    const CollisionEngine engine(grid, probe_cfg);

    // probe times: quarter, half and full horizon on the time grid
    std::vector<int> probe_idx;
    for (int k : {(grid.n_t - 1) / 4, (grid.n_t - 1) / 2, grid.n_t - 1})
        if (k >= 1 && (probe_idx.empty() || probe_idx.back() != k)) probe_idx.push_back(k);

    HypothesisReport report;
    report.samples = n_samples;
    report.seed = seed;
    report.a = a;
    for (int k : probe_idx) report.t_probe.push_back(grid.time(k));
    report.k1_at_probe.assign(probe_idx.size(), 0.0);
    report.k2_at_probe.assign(probe_idx.size(), 0.0);

    // draw all sample points up front; evaluations are then order-independent
    struct Sample {
        Vec3 x;
        Momentum3 p;
    };
    std::vector<Sample> samples;
    samples.reserve(n_samples);
    Rng rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        if (s % 2 == 0) {
            const int ix = rng.index(grid.x_count());
            const int ip = rng.index(grid.p_count());
            samples.push_back({grid.x_node(ix), Momentum3(grid.p_node(ip))});
        } else {
            // heavy-tail draw: the weight decays in |x x p| and p0, so the sup
            // is most at risk near the momentum truncation radius
            const Vec3 x = rng.uniform_box(grid.x_max);
            const Vec3 dir = rng.unit_vector();
            const double r = grid.p_max * (0.7 + 0.3 * rng.uniform01());
            samples.push_back({x, Momentum3(r * dir)});
        }
    }

    std::vector<std::vector<double>> lhs1(n_samples), lhs2(n_samples);

#pragma omp parallel
    {
        std::vector<CollisionEngine::Entry> entries;
#pragma omp for schedule(dynamic)
        for (int s = 0; s < n_samples; ++s) {
            const Vec3& x = samples[s].x;
            const Momentum3& p = samples[s].p;
            const Vec3 vp = p.velocity();
            engine.build_entries(p, entries);

            struct Hoisted {
                Vec3 dv1, dv2, dv3; // velocity differences entering the streamed positions
                Vec3 base1, base2, base3;
                Momentum3 pp, p1p, p1;
                double e1, e2, e3; // exp(-p0) factors of the weights
            };
            std::vector<Hoisted> hoist(entries.size());
            for (size_t i = 0; i < entries.size(); ++i) {
                const auto& e = entries[i];
                Hoisted h;
                h.pp = Momentum3(e.p_prime);
                h.p1p = Momentum3(e.p1_prime);
                h.p1 = Momentum3(engine.momentum_nodes()[e.p1_index].p);
                h.dv1 = vp - e.v_prime;
                h.dv2 = vp - e.v1_prime;
                h.dv3 = vp - h.p1.velocity();
                h.base1 = x;
                h.base2 = x + a * e.omega;
                h.base3 = x - a * e.omega;
                h.e1 = std::exp(-h.pp.p0);
                h.e2 = std::exp(-h.p1p.p0);
                h.e3 = std::exp(-h.p1.p0);
                hoist[i] = h;
            }

            const double ex = -(1.0 + kernel.delta) / 2.0;
            std::vector<double> integrand1(grid.n_t), integrand2(grid.n_t);
            for (int k = 0; k < grid.n_t; ++k) {
                const double tau = grid.time(k);
                double acc1 = 0.0, acc2 = 0.0;
                for (size_t i = 0; i < entries.size(); ++i) {
                    const auto& e = entries[i];
                    const auto& h = hoist[i];
                    const double m1 = std::pow(1.0 + norm(cross(h.base1 + tau * h.dv1, h.pp.p)), ex) * h.e1;
                    const double m2 = std::pow(1.0 + norm(cross(h.base2 + tau * h.dv2, h.p1p.p)), ex) * h.e2;
                    const double m3 = std::pow(1.0 + norm(cross(h.base3 + tau * h.dv3, h.p1.p)), ex) * h.e3;
                    acc1 += e.wb * m1 * m2;
                    acc2 += e.wb * m3;
                }
                integrand1[k] = acc1 / p.p0;
                integrand2[k] = acc2 / p.p0;
            }
            // cumulative trapezoid, recorded at the probe times
            lhs1[s].assign(probe_idx.size(), 0.0);
            lhs2[s].assign(probe_idx.size(), 0.0);
            double cum1 = 0.0, cum2 = 0.0;
            size_t next = 0;
            for (int k = 1; k < grid.n_t && next < probe_idx.size(); ++k) {
                cum1 += 0.5 * grid.dt() * (integrand1[k - 1] + integrand1[k]);
                cum2 += 0.5 * grid.dt() * (integrand2[k - 1] + integrand2[k]);
                if (k == probe_idx[next]) {
                    const double m_xp = weight_m(x, p, kernel);
                    lhs1[s][next] = cum1 / m_xp;
                    lhs2[s][next] = cum2;
                    ++next;
                }
            }
        }
    }

    for (int s = 0; s < n_samples; ++s)
        for (size_t j = 0; j < probe_idx.size(); ++j) {
            report.k1_at_probe[j] = std::max(report.k1_at_probe[j], lhs1[s][j]);
            report.k2_at_probe[j] = std::max(report.k2_at_probe[j], lhs2[s][j]);
        }
    report.k1_estimate = report.k1_at_probe.back();
    report.k2_estimate = report.k2_at_probe.back();
    report.k = std::max(report.k1_estimate, report.k2_estimate);
    report.sigma_tilde_ratio_sup = sigma_ratio_sup(kernel, grid);
    return report;
}

void GaleanoParams::validate() const {
    if (!(beta > 0.0 && c > 0.0 && L > 0.0 && a > 0.0))
        throw InvalidInput("galeano parameters beta, c, L, a must all be positive");
}

double galeano_bound(const GaleanoParams& params, const Vec3& v) {
    params.validate();
    const double pi = std::numbers::pi;
    return std::pow(params.beta, 4) * norm(v) / (16.0 * pi * pi * params.c * params.L * params.a);
}

double y_lipschitz_estimate(const YFactorSpec& y, const GridSpec& grid, const KernelSpec& kernel, double R,
                            int n_pairs, std::uint64_t seed) {
    y.validate();
    if (y.kind == YKind::constant) return 0.0;
    if (n_pairs < 1) throw InvalidInput("y_lipschitz_estimate requires n_pairs >= 1");
    const WeightTable weights(grid, kernel);
    const auto nodes = momentum_rule(grid);
    std::vector<Vec3> v1;
    v1.reserve(nodes.size());
    for (const auto& n : nodes) v1.push_back(Momentum3(n.p).velocity());

    Rng rng(seed);
    auto random_slice = [&](FieldLattice& f) {
        auto vals = f.values();
        const auto m = weights.values();
        for (size_t i = 0; i < vals.size(); ++i) vals[i] = R * rng.uniform(-1.0, 1.0) * m[i];
    };
    auto rho_at_nodes = [&](const FieldLattice& f, std::vector<double>& rho) {
        rho.assign(grid.x_count(), 0.0);
        for (int ix = 0; ix < grid.x_count(); ++ix) {
            const Vec3 x = grid.x_node(ix);
            double acc = 0.0;
            for (size_t i = 0; i < nodes.size(); ++i) acc += nodes[i].weight * f.interpolate(x, nodes[i].p);
            rho[ix] = acc;
        }
    };

    double sup = 0.0;
    FieldLattice f(grid), g(grid);
    std::vector<double> rf, rg;
    for (int pair = 0; pair < n_pairs; ++pair) {
        random_slice(f);
        random_slice(g);
        const double denom = [&] {
            double best = 0.0;
            const auto vf = f.values(), vg = g.values();
            const auto m = weights.values();
            for (size_t i = 0; i < vf.size(); ++i) best = std::max(best, std::abs(vf[i] - vg[i]) / m[i]);
            return best;
        }();
        if (denom == 0.0) continue;
        rho_at_nodes(f, rf);
        rho_at_nodes(g, rg);
        double dy = 0.0;
        for (int ix = 0; ix < grid.x_count(); ++ix)
            dy = std::max(dy, std::abs(y.b * (rf[ix] - rg[ix])));
        sup = std::max(sup, dy / denom);
    }
    return sup;
}

} // namespace renskog
