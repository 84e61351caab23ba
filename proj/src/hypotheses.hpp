#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collision_op.hpp"

namespace renskog {

struct HypothesisReport {
    double k1_estimate = 0.0; // sup of the two-weight kernel integral divided by m(x,p)
    double k2_estimate = 0.0; // sup of the single-weight kernel integral
    double k = 0.0;           // max(k1, k2)
    int samples = 0;
    std::uint64_t seed = 0;
    double a = 0.0;
    std::vector<double> t_probe;
    std::vector<double> k1_at_probe;
    std::vector<double> k2_at_probe;
    double sigma_tilde_ratio_sup = 0.0; // measured sup of |z| * integral of sigma_tilde/(1+|z.w|)
    std::string label = "empirical K (truncated domain)";

    std::string to_json() const;
    static HypothesisReport from_json(const std::string& text);
};

// Numerical estimate of the constant K bounding the time-integrated kernel
// convolutions, over n_samples probe points (half grid nodes, half
// heavy-tail draws with |p| near p_max). The integrands are nonnegative, so
// the sup over t sits at the largest probe time.
HypothesisReport estimate_k(const KernelSpec& kernel, const GridSpec& grid, double a, int n_samples,
                            std::uint64_t seed);

struct GaleanoParams {
    double beta;
    double c;
    double L;
    double a;

    void validate() const;
};

// beta^4 |v| / (16 pi^2 c L a)
double galeano_bound(const GaleanoParams& params, const Vec3& v);

// Measured sup of |Y(rho_f) - Y(rho_g)| / ||f - g|| over random pairs in the
// R-ball; 0 for the constant kind.
double y_lipschitz_estimate(const YFactorSpec& y, const GridSpec& grid, const KernelSpec& kernel, double R,
                            int n_pairs, std::uint64_t seed);

} // namespace renskog
