#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qsr {

// Percentile bootstrap over sample indices. The statistic receives the indices
// of one resample (drawn with replacement) and returns the value of interest.
struct BootstrapCi {
    double point = 0.0;  // statistic on the original sample
    double low = 0.0;
    double high = 0.0;
    double level = 0.67;
    int replicates = 0;
};

BootstrapCi bootstrap_ci(uint64_t n, const std::function<double(std::span<const uint64_t>)>& stat,
                         int replicates, double level, uint64_t seed);

// Convenience: bootstrap CI for the mean of a binary/real column.
BootstrapCi bootstrap_mean_ci(std::span<const double> values, int replicates, double level,
                              uint64_t seed);

// Finite-size scaling. Each point is (p, d, p_L, sigma); the collapse rescales
// x = (p - p_th) d^(1/nu) and fits one quadratic through all rescaled points,
// minimizing the weighted residual over (p_th, nu).
struct ScalingPoint {
    double p = 0.0;
    int d = 0;
    double p_l = 0.0;
    double sigma = 0.0;
};

struct ScalingFit {
    double p_th = 0.0;
    double p_th_err = 0.0;
    double nu = 0.0;
    double nu_err = 0.0;
    double chi2 = 0.0;          // weighted residual at the optimum
    std::vector<double> coeff;  // quadratic coefficients c0 + c1 x + c2 x^2
};

ScalingFit scaling_collapse(const std::vector<ScalingPoint>& points, uint64_t seed);

// Crossing of two p_L(p) curves sampled on a shared p grid, by linear
// interpolation of their difference.
struct CurveSamples {
    std::vector<double> p;
    std::vector<double> p_l;
};

double crossing_point(const CurveSamples& a, const CurveSamples& b);

}  // namespace qsr
