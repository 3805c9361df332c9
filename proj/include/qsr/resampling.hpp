#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsr/code.hpp"
#include "qsr/noise.hpp"

namespace qsr {

struct Estimate {
    double p_l = 0.0;
    double std_err = 0.0;
    std::string method;  // SR-exact | SR-empirical | PS | CGPS | combined | plain
    double alpha = 1.0;
    double c = std::numeric_limits<double>::quiet_NaN();  // CGPS confidence, when used
    double acceptance = 1.0;
    uint64_t effective_n = 0;
};

// Importance-weighted logical error rate
//   p_L = sum_i P^(alpha-1)(s_i) X_i / sum_i P^(alpha-1)(s_i),
// weights handled in log domain and normalized by the maximum. Probabilities
// must be positive; the standard error comes from sr_variance.
Estimate sr_estimate(std::span<const double> p_s, std::span<const uint8_t> x, double alpha);
Estimate sr_estimate_log(std::span<const double> log_ps, std::span<const uint8_t> x, double alpha);

// Estimator variance: mean(X)(1-mean(X)) * sum w_i^2 / (sum w_i)^2 with
// w_i = P^(alpha-1)(s_i).
double sr_variance_log(std::span<const double> log_ps, std::span<const uint8_t> x, double alpha);

// Extracts (ln P(s), X) columns from a batch; every record must carry ln P(s).
Estimate sr_estimate(const SampleBatch& batch, double alpha);

// Unbiased empirical estimate of the unnormalized power distribution,
//   P_hat^alpha(x) = C(c_x, alpha) / C(N, alpha),
// plus its normalization. Symbols with c_x < alpha contribute exactly zero;
// alpha > N leaves the distribution empty (z_hat = 0).
struct EmpiricalPowerDistribution {
    int alpha = 1;
    uint64_t n = 0;
    std::vector<std::string> keys;  // sorted, for platform-stable iteration
    std::vector<double> p_hat;
    std::vector<double> q_hat;  // p_hat / z_hat; all zero when z_hat == 0
    double z_hat = 0.0;
};

EmpiricalPowerDistribution empirical_power(const std::unordered_map<std::string, uint64_t>& counts,
                                           uint64_t n, int alpha);

// The finite-data resampling workflow: discard syndromes appearing fewer than
// alpha times, build Q_hat_alpha on the survivors, draw n_tilde syndromes from
// it, pick one occurrence of each drawn syndrome uniformly (with replacement),
// and average X over the picks. n_tilde = 0 means "number of kept samples".
// alpha = 1 is the identity pass-through (plain batch mean, acceptance 1).
struct ResampleResult {
    Estimate estimate;
    std::vector<uint64_t> picked_indices;  // record indices of the n_tilde picks
};

ResampleResult resample_workflow(const SampleBatch& batch, int alpha, uint64_t n_tilde,
                                 uint64_t seed);

// Fraction of samples whose syndrome occurs at least alpha times.
double acceptance_rate(const SampleBatch& batch, int alpha);

// Sample-complexity lower bounds for observing the modal syndrome alpha times.
struct SampleBounds {
    double generic;  // alpha / P_max with P_max = (1-p)^n
    double low_p;    // alpha * e^(n p)
    double high_p;   // alpha * 2^(n-k)
};

SampleBounds sample_bounds(int alpha, const CodeSpec& code, NoiseModel noise);

}  // namespace qsr
