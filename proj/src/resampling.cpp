#include "qsr/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "qsr/accum.hpp"
#include "qsr/errors.hpp"
#include "qsr/rng.hpp"

namespace qsr {

namespace {

struct WeightSums {
    double sum_w = 0.0;    // sum of normalized weights
    double sum_w2 = 0.0;   // sum of squared normalized weights
    double sum_wx = 0.0;   // sum of weight * X
    double mean_x = 0.0;   // unweighted mean of X
    uint64_t n = 0;
};

WeightSums weight_sums(std::span<const double> log_ps, std::span<const uint8_t> x, double alpha) {
    if (log_ps.empty()) throw EmptyInputError("sr_estimate: empty batch");
    if (log_ps.size() != x.size()) throw DomainError("sr_estimate: column length mismatch");
    if (alpha < 1.0) throw DomainError("sr_estimate: alpha must be >= 1");
    const double e = alpha - 1.0;
    double max_lw = -std::numeric_limits<double>::infinity();
    for (double lp : log_ps) {
        if (!(lp <= 0.0)) throw DomainError("sr_estimate: probabilities must be in (0, 1]");
        max_lw = std::max(max_lw, e * lp);
    }
    WeightSums s;
    s.n = log_ps.size();
    KahanSum sw, sw2, swx, sx;
    for (size_t i = 0; i < log_ps.size(); ++i) {
        double w = std::exp(e * log_ps[i] - max_lw);
        sw.add(w);
        sw2.add(w * w);
        if (x[i]) swx.add(w);
        sx.add(x[i]);
    }
    s.sum_w = sw.value();
    s.sum_w2 = sw2.value();
    s.sum_wx = swx.value();
    s.mean_x = sx.value() / static_cast<double>(s.n);
    return s;
}

}  // namespace

Estimate sr_estimate_log(std::span<const double> log_ps, std::span<const uint8_t> x, double alpha) {
    WeightSums s = weight_sums(log_ps, x, alpha);
    Estimate est;
    est.method = "SR-exact";
    est.alpha = alpha;
    est.p_l = s.sum_wx / s.sum_w;
    est.std_err = std::sqrt(s.mean_x * (1.0 - s.mean_x) * s.sum_w2 / (s.sum_w * s.sum_w));
    est.acceptance = 1.0;
    est.effective_n = static_cast<uint64_t>(std::llround(s.sum_w * s.sum_w / s.sum_w2));
    return est;
}

Estimate sr_estimate(std::span<const double> p_s, std::span<const uint8_t> x, double alpha) {
    std::vector<double> log_ps(p_s.size());
    for (size_t i = 0; i < p_s.size(); ++i) {
        if (!(p_s[i] > 0.0)) throw DomainError("sr_estimate: probabilities must be positive");
        log_ps[i] = std::log(p_s[i]);
    }
    return sr_estimate_log(log_ps, x, alpha);
}

double sr_variance_log(std::span<const double> log_ps, std::span<const uint8_t> x, double alpha) {
    WeightSums s = weight_sums(log_ps, x, alpha);
    return s.mean_x * (1.0 - s.mean_x) * s.sum_w2 / (s.sum_w * s.sum_w);
}

Estimate sr_estimate(const SampleBatch& batch, double alpha) {
    std::vector<double> log_ps;
    std::vector<uint8_t> x;
    log_ps.reserve(batch.records.size());
    x.reserve(batch.records.size());
    for (const auto& r : batch.records) {
        if (!r.has_log_ps())
            throw ContractError("sr_estimate: batch record lacks exact syndrome probability");
        log_ps.push_back(r.log_ps);
        x.push_back(r.x);
    }
    return sr_estimate_log(log_ps, x, alpha);
}

EmpiricalPowerDistribution empirical_power(const std::unordered_map<std::string, uint64_t>& counts,
                                           uint64_t n, int alpha) {
    if (alpha < 1) throw DomainError("empirical_power: alpha must be a positive integer");
    uint64_t total = 0;
    for (const auto& [key, c] : counts) total += c;
    if (total != n) throw DomainError("empirical_power: counts do not sum to N");

    EmpiricalPowerDistribution out;
    out.alpha = alpha;
    out.n = n;
    out.keys.reserve(counts.size());
    for (const auto& [key, c] : counts) out.keys.push_back(key);
    std::sort(out.keys.begin(), out.keys.end());

    out.p_hat.resize(out.keys.size(), 0.0);
    KahanSum z;
    for (size_t i = 0; i < out.keys.size(); ++i) {
        uint64_t c = counts.at(out.keys[i]);
        if (c < static_cast<uint64_t>(alpha) || static_cast<uint64_t>(alpha) > n) continue;
        double v = 1.0;  // C(c, alpha) / C(n, alpha), factor by factor
        for (int j = 0; j < alpha; ++j)
            v *= static_cast<double>(c - j) / static_cast<double>(n - j);
        out.p_hat[i] = v;
        z.add(v);
    }
    out.z_hat = z.value();
    out.q_hat.assign(out.keys.size(), 0.0);
    if (out.z_hat > 0.0)
        for (size_t i = 0; i < out.keys.size(); ++i) out.q_hat[i] = out.p_hat[i] / out.z_hat;
    return out;
}

ResampleResult resample_workflow(const SampleBatch& batch, int alpha, uint64_t n_tilde,
                                 uint64_t seed) {
    if (batch.records.empty()) throw EmptyInputError("resample_workflow: empty batch");
    if (alpha < 1) throw DomainError("resample_workflow: alpha must be a positive integer");
    const uint64_t n = batch.size();

    if (alpha == 1) {
        // SR stage is the identity: plain batch mean over all samples.
        ResampleResult res;
        KahanSum sx;
        res.picked_indices.resize(n);
        for (uint64_t i = 0; i < n; ++i) {
            res.picked_indices[i] = i;
            sx.add(batch.records[i].x);
        }
        double p = sx.value() / static_cast<double>(n);
        res.estimate = {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), "SR-empirical", 1.0,
                        std::numeric_limits<double>::quiet_NaN(), 1.0, n};
        return res;
    }

    // Step 1: discard syndromes appearing fewer than alpha times.
    std::vector<uint32_t> eligible;
    uint64_t kept_samples = 0;
    for (uint32_t id = 0; id < batch.counts.size(); ++id)
        if (batch.counts[id] >= static_cast<uint64_t>(alpha)) {
            eligible.push_back(id);
            kept_samples += batch.counts[id];
        }
    if (eligible.empty())
        throw EmptyInputError("resample_workflow: no syndrome appears at least " +
                              std::to_string(alpha) + " times");

    // Sort by key string so draws are independent of key interning order.
    std::sort(eligible.begin(), eligible.end(),
              [&](uint32_t a, uint32_t b) { return batch.keys[a] < batch.keys[b]; });

    // Step 2: Q_hat_alpha on the survivors (shared normalizer cancels in the cdf).
    std::vector<double> cdf(eligible.size());
    double run = 0.0;
    for (size_t i = 0; i < eligible.size(); ++i) {
        uint64_t c = batch.counts[eligible[i]];
        double v = 1.0;
        for (int j = 0; j < alpha; ++j)
            v *= static_cast<double>(c - j) / static_cast<double>(n - j);
        run += v;
        cdf[i] = run;
    }

    // Occurrence lists per eligible syndrome, in record order.
    std::unordered_map<uint32_t, uint32_t> slot;
    for (size_t i = 0; i < eligible.size(); ++i) slot.emplace(eligible[i], static_cast<uint32_t>(i));
    std::vector<std::vector<uint64_t>> occurrences(eligible.size());
    for (size_t i = 0; i < eligible.size(); ++i)
        occurrences[i].reserve(batch.counts[eligible[i]]);
    for (uint64_t r = 0; r < n; ++r) {
        auto it = slot.find(batch.records[r].key_id);
        if (it != slot.end()) occurrences[it->second].push_back(r);
    }

    // Steps 3-6: draw syndromes from Q_hat_alpha, pick occurrences uniformly
    // with replacement, average X.
    if (n_tilde == 0) n_tilde = kept_samples;
    std::mt19937_64 rng(splitmix64(seed));
    ResampleResult res;
    res.picked_indices.reserve(n_tilde);
    uint64_t failures = 0;
    const double total = cdf.back();
    for (uint64_t t = 0; t < n_tilde; ++t) {
        double u = uniform01(rng) * total;
        size_t i = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (i >= cdf.size()) i = cdf.size() - 1;
        const auto& occ = occurrences[i];
        size_t j = static_cast<size_t>(uniform01(rng) * static_cast<double>(occ.size()));
        if (j >= occ.size()) j = occ.size() - 1;
        res.picked_indices.push_back(occ[j]);
        failures += batch.records[occ[j]].x;
    }

    double p = static_cast<double>(failures) / static_cast<double>(n_tilde);
    res.estimate = {p,
                    std::sqrt(p * (1.0 - p) / static_cast<double>(n_tilde)),
                    "SR-empirical",
                    static_cast<double>(alpha),
                    std::numeric_limits<double>::quiet_NaN(),
                    static_cast<double>(kept_samples) / static_cast<double>(n),
                    n_tilde};
    return res;
}

double acceptance_rate(const SampleBatch& batch, int alpha) {
    if (batch.records.empty()) throw EmptyInputError("acceptance_rate: empty batch");
    if (alpha < 1) throw DomainError("acceptance_rate: alpha must be a positive integer");
    uint64_t kept = 0;
    for (uint64_t c : batch.counts)
        if (c >= static_cast<uint64_t>(alpha)) kept += c;
    return static_cast<double>(kept) / static_cast<double>(batch.size());
}

SampleBounds sample_bounds(int alpha, const CodeSpec& code, NoiseModel noise) {
    if (alpha < 1) throw DomainError("sample_bounds: alpha must be a positive integer");
    const double a = alpha;
    const double p_max = std::pow(1.0 - noise.p, code.n);
    return {a / p_max, a * std::exp(code.n * noise.p),
            a * std::pow(2.0, code.n - code.k)};
}

}  // namespace qsr
