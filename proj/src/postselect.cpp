#include "qsr/postselect.hpp"

#include <cmath>

#include "qsr/errors.hpp"

namespace qsr {

Estimate ps_estimate(const SampleBatch& batch) {
    if (batch.records.empty()) throw EmptyInputError("ps_estimate: empty batch");
    Syndrome zero(batch.syndrome_bits);
    const std::string zero_key = zero.packed_key();
    uint64_t kept = 0, failures = 0;
    for (const auto& r : batch.records) {
        if (batch.keys[r.key_id] != zero_key) continue;
        ++kept;
        failures += r.x;
    }
    if (kept == 0) throw EmptyInputError("ps_estimate: no trivial-syndrome samples");
    double p = static_cast<double>(failures) / static_cast<double>(kept);
    Estimate est;
    est.p_l = p;
    est.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(kept));
    est.method = "PS";
    est.acceptance = static_cast<double>(kept) / static_cast<double>(batch.size());
    est.effective_n = kept;
    return est;
}

CgpsResult cgps_filter(const SampleBatch& batch, const CgpsConfig& cfg) {
    if (batch.records.empty()) throw EmptyInputError("cgps_filter: empty batch");
    if (cfg.distance < 1) throw DomainError("cgps_filter: distance must be >= 1");
    if (cfg.c < 0.0 || cfg.c > 1.0) throw DomainError("cgps_filter: c must be in [0, 1]");
    CgpsResult res;
    uint64_t failures = 0;
    for (uint64_t i = 0; i < batch.size(); ++i) {
        const auto& r = batch.records[i];
        if (!r.has_gap()) throw ContractError("cgps_filter: record lacks complementary gap");
        double confidence = 1.0 - static_cast<double>(r.gap) / cfg.distance;
        if (confidence <= cfg.c) {
            res.kept_indices.push_back(i);
            failures += r.x;
        }
    }
    if (res.kept_indices.empty())
        throw EmptyInputError("cgps_filter: no sample passes confidence cut c=" +
                              std::to_string(cfg.c));
    uint64_t kept = res.kept_indices.size();
    double p = static_cast<double>(failures) / static_cast<double>(kept);
    res.estimate.p_l = p;
    res.estimate.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(kept));
    res.estimate.method = "CGPS";
    res.estimate.c = cfg.c;
    res.estimate.acceptance = static_cast<double>(kept) / static_cast<double>(batch.size());
    res.estimate.effective_n = kept;
    return res;
}

Estimate combined_sr_cgps(const SampleBatch& batch, int alpha, const CgpsConfig& cfg,
                          uint64_t n_tilde, uint64_t seed) {
    if (cfg.distance < 1) throw DomainError("combined_sr_cgps: distance must be >= 1");
    if (cfg.c < 0.0 || cfg.c > 1.0) throw DomainError("combined_sr_cgps: c must be in [0, 1]");
    ResampleResult sr = resample_workflow(batch, alpha, n_tilde, seed);

    uint64_t kept = 0, failures = 0;
    for (uint64_t idx : sr.picked_indices) {
        const auto& r = batch.records[idx];
        if (!r.has_gap()) throw ContractError("combined_sr_cgps: record lacks complementary gap");
        double confidence = 1.0 - static_cast<double>(r.gap) / cfg.distance;
        if (confidence <= cfg.c) {
            ++kept;
            failures += r.x;
        }
    }
    if (kept == 0)
        throw EmptyInputError("combined_sr_cgps: no resampled sample passes confidence cut c=" +
                              std::to_string(cfg.c));
    double p = static_cast<double>(failures) / static_cast<double>(kept);
    Estimate est;
    est.p_l = p;
    est.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(kept));
    est.method = "combined";
    est.alpha = alpha;
    est.c = cfg.c;
    est.acceptance = sr.estimate.acceptance *
                     (static_cast<double>(kept) / static_cast<double>(sr.picked_indices.size()));
    est.effective_n = kept;
    return est;
}

}  // namespace qsr
