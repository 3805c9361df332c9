#pragma once

#include <cstdint>

#include "qsr/noise.hpp"
#include "qsr/resampling.hpp"

namespace qsr {

// Plain post-selection: keep only the trivial (all-zero) syndrome and report
// the failure rate among the kept samples.
Estimate ps_estimate(const SampleBatch& batch);

// Complementary-gap post-selection: keep a sample iff its confidence
//   1 - gap / d  <=  c
// (equality kept). Every record must carry the gap.
struct CgpsConfig {
    double c = 1.0;
    int distance = 0;
};

struct CgpsResult {
    Estimate estimate;
    std::vector<uint64_t> kept_indices;
};

CgpsResult cgps_filter(const SampleBatch& batch, const CgpsConfig& cfg);

// Resampling followed by gap post-selection on the drawn samples. The reported
// acceptance is the product of the two stage acceptances.
Estimate combined_sr_cgps(const SampleBatch& batch, int alpha, const CgpsConfig& cfg,
                          uint64_t n_tilde, uint64_t seed);

}  // namespace qsr
