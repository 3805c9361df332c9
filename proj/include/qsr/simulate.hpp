#pragma once

#include <cstdint>

#include "qsr/code.hpp"
#include "qsr/noise.hpp"

namespace qsr {

struct DecoderConfig {
    enum class Method { Mwpm, Mld };
    Method method = Method::Mwpm;
    bool with_gap = false;         // fill w_comp and gap via the trellis
    bool with_exact_prob = false;  // fill ln P(s) via the trellis
};

DecoderConfig::Method decoder_method_from_name(const std::string& name);
std::string decoder_method_name(DecoderConfig::Method m);

// Runs N seeded samples: draw error, compute syndrome, decode, record failure
// bit and optional weights/gap/probability. Bit-identical for identical seeds
// regardless of worker count.
SampleBatch run_batch(const CodeSpec& code, NoiseModel noise, uint64_t n_samples,
                      const DecoderConfig& cfg, uint64_t seed);

}  // namespace qsr
