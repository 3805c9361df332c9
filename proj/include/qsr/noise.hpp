#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsr/bitvec.hpp"
#include "qsr/code.hpp"

namespace qsr {

struct NoiseModel {
    double p = 0.0;  // independent per-qubit X-flip probability
};

enum class LogicalClass : uint8_t { I = 0, X = 1 };

inline const char* class_name(LogicalClass c) { return c == LogicalClass::I ? "I" : "X"; }

// Independent bit-flip on each qubit with probability noise.p.
ErrorPattern sample_error(const CodeSpec& code, NoiseModel noise, std::mt19937_64& rng);

// Bit j = parity of e over z_checks[j].
Syndrome syndrome_of(const CodeSpec& code, const ErrorPattern& e);

// Logical class of the residual e XOR correction; the residual must have a
// trivial syndrome.
LogicalClass residual_class(const CodeSpec& code, const ErrorPattern& e, const ErrorPattern& correction);

// Class of a trivial-syndrome pattern relative to the zero correction.
inline LogicalClass class_of_residual(const BitVec& residual, const BitVec& z_logical_mask) {
    return residual.parity_and(z_logical_mask) ? LogicalClass::X : LogicalClass::I;
}

constexpr int16_t kNoWeight = -1;

// One decoded Monte Carlo sample. Syndromes are interned in the owning batch;
// w_comp/gap/log_ps are filled only when the run requested them.
struct SampleRecord {
    uint32_t key_id = 0;
    uint8_t x = 0;  // 1 iff residual class after correction is not identity
    LogicalClass decoder_class = LogicalClass::I;
    int16_t w_mwpm = kNoWeight;
    int16_t w_comp = kNoWeight;
    int16_t gap = kNoWeight;
    double log_ps = std::numeric_limits<double>::quiet_NaN();  // ln P(s)

    bool has_gap() const { return gap != kNoWeight; }
    bool has_log_ps() const { return !std::isnan(log_ps); }
};

struct SampleBatch {
    std::string code_id;
    double p = 0.0;
    uint64_t seed = 0;
    int syndrome_bits = 0;
    std::vector<std::string> keys;  // packed syndrome keys, insertion order
    std::unordered_map<std::string, uint32_t> key_index;
    std::vector<SampleRecord> records;
    std::vector<uint64_t> counts;  // per key id, rebuilt by finalize_counts

    uint32_t intern(const std::string& key);
    uint64_t size() const { return records.size(); }
    const std::string& key_of(const SampleRecord& r) const { return keys[r.key_id]; }
    void finalize_counts();
};

}  // namespace qsr
