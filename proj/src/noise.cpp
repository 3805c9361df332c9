#include "qsr/noise.hpp"

#include "qsr/errors.hpp"
#include "qsr/rng.hpp"

namespace qsr {

ErrorPattern sample_error(const CodeSpec& code, NoiseModel noise, std::mt19937_64& rng) {
    if (noise.p < 0.0 || noise.p > 1.0) throw DomainError("flip probability must be in [0, 1]");
    ErrorPattern e(code.n);
    for (int q = 0; q < code.n; ++q)
        if (uniform01(rng) < noise.p) e.flip(q);
    return e;
}

Syndrome syndrome_of(const CodeSpec& code, const ErrorPattern& e) {
    if (e.size() != code.n)
        throw DomainError("error pattern has " + std::to_string(e.size()) +
                          " bits, code has " + std::to_string(code.n) + " qubits");
    Syndrome s(code.num_z_checks());
    for (int j = 0; j < code.num_z_checks(); ++j) {
        int parity = 0;
        for (int q : code.z_checks[j]) parity ^= e.get(q);
        if (parity) s.flip(j);
    }
    return s;
}

LogicalClass residual_class(const CodeSpec& code, const ErrorPattern& e, const ErrorPattern& correction) {
    BitVec residual = e;
    residual.xor_with(correction);
    if (syndrome_of(code, residual).any())
        throw ContractError("residual_class: correction does not reproduce the syndrome");
    return class_of_residual(residual, code.support_mask(code.z_logical));
}

uint32_t SampleBatch::intern(const std::string& key) {
    auto it = key_index.find(key);
    if (it != key_index.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(keys.size());
    keys.push_back(key);
    key_index.emplace(key, id);
    return id;
}

void SampleBatch::finalize_counts() {
    counts.assign(keys.size(), 0);
    for (const auto& r : records) ++counts[r.key_id];
}

}  // namespace qsr
