#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qsr/code.hpp"
#include "qsr/noise.hpp"
#include "qsr/trellis.hpp"

namespace qsr {

// Exact joint table P(s, l) over all syndromes with positive mass.
struct JointDistribution {
    std::string code_id;
    double p = 0.0;
    int k = 1;
    int syndrome_bits = 0;
    std::vector<std::string> keys;  // packed syndrome keys, deterministic order
    std::unordered_map<std::string, uint32_t> index;
    std::vector<std::array<double, 2>> probs;  // {P(s,I), P(s,X)} aligned with keys
    std::string method;                        // "enumeration" | "trellis"

    double syndrome_prob(uint32_t id) const { return probs[id][0] + probs[id][1]; }
    std::optional<uint32_t> find(const std::string& key) const;
    double total_mass() const;
};

// Full 2^n enumeration of error patterns; the base oracle. n <= 26.
JointDistribution enumerate_joint(const CodeSpec& code, NoiseModel noise);

// Same table via the sum-product trellis; feasible up to ~22 checks.
JointDistribution trellis_joint(const CodeSpec& code, NoiseModel noise, int max_state_bits = 22);

// Exact {P(s,I), P(s,X)} for one syndrome.
std::array<double, 2> coset_probability(const Trellis& trellis, NoiseModel noise, const Syndrome& s);

// Q_alpha(s) = P^alpha(s) / Z_alpha, aligned with the joint's key order.
struct PowerDistribution {
    double alpha = 1.0;
    std::vector<double> q;
    double z_alpha = 0.0;
    double log_z_alpha = 0.0;
};

PowerDistribution power_distribution(const JointDistribution& joint, double alpha);

struct RciValue {
    double alpha = 1.0;
    double bits = 0.0;  // base-2; k at p=0, 0 at p=0.5
};

// Renyi coherent information from the exact table. raw_eq2 drops the +k
// shift, anchoring the p=0 value at 0 instead of k.
RciValue rci(const JointDistribution& joint, double alpha, bool raw_eq2 = false);

// Streaming variant over the trellis syndrome enumeration; avoids building
// the table, so it reaches larger codes (budget 2^26 syndromes).
RciValue rci_trellis(const CodeSpec& code, NoiseModel noise, double alpha, bool raw_eq2 = false,
                     int max_state_bits = 22);

// N -> infinity limit of the resampled logical error rate:
//   sum_s Q_alpha(s) (1 - P(class_map(s) | s)).
// class_map must cover every supported syndrome.
using ClassMap = std::function<std::optional<LogicalClass>(const Syndrome&)>;
double exact_resampled_failure(const JointDistribution& joint, double alpha, const ClassMap& class_map);

// Class map given by the maximum-likelihood decision of the table itself.
ClassMap mld_class_map(const JointDistribution& joint);

}  // namespace qsr
