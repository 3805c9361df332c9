#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "qsr/code.hpp"
#include "qsr/noise.hpp"

namespace qsr {

// Column-by-column dynamic program over the data qubits. The frontier state
// holds the parities of Z-checks straddling the cut plus one running
// logical-class bit, so the same schedule yields exact per-class minimum
// weights (min-sum) and exact coset probabilities (sum-product).
//
// The schedule depends only on the code; syndromes enter when frontier checks
// retire. State count is 2^(frontier+1), bounded by max_state_bits.
class Trellis {
  public:
    explicit Trellis(const CodeSpec& code, int max_state_bits = 22);

    // {min weight in class I, min weight in class X} for patterns with the
    // given syndrome, relative to the zero correction.
    std::array<int, 2> min_weights(const Syndrome& s) const;

    // {ln P(s, I), ln P(s, X)} under i.i.d. bit-flip noise, 0 <= p < 1.
    std::array<double, 2> coset_log_probs(const Syndrome& s, double p) const;

    // Visits every syndrome once with its exact coset log-probabilities.
    // Enumeration order is deterministic. 2^m leaves; budget-checked.
    using SyndromeVisitor = std::function<void(const Syndrome&, double log_p_i, double log_p_x)>;
    void for_each_syndrome(double p, const SyndromeVisitor& fn) const;

    int num_checks() const { return m_; }
    int num_qubits() const { return n_; }
    int max_width() const { return max_width_; }

  private:
    struct Op {
        enum class Kind : uint8_t { Alloc, Flip, Retire };
        Kind kind;
        uint32_t mask = 0;  // Flip: state bits toggled by this qubit
        int check = -1;     // Retire: z-check index
        int bit = -1;       // Retire: frontier bit position at that moment
    };

    int n_ = 0;
    int m_ = 0;
    int max_width_ = 1;
    std::vector<Op> ops_;
};

}  // namespace qsr
