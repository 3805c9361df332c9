#pragma once

#include <array>

#include "qsr/code.hpp"
#include "qsr/noise.hpp"
#include "qsr/trellis.hpp"

namespace qsr {

struct DecodeResult {
    ErrorPattern correction;
    int weight = 0;  // |support(correction)|
    LogicalClass cls = LogicalClass::I;
};

// Exact MWPM via blossom matching on the defect graph: complete graph over
// defects plus one virtual boundary copy per defect (boundary copies are
// mutually connected at zero weight). The correction XORs shortest paths
// between matched nodes.
class MwpmDecoder {
  public:
    MwpmDecoder(const CodeSpec& code, const DetectionGraph& graph);
    DecodeResult decode(const Syndrome& s) const;

  private:
    const CodeSpec& code_;
    const DetectionGraph& graph_;
    BitVec z_logical_mask_;
};

// Exact minimum |support(e)| over patterns e with syndrome s and the given
// logical class (relative to the zero correction).
int min_weight_in_class(const Trellis& trellis, const Syndrome& s, LogicalClass l);

struct GapResult {
    int gap = 0;              // w_comp - w_best >= 0
    LogicalClass best_class;  // class achieving the minimum (ties -> I, gap 0)
    int w_best = 0;
    int w_comp = 0;
};

GapResult complementary_gap(const Trellis& trellis, const Syndrome& s);

// Maximum-likelihood class decision from exact coset probabilities; exact
// probability ties break towards I.
LogicalClass decode_mld(const Trellis& trellis, NoiseModel noise, const Syndrome& s);

}  // namespace qsr
