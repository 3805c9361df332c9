#include "qsr/decoders.hpp"

#include <vector>

#include "qsr/errors.hpp"
#include "qsr/matching.hpp"

namespace qsr {

MwpmDecoder::MwpmDecoder(const CodeSpec& code, const DetectionGraph& graph)
    : code_(code), graph_(graph), z_logical_mask_(code.support_mask(code.z_logical)) {}

DecodeResult MwpmDecoder::decode(const Syndrome& s) const {
    if (s.size() != code_.num_z_checks())
        throw DomainError("syndrome length does not match check count");

    std::vector<int> defects;
    for (int j = 0; j < s.size(); ++j)
        if (s.get(j)) defects.push_back(j);

    DecodeResult result;
    result.correction = ErrorPattern(code_.n);
    if (defects.empty()) return result;

    const int k = static_cast<int>(defects.size());
    const int bnd = graph_.boundary_node;

    // Nodes 0..k-1: defects; k..2k-1: boundary copies.
    std::vector<std::vector<int>> w(2 * k, std::vector<int>(2 * k, 0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (i != j) w[i][j] = graph_.dist[defects[i]][defects[j]];
        for (int j = 0; j < k; ++j) {
            w[i][k + j] = w[k + j][i] = graph_.dist[defects[i]][bnd];
        }
    }
    std::vector<int> mate = min_weight_perfect_matching(w);

    // Walk a shortest path greedily along decreasing distance, XORing qubits.
    auto apply_path = [&](int from, int to) {
        int u = from;
        while (u != to) {
            for (auto [v, q] : graph_.adj[u])
                if (graph_.dist[v][to] == graph_.dist[u][to] - 1) {
                    result.correction.flip(q);
                    u = v;
                    break;
                }
        }
    };

    for (int i = 0; i < k; ++i) {
        int j = mate[i];
        if (j > i && j < k) apply_path(defects[i], defects[j]);
        if (j >= k) apply_path(defects[i], bnd);
    }

    result.weight = result.correction.popcount();
    result.cls = class_of_residual(result.correction, z_logical_mask_);
    return result;
}

int min_weight_in_class(const Trellis& trellis, const Syndrome& s, LogicalClass l) {
    auto w = trellis.min_weights(s);
    return w[static_cast<int>(l)];
}

GapResult complementary_gap(const Trellis& trellis, const Syndrome& s) {
    auto w = trellis.min_weights(s);
    GapResult r;
    if (w[0] <= w[1]) {
        r.best_class = LogicalClass::I;
        r.w_best = w[0];
        r.w_comp = w[1];
    } else {
        r.best_class = LogicalClass::X;
        r.w_best = w[1];
        r.w_comp = w[0];
    }
    r.gap = r.w_comp - r.w_best;
    return r;
}

LogicalClass decode_mld(const Trellis& trellis, NoiseModel noise, const Syndrome& s) {
    auto lp = trellis.coset_log_probs(s, noise.p);
    return lp[1] > lp[0] ? LogicalClass::X : LogicalClass::I;
}

}  // namespace qsr
