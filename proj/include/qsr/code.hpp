#pragma once

#include <string>
#include <vector>

#include "qsr/bitvec.hpp"

namespace qsr {

enum class Layout { Rotated, Unrotated };

std::string layout_name(Layout l);
Layout layout_from_name(const std::string& name);

struct QubitGeometry {
    double row = 0;
    double col = 0;
    bool on_boundary = false;
};

// A surface-code instance. Z-checks detect X errors; all decoding in this
// artifact is on the X side, X-checks enter only validation and residual
// tests. Immutable after construction.
struct CodeSpec {
    int distance = 0;
    Layout layout = Layout::Rotated;
    int n = 0;  // data qubits
    int k = 1;  // logical qubits
    std::vector<std::vector<int>> z_checks;
    std::vector<std::vector<int>> x_checks;
    std::vector<int> x_logical;
    std::vector<int> z_logical;
    std::vector<QubitGeometry> geometry;
    std::vector<int> column_order;  // qubits ordered by lattice column for the trellis DP

    std::string id() const;
    int num_z_checks() const { return static_cast<int>(z_checks.size()); }

    // Support masks, built once on demand by helpers below.
    BitVec support_mask(const std::vector<int>& qubits) const;
};

// Unrotated (planar) surface code: n = d^2 + (d-1)^2, d(d-1) Z-checks.
CodeSpec build_unrotated(int d);

// Rotated surface code on a d x d grid, d^2 - 1 stabilizers in total.
// Odd d uses the standard layout; even d the checkerboard generalization
// (asymmetric X/Z split).
CodeSpec build_rotated(int d);

// Matching graph for MWPM: one node per Z-check plus a single merged boundary
// node, one unit-weight edge per data qubit. All-pairs distances by BFS.
struct DetectionGraph {
    int num_checks = 0;
    int boundary_node = 0;  // == num_checks
    struct Edge {
        int a;
        int b;
        int qubit;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;  // node -> (neighbor, qubit)
    std::vector<std::vector<int>> dist;                 // (num_checks+1)^2
};

DetectionGraph detection_graph(const CodeSpec& code);

struct ValidationReport {
    enum class Status { Pass, Fail, Skipped };
    struct Entry {
        std::string name;
        Status status;
        std::string detail;
    };
    std::vector<Entry> entries;
    bool all_passed() const;  // Skipped entries do not count as failures
};

// Checks every CodeSpec invariant; for small codes (n <= 26) also verifies the
// code distance by enumerating the logical coset, otherwise flags the distance
// check as skipped.
ValidationReport validate_code(const CodeSpec& code);

}  // namespace qsr
