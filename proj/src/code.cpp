#include "qsr/code.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "qsr/errors.hpp"

namespace qsr {

std::string layout_name(Layout l) {
    return l == Layout::Rotated ? "rotated" : "unrotated";
}

Layout layout_from_name(const std::string& name) {
    if (name == "rotated") return Layout::Rotated;
    if (name == "unrotated") return Layout::Unrotated;
    throw DomainError("unknown layout '" + name + "'");
}

std::string CodeSpec::id() const {
    return layout_name(layout) + "-d" + std::to_string(distance);
}

BitVec CodeSpec::support_mask(const std::vector<int>& qubits) const {
    BitVec m(n);
    for (int q : qubits) m.flip(q);
    return m;
}

namespace {

void finish_column_order(CodeSpec& code) {
    code.column_order.resize(code.n);
    for (int i = 0; i < code.n; ++i) code.column_order[i] = i;
    std::stable_sort(code.column_order.begin(), code.column_order.end(), [&](int a, int b) {
        const auto& ga = code.geometry[a];
        const auto& gb = code.geometry[b];
        if (ga.col != gb.col) return ga.col < gb.col;
        return ga.row < gb.row;
    });
}

}  // namespace

CodeSpec build_unrotated(int d) {
    if (d < 2) throw DomainError("code distance must be >= 2");
    CodeSpec code;
    code.distance = d;
    code.layout = Layout::Unrotated;

    // Sites (r, c) on a (2d-1) x (2d-1) grid. Data qubits sit on sites with
    // r + c even, Z-checks on (odd r, even c), X-checks on (even r, odd c).
    const int w = 2 * d - 1;
    std::map<std::pair<int, int>, int> qubit_at;
    for (int r = 0; r < w; ++r)
        for (int c = 0; c < w; ++c)
            if ((r + c) % 2 == 0) {
                int idx = static_cast<int>(qubit_at.size());
                qubit_at[{r, c}] = idx;
                code.geometry.push_back({double(r), double(c), r == 0 || r == w - 1 || c == 0 || c == w - 1});
            }
    code.n = static_cast<int>(qubit_at.size());

    auto neighbors = [&](int r, int c) {
        std::vector<int> qs;
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int t = 0; t < 4; ++t) {
            auto it = qubit_at.find({r + dr[t], c + dc[t]});
            if (it != qubit_at.end()) qs.push_back(it->second);
        }
        std::sort(qs.begin(), qs.end());
        return qs;
    };

    for (int r = 0; r < w; ++r)
        for (int c = 0; c < w; ++c) {
            if (r % 2 == 1 && c % 2 == 0) code.z_checks.push_back(neighbors(r, c));
            if (r % 2 == 0 && c % 2 == 1) code.x_checks.push_back(neighbors(r, c));
        }

    // Logical X runs down the left column, logical Z along the top row.
    for (int r = 0; r < w; r += 2) code.x_logical.push_back(qubit_at.at({r, 0}));
    for (int c = 0; c < w; c += 2) code.z_logical.push_back(qubit_at.at({0, c}));

    finish_column_order(code);
    return code;
}

CodeSpec build_rotated(int d) {
    if (d < 2) throw DomainError("code distance must be >= 2");
    CodeSpec code;
    code.distance = d;
    code.layout = Layout::Rotated;
    code.n = d * d;

    auto qubit = [d](int r, int c) { return r * d + c; };
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            code.geometry.push_back({double(r), double(c), r == 0 || r == d - 1 || c == 0 || c == d - 1});

    // Plaquettes indexed by their top-left corner on the extended grid
    // r, c in [-1, d-1]; X type when r + c is even, Z when odd. Boundary rows
    // keep only X plaquettes, boundary columns only Z, corners none.
    for (int r = -1; r <= d - 1; ++r)
        for (int c = -1; c <= d - 1; ++c) {
            bool top = r == -1, bottom = r == d - 1;
            bool left = c == -1, right = c == d - 1;
            if ((top || bottom) && (left || right)) continue;
            bool is_x = ((r + c) % 2 + 2) % 2 == 0;
            if ((top || bottom) && !is_x) continue;
            if ((left || right) && is_x) continue;
            std::vector<int> qs;
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = 0; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < d && cc >= 0 && cc < d) qs.push_back(qubit(rr, cc));
                }
            std::sort(qs.begin(), qs.end());
            if (is_x)
                code.x_checks.push_back(qs);
            else
                code.z_checks.push_back(qs);
        }

    for (int r = 0; r < d; ++r) code.x_logical.push_back(qubit(r, 0));
    for (int c = 0; c < d; ++c) code.z_logical.push_back(qubit(0, c));

    finish_column_order(code);
    return code;
}

DetectionGraph detection_graph(const CodeSpec& code) {
    DetectionGraph g;
    g.num_checks = code.num_z_checks();
    g.boundary_node = g.num_checks;
    const int nodes = g.num_checks + 1;
    g.adj.resize(nodes);

    std::vector<std::vector<int>> checks_of(code.n);
    for (int z = 0; z < g.num_checks; ++z)
        for (int q : code.z_checks[z]) checks_of[q].push_back(z);

    for (int q = 0; q < code.n; ++q) {
        const auto& cs = checks_of[q];
        int a, b;
        if (cs.size() == 1) {
            a = cs[0];
            b = g.boundary_node;
        } else if (cs.size() == 2) {
            a = cs[0];
            b = cs[1];
        } else {
            throw ContractError("data qubit " + std::to_string(q) + " belongs to " +
                                std::to_string(cs.size()) + " Z-checks; expected 1 or 2");
        }
        g.edges.push_back({a, b, q});
        g.adj[a].push_back({b, q});
        g.adj[b].push_back({a, q});
    }

    g.dist.assign(nodes, std::vector<int>(nodes, -1));
    for (int s = 0; s < nodes; ++s) {
        auto& dist = g.dist[s];
        dist[s] = 0;
        std::queue<int> bfs;
        bfs.push(s);
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            for (auto [v, q] : g.adj[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    bfs.push(v);
                }
        }
    }
    return g;
}

bool ValidationReport::all_passed() const {
    for (const auto& e : entries)
        if (e.status == Status::Fail) return false;
    return true;
}

namespace {

void add_entry(ValidationReport& rep, const std::string& name, bool ok, const std::string& detail = "") {
    rep.entries.push_back({name, ok ? ValidationReport::Status::Pass : ValidationReport::Status::Fail, detail});
}

}  // namespace

ValidationReport validate_code(const CodeSpec& code) {
    ValidationReport rep;
    const int d = code.distance;

    if (code.layout == Layout::Unrotated) {
        add_entry(rep, "qubit count", code.n == d * d + (d - 1) * (d - 1),
                  "n=" + std::to_string(code.n));
        add_entry(rep, "z-check count", code.num_z_checks() == d * (d - 1),
                  std::to_string(code.num_z_checks()));
        add_entry(rep, "x-check count", static_cast<int>(code.x_checks.size()) == d * (d - 1));
    } else {
        add_entry(rep, "qubit count", code.n == d * d, "n=" + std::to_string(code.n));
        add_entry(rep, "stabilizer count",
                  code.num_z_checks() + static_cast<int>(code.x_checks.size()) == d * d - 1);
        if (d % 2 == 1)
            add_entry(rep, "z-check count", code.num_z_checks() == (d * d - 1) / 2);
        else
            add_entry(rep, "z-check count", code.num_z_checks() == d * d / 2);
    }

    std::vector<BitVec> zmasks, xmasks;
    for (const auto& zc : code.z_checks) zmasks.push_back(code.support_mask(zc));
    for (const auto& xc : code.x_checks) xmasks.push_back(code.support_mask(xc));
    BitVec xlog = code.support_mask(code.x_logical);
    BitVec zlog = code.support_mask(code.z_logical);

    bool commute = true;
    for (const auto& z : zmasks)
        for (const auto& x : xmasks)
            if (z.parity_and(x)) commute = false;
    add_entry(rep, "z/x check commutation", commute);

    bool xlog_commutes = true;
    for (const auto& z : zmasks)
        if (z.parity_and(xlog)) xlog_commutes = false;
    add_entry(rep, "x-logical commutes with z-checks", xlog_commutes);

    bool zlog_commutes = true;
    for (const auto& x : xmasks)
        if (x.parity_and(zlog)) zlog_commutes = false;
    add_entry(rep, "z-logical commutes with x-checks", zlog_commutes);

    add_entry(rep, "logical anticommutation", xlog.parity_and(zlog));

    // Each qubit must sit on one or two Z-checks (matching-graph requirement).
    {
        std::vector<int> deg(code.n, 0);
        for (const auto& zc : code.z_checks)
            for (int q : zc) ++deg[q];
        bool ok = true;
        for (int q = 0; q < code.n; ++q)
            if (deg[q] < 1 || deg[q] > 2) ok = false;
        add_entry(rep, "z-check qubit membership in {1,2}", ok);
    }

    // Brute-force distance: minimum weight over the coset
    // { x_logical XOR g : g in <x_checks> }, feasible only for small codes.
    if (code.n <= 26 && code.x_checks.size() <= 22) {
        int best = code.n + 1;
        const uint64_t combos = uint64_t{1} << code.x_checks.size();
        for (uint64_t mask = 0; mask < combos; ++mask) {
            BitVec e = xlog;
            for (size_t j = 0; j < code.x_checks.size(); ++j)
                if ((mask >> j) & 1) e.xor_with(xmasks[j]);
            best = std::min(best, e.popcount());
        }
        add_entry(rep, "code distance", best == d,
                  "min logical-coset weight " + std::to_string(best));
    } else {
        rep.entries.push_back({"code distance", ValidationReport::Status::Skipped,
                               "n > brute-force budget"});
    }

    return rep;
}

}  // namespace qsr
