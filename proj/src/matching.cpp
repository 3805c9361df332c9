#include "qsr/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "qsr/errors.hpp"

namespace qsr {

namespace {

// Maximum-weight matching in a general graph, the classic O(V^3) blossom
// implementation with doubled duals. Vertices are 1-indexed; ids above n are
// contracted blossoms.
class Blossom {
  public:
    explicit Blossom(int n) : n_(n), sz_(2 * n + 3) {
        g_.assign(sz_, std::vector<Edge>(sz_));
        for (int u = 0; u < sz_; ++u)
            for (int v = 0; v < sz_; ++v) g_[u][v] = {u, v, 0};
        lab_.assign(sz_, 0);
        match_.assign(sz_, 0);
        slack_.assign(sz_, 0);
        st_.assign(sz_, 0);
        pa_.assign(sz_, 0);
        S_.assign(sz_, 0);
        vis_.assign(sz_, 0);
        flower_.assign(sz_, {});
        flower_from_.assign(sz_, std::vector<int>(n + 1, 0));
    }

    void set_weight(int u, int v, int w) { g_[u][v].w = g_[v][u].w = w; }

    // Returns mate array (1-indexed, 0 = unmatched).
    std::vector<int> solve() {
        std::fill(match_.begin(), match_.end(), 0);
        n_x_ = n_;
        for (int u = 0; u <= n_; ++u) {
            st_[u] = u;
            flower_[u].clear();
        }
        int w_max = 0;
        for (int u = 1; u <= n_; ++u)
            for (int v = 1; v <= n_; ++v) {
                flower_from_[u][v] = (u == v ? u : 0);
                w_max = std::max(w_max, g_[u][v].w);
            }
        for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
        while (matching()) {
        }
        return match_;
    }

  private:
    struct Edge {
        int u, v, w;
    };

    static constexpr int kInf = std::numeric_limits<int>::max() / 2;

    int e_delta(const Edge& e) const { return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2; }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x])) slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (g_[u][x].w > 0 && st_[u] != x && S_[st_[u]] == 0) update_slack(u, x);
    }

    void q_push(int x) {
        if (x <= n_) {
            q_.push_back(x);
        } else {
            for (int f : flower_[x]) q_push(f);
        }
    }

    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int f : flower_[x]) set_st(f, b);
    }

    int get_pr(int b, int xr) {
        int pr = static_cast<int>(std::find(flower_[b].begin(), flower_[b].end(), xr) -
                                  flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return static_cast<int>(flower_[b].size()) - pr;
        }
        return pr;
    }

    void set_match(int u, int v) {
        match_[u] = g_[u][v].v;
        if (u > n_) {
            Edge e = g_[u][v];
            int xr = flower_from_[u][e.u];
            int pr = get_pr(u, xr);
            for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
        }
    }

    void augment(int u, int v) {
        while (true) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }

    int get_lca(int u, int v) {
        for (++lca_stamp_; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == lca_stamp_) return u;
            vis_[u] = lca_stamp_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        S_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            flower_[b].push_back(y = st_[match_[x]]);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
        for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x_; ++x)
                if (g_[b][x].w == 0 || e_delta(g_[xs][x]) < e_delta(g_[b][x])) {
                    g_[b][x] = g_[xs][x];
                    g_[x][b] = g_[x][xs];
                }
            for (int x = 1; x <= n_; ++x)
                if (flower_from_[xs][x]) flower_from_[b][x] = xs;
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        for (int f : flower_[b]) set_st(f, f);
        int xr = flower_from_[b][g_[b][pa_[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][i];
            int xns = flower_[b][i + 1];
            pa_[xs] = g_[xns][xs].u;
            S_[xs] = 1;
            S_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S_[xr] = 1;
        pa_[xr] = pa_[b];
        for (size_t i = pr + 1; i < flower_[b].size(); ++i) {
            int xs = flower_[b][i];
            S_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }

    bool on_found_edge(const Edge& e) {
        int u = st_[e.u], v = st_[e.v];
        if (S_[v] == -1) {
            pa_[v] = e.u;
            S_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            S_[nu] = 0;
            q_push(nu);
        } else if (S_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    bool matching() {
        std::fill(S_.begin(), S_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                S_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        while (true) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (S_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (g_[u][v].w > 0 && st_[u] != st_[v]) {
                        if (e_delta(g_[u][v]) == 0) {
                            if (on_found_edge(g_[u][v])) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            int d = kInf;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (S_[x] == -1)
                        d = std::min(d, e_delta(g_[slack_[x]][x]));
                    else if (S_[x] == 0)
                        d = std::min(d, e_delta(g_[slack_[x]][x]) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (S_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (S_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (S_[b] == 0)
                        lab_[b] += d * 2;
                    else if (S_[b] == 1)
                        lab_[b] -= d * 2;
                }
            q_.clear();
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g_[slack_[x]][x]) == 0)
                    if (on_found_edge(g_[slack_[x]][x])) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1 && lab_[b] == 0) expand_blossom(b);
        }
    }

    int n_;
    int sz_;
    int n_x_ = 0;
    int lca_stamp_ = 0;
    std::vector<std::vector<Edge>> g_;
    std::vector<int> lab_, match_, slack_, st_, pa_, S_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<std::vector<int>> flower_from_;
    std::deque<int> q_;
};

}  // namespace

std::vector<int> min_weight_perfect_matching(const std::vector<std::vector<int>>& w) {
    const int n = static_cast<int>(w.size());
    if (n == 0) return {};
    if (n % 2 != 0) throw DomainError("perfect matching needs an even vertex count");
    int w_max = 0;
    for (int u = 0; u < n; ++u) {
        if (static_cast<int>(w[u].size()) != n) throw DomainError("weight matrix must be square");
        for (int v = 0; v < n; ++v) {
            if (w[u][v] < 0) throw DomainError("weights must be non-negative");
            if (w[u][v] != w[v][u]) throw DomainError("weight matrix must be symmetric");
            w_max = std::max(w_max, w[u][v]);
        }
    }
    // Flip to maximization; the offset is large enough that maximum-weight
    // matchings are always perfect.
    const int offset = w_max * n + 1;
    Blossom solver(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (u != v) solver.set_weight(u + 1, v + 1, offset - w[u][v]);
    std::vector<int> mate1 = solver.solve();
    std::vector<int> mate(n);
    for (int u = 0; u < n; ++u) {
        if (mate1[u + 1] == 0) throw ContractError("blossom failed to produce a perfect matching");
        mate[u] = mate1[u + 1] - 1;
    }
    return mate;
}

}  // namespace qsr
