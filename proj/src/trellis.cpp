#include "qsr/trellis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsr/errors.hpp"

namespace qsr {

namespace {

constexpr int32_t kUnreachable = std::numeric_limits<int32_t>::max() / 2;

inline uint32_t insert_bit(uint32_t m, int bit, uint32_t value) {
    uint32_t low = m & ((uint32_t{1} << bit) - 1);
    uint32_t high = m >> bit;
    return low | (value << bit) | (high << (bit + 1));
}

}  // namespace

Trellis::Trellis(const CodeSpec& code, int max_state_bits) {
    n_ = code.n;
    m_ = code.num_z_checks();

    std::vector<int> pos_of(n_);
    for (int t = 0; t < n_; ++t) pos_of[code.column_order[t]] = t;

    std::vector<std::vector<int>> checks_of(n_);
    std::vector<int> first(m_, n_), last(m_, -1);
    for (int c = 0; c < m_; ++c)
        for (int q : code.z_checks[c]) {
            checks_of[q].push_back(c);
            first[c] = std::min(first[c], pos_of[q]);
            last[c] = std::max(last[c], pos_of[q]);
        }

    BitVec zlog = code.support_mask(code.z_logical);

    std::vector<int> active;  // check id per frontier bit; bit position = index + 1
    auto bit_of = [&](int check) {
        for (size_t i = 0; i < active.size(); ++i)
            if (active[i] == check) return static_cast<int>(i) + 1;
        throw ContractError("trellis schedule: check not active");
    };

    for (int t = 0; t < n_; ++t) {
        int q = code.column_order[t];
        for (int c : checks_of[q])
            if (first[c] == t) {
                active.push_back(c);
                ops_.push_back({Op::Kind::Alloc, 0, c, -1});
            }
        max_width_ = std::max(max_width_, static_cast<int>(active.size()) + 1);
        if (max_width_ > max_state_bits)
            throw ResourceError("trellis frontier needs " + std::to_string(max_width_) +
                                " state bits, budget is " + std::to_string(max_state_bits));

        Op flip{Op::Kind::Flip, 0, -1, -1};
        if (zlog.get(q)) flip.mask |= 1u;
        for (int c : checks_of[q]) flip.mask |= uint32_t{1} << bit_of(c);
        ops_.push_back(flip);

        // Retire highest bits first so recorded positions stay valid.
        std::vector<int> done;
        for (int c : checks_of[q])
            if (last[c] == t) done.push_back(c);
        std::sort(done.begin(), done.end(), [&](int a, int b) { return bit_of(a) > bit_of(b); });
        for (int c : done) {
            int bit = bit_of(c);
            ops_.push_back({Op::Kind::Retire, 0, c, bit});
            active.erase(active.begin() + (bit - 1));
        }
    }
    if (!active.empty()) throw ContractError("trellis schedule left active checks");
}

std::array<int, 2> Trellis::min_weights(const Syndrome& s) const {
    if (s.size() != m_) throw DomainError("syndrome length does not match check count");
    std::vector<int32_t> v(size_t{1} << max_width_, kUnreachable);
    std::vector<int32_t> scratch(v.size());
    int width = 1;
    v[0] = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
            case Op::Kind::Alloc: {
                size_t old = size_t{1} << width;
                ++width;
                std::fill(v.begin() + old, v.begin() + (old << 1), kUnreachable);
                break;
            }
            case Op::Kind::Flip: {
                size_t size = size_t{1} << width;
                uint32_t mask = op.mask;
                for (uint32_t m = 0; m < size; ++m) {
                    uint32_t partner = m ^ mask;
                    if (partner < m) continue;
                    int32_t a = v[m], b = v[partner];
                    v[m] = std::min(a, b + 1);
                    v[partner] = std::min(b, a + 1);
                }
                break;
            }
            case Op::Kind::Retire: {
                uint32_t keep = s.get(op.check) ? 1u : 0u;
                --width;
                size_t size = size_t{1} << width;
                for (uint32_t m = 0; m < size; ++m)
                    scratch[m] = v[insert_bit(m, op.bit, keep)];
                std::copy(scratch.begin(), scratch.begin() + size, v.begin());
                break;
            }
        }
    }
    return {v[0] >= kUnreachable ? -1 : v[0], v[1] >= kUnreachable ? -1 : v[1]};
}

std::array<double, 2> Trellis::coset_log_probs(const Syndrome& s, double p) const {
    if (s.size() != m_) throw DomainError("syndrome length does not match check count");
    if (p < 0.0 || p >= 1.0) throw DomainError("coset probabilities need 0 <= p < 1");
    const double t = p / (1.0 - p);
    std::vector<double> v(size_t{1} << max_width_, 0.0);
    std::vector<double> scratch(v.size());
    int width = 1;
    double log_comp = 0.0;
    int flips = 0;
    v[0] = 1.0;
    for (const Op& op : ops_) {
        switch (op.kind) {
            case Op::Kind::Alloc: {
                size_t old = size_t{1} << width;
                ++width;
                std::fill(v.begin() + old, v.begin() + (old << 1), 0.0);
                break;
            }
            case Op::Kind::Flip: {
                size_t size = size_t{1} << width;
                uint32_t mask = op.mask;
                for (uint32_t m = 0; m < size; ++m) {
                    uint32_t partner = m ^ mask;
                    if (partner < m) continue;
                    double a = v[m], b = v[partner];
                    v[m] = a + t * b;
                    v[partner] = b + t * a;
                }
                if (++flips % 32 == 0) {
                    double mx = 0.0;
                    for (uint32_t m = 0; m < size; ++m) mx = std::max(mx, v[m]);
                    if (mx > 0.0 && (mx < 1e-120 || mx > 1e120)) {
                        double k = 1.0 / mx;
                        for (uint32_t m = 0; m < size; ++m) v[m] *= k;
                        log_comp += std::log(mx);
                    }
                }
                break;
            }
            case Op::Kind::Retire: {
                uint32_t keep = s.get(op.check) ? 1u : 0u;
                --width;
                size_t size = size_t{1} << width;
                for (uint32_t m = 0; m < size; ++m)
                    scratch[m] = v[insert_bit(m, op.bit, keep)];
                std::copy(scratch.begin(), scratch.begin() + size, v.begin());
                break;
            }
        }
    }
    const double base = n_ * std::log1p(-p) + log_comp;
    auto fin = [&](double g) {
        return g > 0.0 ? base + std::log(g) : -std::numeric_limits<double>::infinity();
    };
    return {fin(v[0]), fin(v[1])};
}

void Trellis::for_each_syndrome(double p, const SyndromeVisitor& fn) const {
    if (p < 0.0 || p >= 1.0) throw DomainError("coset probabilities need 0 <= p < 1");
    if (m_ > 26) throw ResourceError("syndrome enumeration budget is 2^26");
    const double t = p / (1.0 - p);
    const double base = n_ * std::log1p(-p);
    const double neg_inf = -std::numeric_limits<double>::infinity();

    // One state buffer per branching depth; sized once.
    std::vector<std::vector<double>> pool(m_ + 1, std::vector<double>(size_t{1} << max_width_));
    Syndrome syn(m_);

    struct Frame {
        size_t op;
        int width;
        int depth;
        double log_comp;
    };

    std::function<void(Frame, std::vector<double>&)> walk = [&](Frame f, std::vector<double>& v) {
        while (f.op < ops_.size()) {
            const Op& op = ops_[f.op];
            if (op.kind == Op::Kind::Alloc) {
                size_t old = size_t{1} << f.width;
                ++f.width;
                std::fill(v.begin() + old, v.begin() + (old << 1), 0.0);
                ++f.op;
            } else if (op.kind == Op::Kind::Flip) {
                size_t size = size_t{1} << f.width;
                for (uint32_t m = 0; m < size; ++m) {
                    uint32_t partner = m ^ op.mask;
                    if (partner < m) continue;
                    double a = v[m], b = v[partner];
                    v[m] = a + t * b;
                    v[partner] = b + t * a;
                }
                double mx = 0.0;
                for (uint32_t m = 0; m < size; ++m) mx = std::max(mx, v[m]);
                if (mx > 0.0 && (mx < 1e-60 || mx > 1e60)) {
                    double k = 1.0 / mx;
                    for (uint32_t m = 0; m < size; ++m) v[m] *= k;
                    f.log_comp += std::log(mx);
                }
                ++f.op;
            } else {
                int width = f.width - 1;
                size_t size = size_t{1} << width;
                std::vector<double>& child = pool[f.depth];
                for (uint32_t keep = 0; keep < 2; ++keep) {
                    for (uint32_t m = 0; m < size; ++m)
                        child[m] = v[insert_bit(m, op.bit, keep)];
                    syn.set(op.check, keep != 0);
                    walk({f.op + 1, width, f.depth + 1, f.log_comp}, child);
                }
                syn.set(op.check, false);
                return;
            }
        }
        double off = base + f.log_comp;
        fn(syn, v[0] > 0.0 ? off + std::log(v[0]) : neg_inf,
           v[1] > 0.0 ? off + std::log(v[1]) : neg_inf);
    };

    std::vector<double> root(size_t{1} << max_width_, 0.0);
    root[0] = 1.0;
    walk({0, 1, 0, 0.0}, root);
}

}  // namespace qsr
