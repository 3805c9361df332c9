#include "qsr/exact_dist.hpp"

#include <algorithm>
#include <cmath>

#include "qsr/accum.hpp"
#include "qsr/errors.hpp"

namespace qsr {

std::optional<uint32_t> JointDistribution::find(const std::string& key) const {
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

double JointDistribution::total_mass() const {
    KahanSum s;
    for (const auto& pr : probs) {
        s.add(pr[0]);
        s.add(pr[1]);
    }
    return s.value();
}

JointDistribution enumerate_joint(const CodeSpec& code, NoiseModel noise) {
    if (code.n > 26)
        throw ResourceError("enumeration budget is 2^26 patterns, code has n=" +
                            std::to_string(code.n));
    if (noise.p < 0.0 || noise.p > 1.0) throw DomainError("flip probability must be in [0, 1]");
    if (code.num_z_checks() > 22) throw ResourceError("enumeration table budget is 2^22 syndromes");

    const int n = code.n;
    const int m = code.num_z_checks();
    const double p = noise.p;

    // Syndrome mask per qubit, class parity per qubit.
    std::vector<uint32_t> syn_mask(n, 0);
    for (int j = 0; j < m; ++j)
        for (int q : code.z_checks[j]) syn_mask[q] |= uint32_t{1} << j;
    BitVec zlog = code.support_mask(code.z_logical);

    std::vector<double> pw(n + 1);
    for (int w = 0; w <= n; ++w)
        pw[w] = std::pow(p, w) * std::pow(1.0 - p, n - w);

    // Dense accumulation over syndromes, Kahan-compensated; Gray-code walk
    // flips one qubit per step.
    std::vector<std::array<double, 2>> acc(size_t{1} << m, {0.0, 0.0});
    std::vector<std::array<double, 2>> comp(size_t{1} << m, {0.0, 0.0});
    uint32_t syn = 0;
    int weight = 0;
    int cls = 0;
    const uint64_t total = uint64_t{1} << n;
    for (uint64_t i = 0;; ++i) {
        double x = pw[weight];
        auto& a = acc[syn][cls];
        auto& c = comp[syn][cls];
        double y = x - c;
        double t2 = a + y;
        c = (t2 - a) - y;
        a = t2;
        if (i + 1 == total) break;
        int q = std::countr_zero(i + 1);  // bit flipped between gray(i) and gray(i+1)
        uint64_t bit = uint64_t{1} << q;
        uint64_t gray_next = (i + 1) ^ ((i + 1) >> 1);
        bool now_set = gray_next & bit;
        weight += now_set ? 1 : -1;
        syn ^= syn_mask[q];
        if (zlog.get(q)) cls ^= 1;
    }

    JointDistribution joint;
    joint.code_id = code.id();
    joint.p = p;
    joint.k = code.k;
    joint.syndrome_bits = m;
    joint.method = "enumeration";
    for (uint32_t s = 0; s < (uint32_t{1} << m); ++s) {
        if (acc[s][0] == 0.0 && acc[s][1] == 0.0) continue;
        Syndrome sv(m);
        for (int j = 0; j < m; ++j)
            if ((s >> j) & 1) sv.flip(j);
        uint32_t id = static_cast<uint32_t>(joint.keys.size());
        joint.keys.push_back(sv.packed_key());
        joint.index.emplace(joint.keys.back(), id);
        joint.probs.push_back(acc[s]);
    }
    return joint;
}

JointDistribution trellis_joint(const CodeSpec& code, NoiseModel noise, int max_state_bits) {
    if (code.num_z_checks() > 22)
        throw ResourceError("trellis joint table budget is 2^22 syndromes");
    Trellis trellis(code, max_state_bits);
    JointDistribution joint;
    joint.code_id = code.id();
    joint.p = noise.p;
    joint.k = code.k;
    joint.syndrome_bits = code.num_z_checks();
    joint.method = "trellis";
    trellis.for_each_syndrome(noise.p, [&](const Syndrome& s, double lpi, double lpx) {
        double pi = std::exp(lpi);
        double px = std::exp(lpx);
        if (pi == 0.0 && px == 0.0) return;
        uint32_t id = static_cast<uint32_t>(joint.keys.size());
        joint.keys.push_back(s.packed_key());
        joint.index.emplace(joint.keys.back(), id);
        joint.probs.push_back({pi, px});
    });
    return joint;
}

std::array<double, 2> coset_probability(const Trellis& trellis, NoiseModel noise, const Syndrome& s) {
    auto lp = trellis.coset_log_probs(s, noise.p);
    return {std::exp(lp[0]), std::exp(lp[1])};
}

PowerDistribution power_distribution(const JointDistribution& joint, double alpha) {
    if (alpha < 0.0) throw DomainError("alpha must be >= 0");
    PowerDistribution out;
    out.alpha = alpha;
    out.q.resize(joint.keys.size());
    LogSumExp z;
    std::vector<double> logp(joint.keys.size());
    for (size_t i = 0; i < joint.keys.size(); ++i) {
        logp[i] = std::log(joint.syndrome_prob(static_cast<uint32_t>(i)));
        z.add(alpha * logp[i]);
    }
    out.log_z_alpha = z.result();
    out.z_alpha = std::exp(out.log_z_alpha);
    for (size_t i = 0; i < joint.keys.size(); ++i)
        out.q[i] = std::exp(alpha * logp[i] - out.log_z_alpha);
    return out;
}

namespace {

double rci_from_sums(double alpha, double log_a, double log_b, int k, bool raw_eq2) {
    const double log2e = 1.4426950408889634;
    double shifted = (raw_eq2 ? 0.0 : k) + (log_a - log_b) * log2e / (1.0 - alpha);
    return shifted;
}

}  // namespace

RciValue rci(const JointDistribution& joint, double alpha, bool raw_eq2) {
    if (alpha < 0.0) throw DomainError("alpha must be >= 0");
    RciValue out;
    out.alpha = alpha;
    if (std::abs(alpha - 1.0) < 1e-12) {
        // von Neumann limit: k - sum_s P(s) H2(P(l|s)).
        KahanSum acc;
        for (size_t i = 0; i < joint.keys.size(); ++i) {
            double ps = joint.syndrome_prob(static_cast<uint32_t>(i));
            for (int l = 0; l < 2; ++l) {
                double psl = joint.probs[i][l];
                if (psl > 0.0) acc.add(psl * std::log2(psl / ps));
            }
        }
        out.bits = (raw_eq2 ? 0.0 : joint.k) + acc.value();
        return out;
    }
    LogSumExp a, b;
    for (size_t i = 0; i < joint.keys.size(); ++i) {
        double lps = std::log(joint.syndrome_prob(static_cast<uint32_t>(i)));
        a.add(alpha * lps);
        for (int l = 0; l < 2; ++l) {
            double psl = joint.probs[i][l];
            if (psl > 0.0) b.add(alpha * std::log(psl));
        }
    }
    out.bits = rci_from_sums(alpha, a.result(), b.result(), joint.k, raw_eq2);
    return out;
}

RciValue rci_trellis(const CodeSpec& code, NoiseModel noise, double alpha, bool raw_eq2,
                     int max_state_bits) {
    if (alpha < 0.0) throw DomainError("alpha must be >= 0");
    Trellis trellis(code, max_state_bits);
    RciValue out;
    out.alpha = alpha;
    if (std::abs(alpha - 1.0) < 1e-12) {
        KahanSum acc;
        trellis.for_each_syndrome(noise.p, [&](const Syndrome&, double lpi, double lpx) {
            double lps = log_add_exp(lpi, lpx);
            double pi = std::exp(lpi), px = std::exp(lpx);
            const double log2e = 1.4426950408889634;
            if (pi > 0.0) acc.add(pi * (lpi - lps) * log2e);
            if (px > 0.0) acc.add(px * (lpx - lps) * log2e);
        });
        out.bits = (raw_eq2 ? 0.0 : code.k) + acc.value();
        return out;
    }
    LogSumExp a, b;
    trellis.for_each_syndrome(noise.p, [&](const Syndrome&, double lpi, double lpx) {
        a.add(alpha * log_add_exp(lpi, lpx));
        b.add(alpha * lpi);
        b.add(alpha * lpx);
    });
    out.bits = rci_from_sums(alpha, a.result(), b.result(), code.k, raw_eq2);
    return out;
}

double exact_resampled_failure(const JointDistribution& joint, double alpha, const ClassMap& class_map) {
    if (alpha < 0.0) throw DomainError("alpha must be >= 0");
    // Normalize the P^alpha weights by their maximum before exponentiation.
    std::vector<double> logp(joint.keys.size());
    double max_lw = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < joint.keys.size(); ++i) {
        logp[i] = alpha * std::log(joint.syndrome_prob(static_cast<uint32_t>(i)));
        max_lw = std::max(max_lw, logp[i]);
    }
    KahanSum num, den;
    for (size_t i = 0; i < joint.keys.size(); ++i) {
        const Syndrome s = Syndrome::from_packed(joint.keys[i], joint.syndrome_bits);
        auto cls = class_map(s);
        if (!cls)
            throw ContractError("class map does not cover syndrome " + s.hex());
        double w = std::exp(logp[i] - max_lw);
        double ps = joint.syndrome_prob(static_cast<uint32_t>(i));
        double fail = 1.0 - joint.probs[i][static_cast<int>(*cls)] / ps;
        num.add(w * fail);
        den.add(w);
    }
    return num.value() / den.value();
}

ClassMap mld_class_map(const JointDistribution& joint) {
    return [&joint](const Syndrome& s) -> std::optional<LogicalClass> {
        auto id = joint.find(s.packed_key());
        if (!id) return std::nullopt;
        const auto& pr = joint.probs[*id];
        return pr[1] > pr[0] ? LogicalClass::X : LogicalClass::I;
    };
}

}  // namespace qsr
