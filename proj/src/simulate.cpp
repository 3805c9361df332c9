#include "qsr/simulate.hpp"

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "qsr/accum.hpp"
#include "qsr/decoders.hpp"
#include "qsr/errors.hpp"
#include "qsr/parallel.hpp"
#include "qsr/rng.hpp"
#include "qsr/trellis.hpp"

namespace qsr {

DecoderConfig::Method decoder_method_from_name(const std::string& name) {
    if (name == "mwpm") return DecoderConfig::Method::Mwpm;
    if (name == "mld") return DecoderConfig::Method::Mld;
    throw DomainError("unknown decoder '" + name + "'");
}

std::string decoder_method_name(DecoderConfig::Method m) {
    return m == DecoderConfig::Method::Mwpm ? "mwpm" : "mld";
}

namespace {

struct DecodeCacheEntry {
    LogicalClass decoder_class;
    int16_t w_mwpm = kNoWeight;
    int16_t w_comp = kNoWeight;
    int16_t gap = kNoWeight;
    double log_ps = std::numeric_limits<double>::quiet_NaN();
};

constexpr size_t kCacheCap = size_t{1} << 21;

}  // namespace

SampleBatch run_batch(const CodeSpec& code, NoiseModel noise, uint64_t n_samples,
                      const DecoderConfig& cfg, uint64_t seed) {
    if (n_samples < 1) throw DomainError("batch size must be >= 1");
    if (noise.p < 0.0 || noise.p > 1.0) throw DomainError("flip probability must be in [0, 1]");

    const int n = code.n;
    const int m = code.num_z_checks();
    const bool need_trellis =
        cfg.method == DecoderConfig::Method::Mld || cfg.with_gap || cfg.with_exact_prob;

    DetectionGraph graph;
    std::unique_ptr<MwpmDecoder> mwpm;
    if (cfg.method == DecoderConfig::Method::Mwpm) {
        graph = detection_graph(code);
        mwpm = std::make_unique<MwpmDecoder>(code, graph);
    }
    std::unique_ptr<Trellis> trellis;
    if (need_trellis) trellis = std::make_unique<Trellis>(code);

    std::vector<Syndrome> qubit_syndrome(n, Syndrome(m));
    for (int j = 0; j < m; ++j)
        for (int q : code.z_checks[j]) qubit_syndrome[q].flip(j);
    const BitVec zlog = code.support_mask(code.z_logical);

    SampleBatch batch;
    batch.code_id = code.id();
    batch.p = noise.p;
    batch.seed = seed;
    batch.syndrome_bits = m;
    batch.records.resize(n_samples);

    std::mutex intern_mutex;
    auto intern_shared = [&](const std::string& key) {
        std::lock_guard<std::mutex> lock(intern_mutex);
        return batch.intern(key);
    };

    std::mutex error_mutex;
    std::string first_error;
    std::atomic<bool> failed{false};

    auto worker = [&](uint64_t begin, uint64_t end, int) {
        std::unordered_map<std::string, DecodeCacheEntry> cache;
        std::unordered_map<std::string, uint32_t> local_ids;
        Syndrome syn(m);
        for (uint64_t i = begin; i < end && !failed.load(std::memory_order_relaxed); ++i) {
          try {
            auto rng = stream_for(seed, i);
            syn.clear();
            int true_cls = 0;
            for (int q = 0; q < n; ++q)
                if (uniform01(rng) < noise.p) {
                    syn.xor_with(qubit_syndrome[q]);
                    if (zlog.get(q)) true_cls ^= 1;
                }
            std::string key = syn.packed_key();

            auto it = cache.find(key);
            if (it == cache.end()) {
                DecodeCacheEntry e;
                if (cfg.method == DecoderConfig::Method::Mwpm) {
                    DecodeResult r = mwpm->decode(syn);
                    e.decoder_class = r.cls;
                    e.w_mwpm = static_cast<int16_t>(r.weight);
                }
                if (cfg.with_gap) {
                    GapResult g = complementary_gap(*trellis, syn);
                    e.w_comp = static_cast<int16_t>(g.w_comp);
                    e.gap = static_cast<int16_t>(g.gap);
                    if (e.w_mwpm == kNoWeight) e.w_mwpm = static_cast<int16_t>(g.w_best);
                }
                if (cfg.method == DecoderConfig::Method::Mld || cfg.with_exact_prob) {
                    auto lp = trellis->coset_log_probs(syn, noise.p);
                    if (cfg.method == DecoderConfig::Method::Mld)
                        e.decoder_class = lp[1] > lp[0] ? LogicalClass::X : LogicalClass::I;
                    if (cfg.with_exact_prob) e.log_ps = log_add_exp(lp[0], lp[1]);
                }
                if (cache.size() >= kCacheCap) cache.clear();
                it = cache.emplace(std::move(key), e).first;
            }
            const DecodeCacheEntry& e = it->second;

            uint32_t key_id;
            auto lit = local_ids.find(it->first);
            if (lit != local_ids.end()) {
                key_id = lit->second;
            } else {
                key_id = intern_shared(it->first);
                local_ids.emplace(it->first, key_id);
            }

            SampleRecord& rec = batch.records[i];
            rec.key_id = key_id;
            rec.decoder_class = e.decoder_class;
            rec.x = static_cast<uint8_t>(static_cast<int>(e.decoder_class) != true_cls);
            rec.w_mwpm = e.w_mwpm;
            rec.w_comp = e.w_comp;
            rec.gap = e.gap;
            rec.log_ps = e.log_ps;
          } catch (const std::exception& ex) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.exchange(true))
                first_error = "decoder failure on record " + std::to_string(i) + ": " + ex.what();
          }
        }
    };

    parallel_for(n_samples, worker);
    if (failed.load()) throw std::runtime_error(first_error);
    batch.finalize_counts();
    return batch;
}

}  // namespace qsr
