#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "qsr/accum.hpp"
#include "qsr/decoders.hpp"
#include "qsr/errors.hpp"
#include "qsr/io.hpp"
#include "qsr/rng.hpp"
#include "qsr/simulate.hpp"

using namespace qsr;

TEST_CASE("sampled error weight has the right mean") {
    CodeSpec code = build_rotated(5);
    NoiseModel noise{0.13};
    auto rng = stream_for(42, 0);
    const int reps = 20000;
    double total = 0;
    for (int i = 0; i < reps; ++i) total += sample_error(code, noise, rng).popcount();
    double mean = total / reps;
    double expect = code.n * noise.p;
    double sigma = std::sqrt(code.n * noise.p * (1 - noise.p) / reps);
    CHECK(std::abs(mean - expect) < 5 * sigma);
}

TEST_CASE("syndrome matches manual parity") {
    CodeSpec code = build_unrotated(3);
    auto rng = stream_for(7, 0);
    for (int rep = 0; rep < 50; ++rep) {
        ErrorPattern e = sample_error(code, {0.3}, rng);
        Syndrome s = syndrome_of(code, e);
        for (int j = 0; j < code.num_z_checks(); ++j) {
            int parity = 0;
            for (int q : code.z_checks[j]) parity ^= e.get(q);
            CHECK(s.get(j) == (parity != 0));
        }
    }
}

TEST_CASE("residual class requires a trivial residual syndrome") {
    CodeSpec code = build_rotated(3);
    ErrorPattern e(code.n);
    e.flip(0);
    ErrorPattern trivial(code.n);
    CHECK_THROWS_AS(residual_class(code, e, trivial), ContractError);
    // Correcting the error exactly leaves the identity class.
    CHECK(residual_class(code, e, e) == LogicalClass::I);
    // A full logical operator flips the class.
    ErrorPattern logical(code.n);
    for (int q : code.x_logical) logical.flip(q);
    CHECK(residual_class(code, logical, trivial) == LogicalClass::X);
}

TEST_CASE("batches are reproducible and shard-invariant") {
    CodeSpec code = build_rotated(3);
    DecoderConfig cfg;
    cfg.with_gap = true;
    cfg.with_exact_prob = true;

    setenv("QSR_WORKERS", "1", 1);
    SampleBatch serial = run_batch(code, {0.1}, 3000, cfg, 99);
    setenv("QSR_WORKERS", "3", 1);
    SampleBatch sharded = run_batch(code, {0.1}, 3000, cfg, 99);
    SampleBatch repeat = run_batch(code, {0.1}, 3000, cfg, 99);
    unsetenv("QSR_WORKERS");

    auto dump = [](const SampleBatch& b) {
        std::ostringstream ss;
        write_batch(ss, b);
        return ss.str();
    };
    CHECK(dump(serial) == dump(sharded));
    CHECK(dump(serial) == dump(repeat));

    SampleBatch other = run_batch(code, {0.1}, 3000, cfg, 100);
    CHECK(dump(serial) != dump(other));
}

TEST_CASE("batch records match an independent re-decode") {
    CodeSpec code = build_rotated(3);
    NoiseModel noise{0.12};
    DecoderConfig cfg;
    cfg.with_exact_prob = true;
    const uint64_t n = 500;
    SampleBatch batch = run_batch(code, noise, n, cfg, 5);

    DetectionGraph graph = detection_graph(code);
    MwpmDecoder decoder(code, graph);
    Trellis trellis(code);
    for (uint64_t i = 0; i < n; ++i) {
        auto rng = stream_for(5, i);
        ErrorPattern e(code.n);
        for (int q = 0; q < code.n; ++q)
            if (uniform01(rng) < noise.p) e.flip(q);
        Syndrome s = syndrome_of(code, e);
        const SampleRecord& r = batch.records[i];
        CHECK(batch.key_of(r) == s.packed_key());

        DecodeResult dec = decoder.decode(s);
        CHECK(r.decoder_class == dec.cls);
        CHECK(r.x == (residual_class(code, e, dec.correction) != LogicalClass::I ? 1 : 0));

        auto lp = trellis.coset_log_probs(s, noise.p);
        CHECK(r.log_ps == doctest::Approx(log_add_exp(lp[0], lp[1])).epsilon(1e-12));
    }
}

TEST_CASE("counts sum to the batch size") {
    SampleBatch batch = run_batch(build_rotated(3), {0.08}, 4000, {}, 1);
    uint64_t total = 0;
    for (uint64_t c : batch.counts) total += c;
    CHECK(total == batch.size());
    CHECK(batch.counts.size() == batch.keys.size());
}

TEST_CASE("invalid batch parameters are rejected") {
    CodeSpec code = build_rotated(3);
    CHECK_THROWS_AS(run_batch(code, {0.1}, 0, {}, 0), DomainError);
    CHECK_THROWS_AS(run_batch(code, {-0.1}, 10, {}, 0), DomainError);
    CHECK_THROWS_AS(run_batch(code, {1.5}, 10, {}, 0), DomainError);
}
