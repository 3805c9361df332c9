#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <tuple>
#include <vector>

#include "qsr/errors.hpp"
#include "qsr/postselect.hpp"
#include "qsr/simulate.hpp"

using namespace qsr;

namespace {

// Hand-built batch: syndrome key, failure bit, gap.
SampleBatch make_batch(const std::vector<std::tuple<std::string, int, int>>& rows, int bits) {
    SampleBatch batch;
    batch.syndrome_bits = bits;
    for (const auto& [hex, x, gap] : rows) {
        SampleRecord r;
        r.key_id = batch.intern(Syndrome::from_hex(hex, bits).packed_key());
        r.x = static_cast<uint8_t>(x);
        if (gap >= 0) r.gap = static_cast<int16_t>(gap);
        batch.records.push_back(r);
    }
    batch.finalize_counts();
    return batch;
}

}  // namespace

TEST_CASE("trivial-syndrome post-selection on a hand-built batch") {
    SampleBatch batch = make_batch(
        {{"00", 0, -1}, {"00", 1, -1}, {"03", 1, -1}, {"00", 0, -1}, {"05", 0, -1}}, 8);
    Estimate est = ps_estimate(batch);
    CHECK(est.p_l == doctest::Approx(1.0 / 3.0));
    CHECK(est.acceptance == doctest::Approx(0.6));
    CHECK(est.effective_n == 3);
    CHECK(est.method == "PS");
}

TEST_CASE("post-selection with no trivial syndromes is an empty-input error") {
    SampleBatch batch = make_batch({{"01", 0, -1}, {"02", 1, -1}}, 8);
    CHECK_THROWS_AS(ps_estimate(batch), EmptyInputError);
    SampleBatch empty;
    CHECK_THROWS_AS(ps_estimate(empty), EmptyInputError);
}

TEST_CASE("gap filter keeps low-confidence samples, inclusive on the cut") {
    // d = 5: confidence = 1 - gap/5. Gaps 0,1,5 -> confidences 1.0, 0.8, 0.0.
    SampleBatch batch =
        make_batch({{"00", 1, 0}, {"01", 0, 1}, {"02", 0, 5}, {"03", 1, 1}}, 8);
    CgpsResult all = cgps_filter(batch, {1.0, 5});
    CHECK(all.kept_indices.size() == 4);
    CHECK(all.estimate.p_l == doctest::Approx(0.5));

    CgpsResult cut = cgps_filter(batch, {0.8, 5});  // keeps confidences <= 0.8
    CHECK(cut.kept_indices == std::vector<uint64_t>{1, 2, 3});
    CHECK(cut.estimate.p_l == doctest::Approx(1.0 / 3.0));
    CHECK(cut.estimate.acceptance == doctest::Approx(0.75));

    CgpsResult strict = cgps_filter(batch, {0.1, 5});
    CHECK(strict.kept_indices == std::vector<uint64_t>{2});

    CHECK_THROWS_AS(cgps_filter(batch, {-0.2, 5}), DomainError);
    CHECK_THROWS_AS(cgps_filter(batch, {0.5, 0}), DomainError);
}

TEST_CASE("missing gaps are contract errors") {
    SampleBatch batch = make_batch({{"00", 0, 2}, {"01", 0, -1}}, 8);
    CHECK_THROWS_AS(cgps_filter(batch, {0.5, 5}), ContractError);
    CHECK_THROWS_AS(combined_sr_cgps(batch, 1, {0.5, 5}, 0, 0), ContractError);
}

TEST_CASE("combined estimate degenerates to its stages at the edges") {
    CodeSpec code = build_rotated(3);
    DecoderConfig cfg;
    cfg.with_gap = true;
    SampleBatch batch = run_batch(code, {0.12}, 30000, cfg, 31);

    // c = 1 keeps every resampled draw, so only the SR stage acts.
    Estimate combined = combined_sr_cgps(batch, 2, {1.0, 3}, 0, 77);
    Estimate sr = resample_workflow(batch, 2, 0, 77).estimate;
    CHECK(combined.p_l == doctest::Approx(sr.p_l).epsilon(1e-12));
    CHECK(combined.acceptance == doctest::Approx(sr.acceptance).epsilon(1e-12));

    // alpha = 1 resampling is the identity, so only the gap stage acts.
    Estimate gap_only = combined_sr_cgps(batch, 1, {2.0 / 3.0, 3}, 0, 77);
    CgpsResult direct = cgps_filter(batch, {2.0 / 3.0, 3});
    CHECK(gap_only.p_l == doctest::Approx(direct.estimate.p_l).epsilon(1e-12));
    CHECK(gap_only.acceptance == doctest::Approx(direct.estimate.acceptance).epsilon(1e-12));
    CHECK(gap_only.effective_n == direct.estimate.effective_n);
}

TEST_CASE("combined acceptance is the product of the stage acceptances") {
    CodeSpec code = build_rotated(3);
    DecoderConfig cfg;
    cfg.with_gap = true;
    SampleBatch batch = run_batch(code, {0.12}, 30000, cfg, 32);
    Estimate est = combined_sr_cgps(batch, 2, {2.0 / 3.0, 3}, 0, 9);
    CHECK(est.method == "combined");
    CHECK(est.alpha == 2);
    CHECK(est.c == doctest::Approx(2.0 / 3.0));
    // effective_n / n_tilde is the second-stage acceptance.
    ResampleResult sr = resample_workflow(batch, 2, 0, 9);
    double second = static_cast<double>(est.effective_n) / sr.picked_indices.size();
    CHECK(est.acceptance == doctest::Approx(sr.estimate.acceptance * second).epsilon(1e-12));
    CHECK(est.acceptance <= sr.estimate.acceptance);
}
