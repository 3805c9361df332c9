#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qsr/analysis.hpp"
#include "qsr/errors.hpp"
#include "qsr/rng.hpp"

using namespace qsr;

namespace {

std::vector<ScalingPoint> synthetic_points(double p_th, double nu, double noise_frac,
                                           uint64_t seed) {
    std::vector<ScalingPoint> points;
    auto rng = stream_for(seed, 0);
    for (int d : {5, 7, 9, 11}) {
        for (double p = 0.080; p <= 0.1201; p += 0.004) {
            double x = (p - p_th) * std::pow(d, 1.0 / nu);
            double y = 0.12 + 0.9 * x + 3.0 * x * x;
            double sigma = std::max(noise_frac * y, 1e-4);
            // Symmetrized uniform noise, deterministic in the seed.
            y += sigma * (2.0 * uniform01(rng) - 1.0);
            points.push_back({p, d, y, sigma});
        }
    }
    return points;
}

}  // namespace

TEST_CASE("bootstrap interval is deterministic and brackets the mean") {
    std::vector<double> values;
    auto rng = stream_for(1, 0);
    for (int i = 0; i < 2000; ++i) values.push_back(uniform01(rng) < 0.3 ? 1.0 : 0.0);
    BootstrapCi a = bootstrap_mean_ci(values, 300, 0.67, 9);
    BootstrapCi b = bootstrap_mean_ci(values, 300, 0.67, 9);
    CHECK(a.low == b.low);
    CHECK(a.high == b.high);
    CHECK(a.low < a.point);
    CHECK(a.point < a.high);
    CHECK(std::abs(a.point - 0.3) < 0.05);
}

TEST_CASE("bootstrap coverage is near the nominal level") {
    const double true_mean = 0.3;
    const int n = 200, reps = 400;
    int covered = 0;
    for (int r = 0; r < reps; ++r) {
        auto rng = stream_for(55, r);
        std::vector<double> values(n);
        for (int i = 0; i < n; ++i) values[i] = uniform01(rng) < true_mean ? 1.0 : 0.0;
        BootstrapCi ci = bootstrap_mean_ci(values, 200, 0.67, 1000 + r);
        if (ci.low <= true_mean && true_mean <= ci.high) ++covered;
    }
    double coverage = static_cast<double>(covered) / reps;
    CHECK(coverage > 0.58);
    CHECK(coverage < 0.78);
}

TEST_CASE("bootstrap width shrinks like the square root of the sample size") {
    std::vector<double> log_n, log_w;
    for (int n : {1000, 10000, 100000, 1000000}) {
        auto rng = stream_for(77, n);
        std::vector<double> values(n);
        for (int i = 0; i < n; ++i) values[i] = uniform01(rng) < 0.4 ? 1.0 : 0.0;
        BootstrapCi ci = bootstrap_mean_ci(values, 150, 0.67, 3);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_w.push_back(std::log(ci.high - ci.low));
    }
    // Least-squares slope of log width vs log N.
    double mx = 0, my = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_w[i];
    }
    mx /= log_n.size();
    my /= log_n.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
        num += (log_n[i] - mx) * (log_w[i] - my);
        den += (log_n[i] - mx) * (log_n[i] - mx);
    }
    double slope = num / den;
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("bootstrap input validation") {
    std::vector<double> empty;
    CHECK_THROWS_AS(bootstrap_mean_ci(empty, 100, 0.67, 0), EmptyInputError);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(bootstrap_mean_ci(one, 1, 0.67, 0), DomainError);
    CHECK_THROWS_AS(bootstrap_mean_ci(one, 100, 1.5, 0), DomainError);
}

TEST_CASE("scaling collapse recovers a synthetic threshold") {
    auto points = synthetic_points(0.10, 1.5, 0.01, 13);
    ScalingFit fit = scaling_collapse(points, 7);
    CHECK(std::abs(fit.p_th - 0.10) < 0.003);
    CHECK(std::abs(fit.nu - 1.5) < 0.1);
    CHECK(fit.coeff.size() == 3);
    CHECK(fit.p_th_err > 0.0);
    CHECK(fit.nu_err > 0.0);
}

TEST_CASE("collapse point estimate is invariant under reordering and sigma rescaling") {
    auto points = synthetic_points(0.10, 1.5, 0.01, 21);
    ScalingFit base = scaling_collapse(points, 2);
    std::vector<ScalingPoint> reversed(points.rbegin(), points.rend());
    ScalingFit rev = scaling_collapse(reversed, 2);
    CHECK(rev.p_th == doctest::Approx(base.p_th).epsilon(1e-3));
    CHECK(rev.nu == doctest::Approx(base.nu).epsilon(1e-2));

    std::vector<ScalingPoint> scaled = points;
    for (auto& pt : scaled) pt.sigma *= 10.0;
    ScalingFit sc = scaling_collapse(scaled, 2);
    CHECK(sc.p_th == doctest::Approx(base.p_th).epsilon(1e-3));
    CHECK(sc.nu == doctest::Approx(base.nu).epsilon(1e-2));
}

TEST_CASE("collapse needs three distinct distances") {
    std::vector<ScalingPoint> points;
    for (int d : {5, 7})
        for (double p : {0.08, 0.09, 0.10, 0.11}) points.push_back({p, d, 0.1, 0.01});
    CHECK_THROWS_AS(scaling_collapse(points, 0), FitError);
    CHECK_THROWS_AS(scaling_collapse({}, 0), EmptyInputError);
    std::vector<ScalingPoint> bad = {{0.1, 5, 0.1, 0.0}};
    CHECK_THROWS_AS(scaling_collapse(bad, 0), DomainError);
}

TEST_CASE("crossing point of straight lines") {
    CurveSamples a, b;
    for (double p = 0.0; p <= 0.41; p += 0.05) {
        a.p.push_back(p);
        a.p_l.push_back(p);  // the line y = p
        b.p.push_back(p);
        b.p_l.push_back(0.2);  // the constant 0.2
    }
    CHECK(crossing_point(a, b) == doctest::Approx(0.2).epsilon(1e-12));

    // Off-grid crossing interpolates linearly.
    CurveSamples c = b;
    for (auto& v : c.p_l) v = 0.225;
    CHECK(crossing_point(a, c) == doctest::Approx(0.225).epsilon(1e-12));
}

TEST_CASE("crossing failure modes") {
    CurveSamples a, b;
    for (double p : {0.1, 0.2, 0.3}) {
        a.p.push_back(p);
        a.p_l.push_back(p);
        b.p.push_back(p);
        b.p_l.push_back(p);
    }
    CHECK_THROWS_AS(crossing_point(a, b), FitError);  // identical curves

    CurveSamples above = b;
    for (auto& v : above.p_l) v += 1.0;
    CHECK_THROWS_AS(crossing_point(a, above), FitError);  // never cross

    CurveSamples wiggle = b;
    wiggle.p_l = {0.15, 0.15, 0.35};  // crosses twice
    CHECK_THROWS_AS(crossing_point(a, wiggle), FitError);

    CurveSamples other;
    other.p = {0.1, 0.25, 0.3};
    other.p_l = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(crossing_point(a, other), DomainError);  // different grids
}
