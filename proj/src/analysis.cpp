#include "qsr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "qsr/errors.hpp"
#include "qsr/rng.hpp"

namespace qsr {

BootstrapCi bootstrap_ci(uint64_t n, const std::function<double(std::span<const uint64_t>)>& stat,
                         int replicates, double level, uint64_t seed) {
    if (n == 0) throw EmptyInputError("bootstrap_ci: empty sample");
    if (replicates < 2) throw DomainError("bootstrap_ci: need at least 2 replicates");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("bootstrap_ci: level must be in (0, 1)");

    std::vector<uint64_t> identity(n);
    for (uint64_t i = 0; i < n; ++i) identity[i] = i;

    BootstrapCi ci;
    ci.level = level;
    ci.replicates = replicates;
    ci.point = stat(identity);

    std::vector<double> vals(replicates);
    std::vector<uint64_t> draw(n);
    for (int b = 0; b < replicates; ++b) {
        auto rng = stream_for(seed, static_cast<uint64_t>(b));
        for (uint64_t i = 0; i < n; ++i) {
            uint64_t j = static_cast<uint64_t>(uniform01(rng) * static_cast<double>(n));
            draw[i] = j < n ? j : n - 1;
        }
        vals[b] = stat(draw);
    }
    std::sort(vals.begin(), vals.end());
    auto pick = [&](double q) {
        double pos = q * (replicates - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, static_cast<size_t>(replicates - 1));
        double frac = pos - static_cast<double>(lo);
        return vals[lo] * (1.0 - frac) + vals[hi] * frac;
    };
    ci.low = pick((1.0 - level) / 2.0);
    ci.high = pick((1.0 + level) / 2.0);
    return ci;
}

BootstrapCi bootstrap_mean_ci(std::span<const double> values, int replicates, double level,
                              uint64_t seed) {
    return bootstrap_ci(
        values.size(),
        [&](std::span<const uint64_t> idx) {
            double s = 0.0;
            for (uint64_t i : idx) s += values[i];
            return s / static_cast<double>(idx.size());
        },
        replicates, level, seed);
}

namespace {

// Weighted quadratic least squares through the rescaled points; returns the
// weighted residual and optionally the coefficients.
double quadratic_residual(const std::vector<ScalingPoint>& pts, double p_th, double inv_nu,
                          std::vector<double>* coeff_out) {
    // Normal equations for c0 + c1 x + c2 x^2.
    double m[3][3] = {};
    double rhs[3] = {};
    for (const auto& pt : pts) {
        double x = (pt.p - p_th) * std::pow(static_cast<double>(pt.d), inv_nu);
        double w = 1.0 / (pt.sigma * pt.sigma);
        double b[3] = {1.0, x, x * x};
        for (int i = 0; i < 3; ++i) {
            rhs[i] += w * b[i] * pt.p_l;
            for (int j = 0; j < 3; ++j) m[i][j] += w * b[i] * b[j];
        }
    }
    // Gaussian elimination with partial pivoting.
    double a[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
        a[i][3] = rhs[i];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return std::numeric_limits<double>::infinity();
        std::swap(a[col], a[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
        }
    }
    double c[3];
    for (int i = 0; i < 3; ++i) c[i] = a[i][3] / a[i][i];
    if (coeff_out) coeff_out->assign(c, c + 3);

    double chi2 = 0.0;
    for (const auto& pt : pts) {
        double x = (pt.p - p_th) * std::pow(static_cast<double>(pt.d), inv_nu);
        double fit = c[0] + c[1] * x + c[2] * x * x;
        double r = (pt.p_l - fit) / pt.sigma;
        chi2 += r * r;
    }
    return chi2;
}

struct CollapseObjective {
    const std::vector<ScalingPoint>* pts;
    double operator()(double p_th, double nu) const {
        if (nu < 0.2 || nu > 10.0) return std::numeric_limits<double>::infinity();
        return quadratic_residual(*pts, p_th, 1.0 / nu, nullptr);
    }
};

// Plain two-parameter Nelder-Mead.
std::pair<std::array<double, 2>, double> nelder_mead(const CollapseObjective& f,
                                                     std::array<double, 2> start,
                                                     std::array<double, 2> step) {
    struct Vertex {
        std::array<double, 2> x;
        double v;
    };
    std::array<Vertex, 3> s;
    s[0] = {start, f(start[0], start[1])};
    s[1] = {{start[0] + step[0], start[1]}, 0.0};
    s[1].v = f(s[1].x[0], s[1].x[1]);
    s[2] = {{start[0], start[1] + step[1]}, 0.0};
    s[2].v = f(s[2].x[0], s[2].x[1]);

    for (int iter = 0; iter < 400; ++iter) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
        if (std::abs(s[2].v - s[0].v) < 1e-12 * (1.0 + std::abs(s[0].v))) break;
        std::array<double, 2> cen = {(s[0].x[0] + s[1].x[0]) / 2.0, (s[0].x[1] + s[1].x[1]) / 2.0};
        auto at = [&](double t) {
            std::array<double, 2> x = {cen[0] + t * (cen[0] - s[2].x[0]),
                                       cen[1] + t * (cen[1] - s[2].x[1])};
            return Vertex{x, f(x[0], x[1])};
        };
        Vertex refl = at(1.0);
        if (refl.v < s[0].v) {
            Vertex exp = at(2.0);
            s[2] = exp.v < refl.v ? exp : refl;
        } else if (refl.v < s[1].v) {
            s[2] = refl;
        } else {
            Vertex con = at(refl.v < s[2].v ? 0.5 : -0.5);
            if (con.v < std::min(refl.v, s[2].v)) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i) {
                    for (int j = 0; j < 2; ++j) s[i].x[j] = (s[i].x[j] + s[0].x[j]) / 2.0;
                    s[i].v = f(s[i].x[0], s[i].x[1]);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    return {s[0].x, s[0].v};
}

std::pair<std::array<double, 2>, double> fit_once(const std::vector<ScalingPoint>& pts,
                                                  uint64_t seed) {
    CollapseObjective f{&pts};
    double p_min = pts[0].p, p_max = pts[0].p;
    for (const auto& pt : pts) {
        p_min = std::min(p_min, pt.p);
        p_max = std::max(p_max, pt.p);
    }
    double span = std::max(p_max - p_min, 1e-4);

    std::array<double, 2> best_x = {(p_min + p_max) / 2.0, 1.5};
    double best_v = std::numeric_limits<double>::infinity();
    auto rng = stream_for(seed, 0);
    for (int r = 0; r < 20; ++r) {
        std::array<double, 2> start;
        if (r == 0) {
            start = {(p_min + p_max) / 2.0, 1.5};
        } else {
            start = {p_min + uniform01(rng) * (p_max - p_min), 0.5 + uniform01(rng) * 2.5};
        }
        auto [x, v] = nelder_mead(f, start, {span / 10.0, 0.2});
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    if (!std::isfinite(best_v)) throw FitError("scaling collapse failed to converge");
    return {best_x, best_v};
}

}  // namespace

ScalingFit scaling_collapse(const std::vector<ScalingPoint>& points, uint64_t seed) {
    if (points.empty()) throw EmptyInputError("scaling_collapse: no points");
    std::set<int> distances;
    for (const auto& pt : points) {
        if (pt.d < 2) throw DomainError("scaling_collapse: distance must be >= 2");
        if (!(pt.sigma > 0.0)) throw DomainError("scaling_collapse: every point needs sigma > 0");
        distances.insert(pt.d);
    }
    if (distances.size() < 3)
        throw FitError("scaling_collapse: need at least 3 distinct distances, have " +
                       std::to_string(distances.size()));
    if (points.size() < 6) throw FitError("scaling_collapse: need at least 6 points");

    auto [x, v] = fit_once(points, seed);
    ScalingFit fit;
    fit.p_th = x[0];
    fit.nu = x[1];
    fit.chi2 = quadratic_residual(points, fit.p_th, 1.0 / fit.nu, &fit.coeff);

    // Uncertainties from bootstrap over points.
    const int kReps = 40;
    std::vector<double> p_ths, nus;
    for (int b = 0; b < kReps; ++b) {
        auto rng = stream_for(seed ^ 0x9e3779b97f4a7c15ull, static_cast<uint64_t>(b));
        std::vector<ScalingPoint> draw(points.size());
        for (size_t i = 0; i < points.size(); ++i) {
            size_t j = static_cast<size_t>(uniform01(rng) * static_cast<double>(points.size()));
            draw[i] = points[j < points.size() ? j : points.size() - 1];
        }
        std::set<int> ds;
        for (const auto& pt : draw) ds.insert(pt.d);
        if (ds.size() < 3) continue;
        try {
            auto [bx, bv] = fit_once(draw, seed + 1 + b);
            p_ths.push_back(bx[0]);
            nus.push_back(bx[1]);
        } catch (const FitError&) {
        }
    }
    auto stddev = [](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    };
    fit.p_th_err = stddev(p_ths);
    fit.nu_err = stddev(nus);
    return fit;
}

double crossing_point(const CurveSamples& a, const CurveSamples& b) {
    if (a.p.size() != a.p_l.size() || b.p.size() != b.p_l.size())
        throw DomainError("crossing_point: ragged curve");
    if (a.p.size() < 2) throw DomainError("crossing_point: need at least 2 grid points");
    if (a.p.size() != b.p.size()) throw DomainError("crossing_point: curves use different grids");
    for (size_t i = 0; i < a.p.size(); ++i)
        if (std::abs(a.p[i] - b.p[i]) > 1e-12)
            throw DomainError("crossing_point: curves use different grids");

    std::vector<double> diff(a.p.size());
    bool identical = true;
    for (size_t i = 0; i < a.p.size(); ++i) {
        diff[i] = a.p_l[i] - b.p_l[i];
        if (diff[i] != 0.0) identical = false;
    }
    if (identical) throw FitError("crossing_point: curves are identical, no crossing");

    std::vector<double> crossings;
    for (size_t i = 0; i + 1 < diff.size(); ++i) {
        if (diff[i] == 0.0) {
            crossings.push_back(a.p[i]);
        } else if ((diff[i] < 0.0) != (diff[i + 1] < 0.0) && diff[i + 1] != 0.0) {
            double t = diff[i] / (diff[i] - diff[i + 1]);
            crossings.push_back(a.p[i] + t * (a.p[i + 1] - a.p[i]));
        }
    }
    if (diff.back() == 0.0) crossings.push_back(a.p.back());
    if (crossings.empty()) throw FitError("crossing_point: curves do not cross on the grid");
    if (crossings.size() > 1) throw FitError("crossing_point: multiple crossings on the grid");
    return crossings.front();
}

}  // namespace qsr
