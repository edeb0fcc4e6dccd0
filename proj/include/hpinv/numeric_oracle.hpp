#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/error.hpp>
#include <hpinv/germ_analysis.hpp>
#include <hpinv/hp_invariant.hpp>

// Floating-point cross-check of the polar leading terms. Shares no numerics
// with the certified path: roots come from a plain Aberth iteration.
namespace hpinv
{

// f as complex double coefficients, (i, j, c) for c x^i y^j
struct float_poly {
    struct term {
        unsigned i;
        unsigned j;
        std::complex<double> c;
    };
    std::vector<term> terms;

    static float_poly from(const bivariate_poly &p)
    {
        float_poly f;
        for (const auto &[e, c] : p.terms()) {
            f.terms.push_back({e.first, e.second, {c.re().get_d(), c.im().get_d()}});
        }
        return f;
    }
    float_poly derivative_x() const
    {
        float_poly d;
        for (const auto &t : terms) {
            if (t.i > 0) {
                d.terms.push_back({t.i - 1, t.j, t.c * static_cast<double>(t.i)});
            }
        }
        return d;
    }
    unsigned order() const
    {
        unsigned k = std::numeric_limits<unsigned>::max();
        for (const auto &t : terms) {
            k = std::min(k, t.i + t.j);
        }
        return k;
    }
    template <class T> std::vector<std::complex<T>> at_y(T y) const
    {
        std::vector<std::complex<T>> c;
        for (const auto &t : terms) {
            if (c.size() <= t.i) {
                c.resize(t.i + 1);
            }
            c[t.i] += std::complex<T>(t.c) * std::pow(y, static_cast<T>(t.j));
        }
        return c;
    }
    std::complex<double> operator()(std::complex<double> x, double y) const
    {
        std::complex<long double> s;
        const std::complex<long double> X(x);
        for (const auto &t : terms) {
            s += std::complex<long double>(t.c) * std::pow(X, static_cast<int>(t.i)) *
                 std::pow(static_cast<long double>(y), static_cast<long double>(t.j));
        }
        return std::complex<double>(s);
    }
};

namespace detail
{

// Aberth iteration; false when it did not settle.
template <class T> bool aberth(const std::vector<std::complex<T>> &c, std::vector<std::complex<T>> &z)
{
    const std::size_t n = c.size() - 1;
    z.resize(n);
    T scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::pow(std::abs(c[i] / c[n]), T(1) / static_cast<T>(n - i)));
    }
    if (scale == 0) {
        scale = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = std::polar(scale, static_cast<T>(2 * M_PI * (i + 0.4)) / static_cast<T>(n));
    }
    const T eps = std::numeric_limits<T>::epsilon();
    for (int it = 0; it < 500; ++it) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<T> p = c[n];
            std::complex<T> dp = 0;
            for (std::size_t k = n; k-- > 0;) {
                dp = dp * z[i] + p;
                p = p * z[i] + c[k];
            }
            if (p == std::complex<T>(0)) {
                continue;
            }
            const std::complex<T> ratio = p / dp;
            std::complex<T> sum = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    sum += T(1) / (z[i] - z[j]);
                }
            }
            const std::complex<T> step = ratio / (T(1) - ratio * sum);
            z[i] -= step;
            if (std::abs(step) > 16 * eps * std::abs(z[i])) {
                moved = true;
            }
        }
        if (!moved) {
            return true;
        }
    }
    return false;
}

// Roots of g(., y), with exact zero roots split off first.
inline std::vector<std::complex<double>> roots_at(const float_poly &g, double y)
{
    auto c = g.at_y(static_cast<long double>(y));
    while (!c.empty() && c.back() == std::complex<long double>(0)) {
        c.pop_back();
    }
    std::size_t zeros = 0;
    while (zeros < c.size() && c[zeros] == std::complex<long double>(0)) {
        ++zeros;
    }
    std::vector<std::complex<double>> out(zeros, 0.0);
    const std::vector<std::complex<long double>> rest(c.begin() + static_cast<long>(zeros), c.end());
    if (rest.size() < 2) {
        return out;
    }
    std::vector<std::complex<double>> cd(rest.begin(), rest.end());
    std::vector<std::complex<double>> z;
    if (aberth(cd, z)) {
        out.insert(out.end(), z.begin(), z.end());
        return out;
    }
    std::vector<std::complex<long double>> zl;
    aberth(rest, zl);
    for (const auto &r : zl) {
        out.emplace_back(r);
    }
    return out;
}

// The n smallest roots merged into clusters of numerically equal values.
inline std::vector<std::complex<double>> small_root_clusters(std::vector<std::complex<double>> roots, std::size_t n)
{
    std::sort(roots.begin(), roots.end(),
              [](const auto &a, const auto &b) { return std::abs(a) < std::abs(b); });
    roots.resize(std::min(n, roots.size()));
    std::vector<std::complex<double>> centers;
    std::vector<int> counts;
    for (const auto &r : roots) {
        bool merged = false;
        for (std::size_t i = 0; i < centers.size() && !merged; ++i) {
            const double tol = 1e-6 * std::max(std::abs(r), std::abs(centers[i]));
            if (std::abs(r - centers[i]) <= tol) {
                centers[i] = (centers[i] * static_cast<double>(counts[i]) + r) / static_cast<double>(counts[i] + 1);
                ++counts[i];
                merged = true;
            }
        }
        if (!merged) {
            centers.push_back(r);
            counts.push_back(1);
        }
    }
    return centers;
}

} // namespace detail

struct branch_track {
    std::vector<double> radii;
    std::vector<std::complex<double>> points;
    std::vector<std::complex<double>> values;
};

// Polar roots of f near the origin followed from y = r_start down a
// geometric sequence of radii; f must be mini-regular.
inline std::vector<branch_track> track_polar(const float_poly &f, double r_start = 1e-2, int steps = 12,
                                             double ratio = 0.5)
{
    if (steps < 8) {
        throw error(error_kind::invalid_argument, "at least 8 radii are needed");
    }
    const float_poly g = f.derivative_x();
    const std::size_t n = f.order() - 1;
    std::vector<branch_track> tracks;
    double r = r_start;
    for (int s = 0; s < steps; ++s, r *= ratio) {
        const auto cl = detail::small_root_clusters(detail::roots_at(g, r), n);
        if (s == 0) {
            tracks.resize(cl.size());
        } else if (cl.size() != tracks.size()) {
            throw error(error_kind::root_collision, "polar roots merge at y = " + std::to_string(r));
        }
        std::vector<bool> taken(cl.size(), false);
        for (auto &t : tracks) {
            std::size_t best = 0;
            if (s > 0) {
                double d = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < cl.size(); ++i) {
                    if (std::abs(cl[i] - t.points.back()) < d) {
                        d = std::abs(cl[i] - t.points.back());
                        best = i;
                    }
                }
            } else {
                best = static_cast<std::size_t>(&t - tracks.data());
            }
            if (taken[best]) {
                throw error(error_kind::root_collision, "two polar tracks meet at y = " + std::to_string(r));
            }
            taken[best] = true;
            t.radii.push_back(r);
            t.points.push_back(cl[best]);
            t.values.push_back(f(cl[best], r));
        }
    }
    return tracks;
}

struct leading_fit {
    double h0 = 0;
    double c0_abs = 0;
};

// Least squares of log|f| against log r on the smaller half of the radii.
inline leading_fit fit_leading(const branch_track &t)
{
    const std::size_t n = t.radii.size();
    if (n < 8) {
        throw error(error_kind::degenerate_fit, "too few samples");
    }
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double sxy = 0;
    const std::size_t from = n / 2;
    for (std::size_t i = from; i < n; ++i) {
        const double v = std::abs(t.values[i]);
        if (!(v > 1e-280)) {
            throw error(error_kind::degenerate_fit, "value along the track underflows");
        }
        const double x = std::log(t.radii[i]);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(n - from);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return {slope, std::exp((sy - slope * sx) / m)};
}

struct oracle_options {
    double r_start = 1e-2;
    int steps = 12;
    double ratio = 0.5;
    double h_tol = 1e-3;
    double c_tol = 1e-2;
    int escalations = 2;
    invariant_options symbolic;
};

struct oracle_row {
    std::string arc;
    rational h0;
    double c0_abs = 0;
    double h0_est = 0;
    double c0_est = 0;
    double h_err = 0; // relative
    double c_err = 0; // relative
    bool tangential = false;
    bool pass = false;
};

struct oracle_report {
    std::vector<oracle_row> rows;
    double r_start = 0;
    std::string failure; // set when tracking itself failed
    bool pass = false;
};

namespace detail
{

inline oracle_report cross_check_at(const germ_profile &prof, const std::vector<polar_arc> &arcs,
                                    const oracle_options &opt, double r_start)
{
    oracle_report rep;
    rep.r_start = r_start;
    std::vector<branch_track> tracks;
    try {
        tracks = track_polar(float_poly::from(prof.f), r_start, opt.steps, opt.ratio);
    } catch (const error &e) {
        rep.failure = e.what();
        return rep;
    }
    rep.pass = !tracks.empty() || arcs.empty();
    for (const auto &t : tracks) {
        const double r = t.radii.back();
        const polar_arc *best = nullptr;
        double d = std::numeric_limits<double>::infinity();
        for (const auto &a : arcs) {
            const double e = std::abs(a.arc.series.evaluate(r) - t.points.back());
            if (e < d) {
                d = e;
                best = &a;
            }
        }
        oracle_row row;
        row.arc = best->arc.series.to_string();
        row.h0 = best->data.h0;
        row.c0_abs = std::abs(best->data.c0.approx());
        row.tangential = best->data.h0 > rational(prof.k);
        try {
            const leading_fit fit = fit_leading(t);
            row.h0_est = fit.h0;
            row.c0_est = fit.c0_abs;
            row.h_err = std::abs(fit.h0 - row.h0.get_d()) / row.h0.get_d();
            row.c_err = std::abs(fit.c0_abs - row.c0_abs) / row.c0_abs;
            row.pass = row.h_err <= opt.h_tol && row.c_err <= opt.c_tol;
        } catch (const error &e) {
            rep.failure = e.what();
        }
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace detail

// Fits every polar track and compares with the symbolic arcs, shrinking
// r_start tenfold up to opt.escalations times before reporting a mismatch.
inline oracle_report cross_check(const bivariate_poly &f, const oracle_options &opt = {})
{
    const germ_profile prof = analyze_germ(f);
    const auto arcs = with_precision_escalation(opt.symbolic, [&](mpfr_prec_t p) {
        invariant_options o = opt.symbolic;
        o.prec = p;
        return polar_arcs(prof, o);
    });
    double r = opt.r_start;
    oracle_report rep;
    for (int round = 0; round <= opt.escalations; ++round, r /= 10) {
        rep = detail::cross_check_at(prof, arcs, opt, r);
        if (rep.pass) {
            break;
        }
    }
    return rep;
}

} // namespace hpinv
