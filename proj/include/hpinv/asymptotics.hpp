#pragma once

#include <optional>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/error.hpp>
#include <hpinv/newton_puiseux.hpp>
#include <hpinv/puiseux_series.hpp>
#include <hpinv/series_ops.hpp>
#include <hpinv/upoly.hpp>

namespace hpinv
{

// Expansion of F(X, Y) = f(X + lambda(Y), Y) = sum X^i f_i(Y) along an arc
// known below order T.
struct arc_local_data {
    rational T;
    std::vector<puiseux_series> f;
    // ord f_i, absent when f_i vanishes identically. For i >= 1 this is the
    // first stored exponent, a lower bound when that coefficient is a ball
    // that might vanish; the bound only makes xi larger, never unsound.
    std::vector<std::optional<rational>> h;
    rational h0;
    coeff_value c0;
    rational xi;
    // the m that achieve xi, together with 0; these carry Q and R
    std::vector<unsigned> q_support;
    cv_upoly R;
};

namespace detail
{

// f_i for the known part of the arc, each cut at `cap`.
inline x_poly arc_expansion(const bivariate_poly &f, const puiseux_series &prefix, const rational &cap)
{
    return taylor_shift(to_x_poly(f), prefix, std::optional<rational>(cap));
}

} // namespace detail

inline arc_local_data arc_local_data_at(const bivariate_poly &f, const puiseux_series &lambda, const rational &T)
{
    const puiseux_series prefix = arc_prefix(lambda, T);
    arc_local_data d;
    d.T = T;
    // Every h_m with h_m < h_0 matters, so the cap only has to clear h_0.
    rational cap = rational(static_cast<long>(f.total_degree()) + 1) * (T + 1);
    for (int attempt = 0;; ++attempt) {
        d.f = detail::arc_expansion(f, prefix, cap);
        if (d.f.empty() || (d.f[0].empty() && d.f[0].is_exact())) {
            throw error(error_kind::arc_in_zero_set, "f vanishes identically along the arc");
        }
        const auto info = d.f[0].order();
        if (info.first_unknown) {
            throw indeterminate("leading coefficient along the arc cannot be separated from zero");
        }
        if (info.order) {
            d.h0 = *info.order;
            d.c0 = d.f[0].coeff(d.h0);
            break;
        }
        if (attempt == 8) {
            // f_0 = 0 + O(y^cap) with a huge cap: treat as the arc lying in f = 0
            throw error(error_kind::arc_in_zero_set, "f vanishes along the arc to order " + to_string(cap));
        }
        cap *= 2;
    }
    d.h.assign(d.f.size(), std::nullopt);
    d.h[0] = d.h0;
    for (std::size_t m = 1; m < d.f.size(); ++m) {
        if (d.f[m].empty() && d.f[m].is_exact()) {
            d.h[m] = std::nullopt;
        } else {
            d.h[m] = d.f[m].min_exponent() ? d.f[m].min_exponent() : d.f[m].truncation();
        }
    }
    d.xi = 0;
    bool any = false;
    for (std::size_t m = 1; m < d.f.size(); ++m) {
        if (d.h[m] && *d.h[m] < d.h0) {
            const rational r = (d.h0 - *d.h[m]) / rational(static_cast<long>(m));
            if (!any || r > d.xi) {
                d.xi = r;
            }
            any = true;
        }
    }
    d.q_support.push_back(0);
    std::vector<coeff_value> rc{d.c0};
    for (std::size_t m = 1; any && m < d.f.size(); ++m) {
        if (d.h[m] && *d.h[m] < d.h0 && (d.h0 - *d.h[m]) / rational(static_cast<long>(m)) == d.xi) {
            d.q_support.push_back(static_cast<unsigned>(m));
            rc.resize(m + 1);
            rc[m] = d.f[m].coeff(*d.h[m]);
        }
    }
    d.R = cv_upoly(std::move(rc));
    return d;
}

// Same data for an arc given through its representative: computed exactly
// for f(x, s y) along the representative, then carried over coefficientwise.
inline arc_local_data arc_local_data_at(const bivariate_poly &f, const puiseux_arc &arc, const rational &T)
{
    if (arc.frame.trivial()) {
        return arc_local_data_at(f, arc.series, T);
    }
    const bivariate_poly fs = compose(f, linear_map{1, 0, 0, arc.frame.y_scale()});
    arc_local_data d = arc_local_data_at(fs, arc.representative, T);
    for (auto &fi : d.f) {
        fi = arc.frame.apply(fi, arc.prec);
    }
    d.c0 = d.f[0].coeff(d.h0);
    std::vector<coeff_value> rc(d.R.coeffs().size());
    for (const unsigned m : d.q_support) {
        rc[m] = d.f[m].coeff(*d.h[m]);
    }
    d.R = cv_upoly(std::move(rc));
    return d;
}

// True when the arc is known far enough (T > xi) that no later term can
// change the leading term c0 y^h0 of f along it.
inline bool truncation_certificate(const arc_local_data &d, const rational &T)
{
    return T > d.xi;
}

// R(z + a)
inline cv_upoly shifted_R(const arc_local_data &d, const coeff_value &a)
{
    return d.R.shift(a);
}

// sum_m [y^(level - m w)] f_m(y) z^m along the arc lambda: the weighted
// initial polynomial of F at weight w for X. Along lambda + a y^xi at the
// level h0 this equals R(z + a).
inline cv_upoly weighted_initial(const bivariate_poly &f, const puiseux_series &lambda, const rational &w,
                                 const rational &level)
{
    const x_poly F = detail::arc_expansion(f, lambda.truncated(level + 1), level + 1);
    std::vector<coeff_value> c(F.size());
    for (std::size_t m = 0; m < F.size(); ++m) {
        c[m] = F[m].coeff(level - w * rational(static_cast<long>(m)));
    }
    return cv_upoly(std::move(c));
}

} // namespace hpinv
