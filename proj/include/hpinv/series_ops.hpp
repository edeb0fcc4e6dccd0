#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/puiseux_series.hpp>

namespace hpinv
{

// Polynomial in x whose coefficients are Puiseux series in y:
// G(x, y) = sum_i x^i G[i](y).
using x_poly = std::vector<puiseux_series>;

inline x_poly to_x_poly(const bivariate_poly &p)
{
    x_poly g(p.is_zero() ? 0 : p.degree(variable::x) + 1);
    for (const auto &[e, c] : p.terms()) {
        g[e.first].add_term(rational(e.second), coeff_value(c));
    }
    return g;
}

inline integer binomial(unsigned long n, unsigned long k)
{
    integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Powers s^0 .. s^n, each cut at `cap` when one is given.
inline std::vector<puiseux_series> series_powers(const puiseux_series &s, std::size_t n,
                                                 const std::optional<rational> &cap)
{
    std::vector<puiseux_series> pw;
    pw.reserve(n + 1);
    puiseux_series one = puiseux_series::monomial(coeff_value(1), rational(0));
    pw.push_back(cap ? one.cut(*cap) : one);
    for (std::size_t k = 1; k <= n; ++k) {
        pw.push_back(puiseux_series::multiply(pw.back(), s, cap));
    }
    return pw;
}

// G(x + s) by the binomial formula; coefficient i is cut at caps[i] (no cap
// for nullopt). Caps may differ per degree, which the Newton-Puiseux
// recursion uses for weighted truncation.
inline x_poly taylor_shift(const x_poly &g, const puiseux_series &s, const std::vector<std::optional<rational>> &caps)
{
    const std::size_t n = g.size();
    x_poly out(n);
    if (n == 0) {
        return out;
    }
    // Powers are kept whole: cutting them would lose their order, which bounds
    // the unknown tails of truncated coefficients below.
    const auto pw = series_powers(s, n - 1, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        const std::optional<rational> cap = i < caps.size() ? caps[i] : std::nullopt;
        puiseux_series acc;
        for (std::size_t m = i; m < n; ++m) {
            if (g[m].empty() && !g[m].truncation()) {
                continue;
            }
            const coeff_value b(gaussian_rational(rational(binomial(m, i))));
            acc = acc + b * puiseux_series::multiply(g[m], pw[m - i], cap);
        }
        out[i] = cap ? acc.cut(*cap) : acc;
    }
    return out;
}

inline x_poly taylor_shift(const x_poly &g, const puiseux_series &s, const std::optional<rational> &cap)
{
    return taylor_shift(g, s, std::vector<std::optional<rational>>(g.size(), cap));
}

// The arc as a finite Puiseux polynomial: only exponents below T are used.
inline puiseux_series arc_prefix(const puiseux_series &lambda, const rational &T)
{
    puiseux_series p;
    for (const auto &[e, c] : lambda.terms()) {
        if (e < T) {
            p.add_term(e, c);
        }
    }
    return p;
}

// Coefficients f_0..f_deg of X^i in F(X, Y) = p(X + lambda(Y), Y), each
// truncated at T.
inline std::vector<puiseux_series> shift_expand(const bivariate_poly &p, const puiseux_series &lambda,
                                                const rational &T)
{
    return taylor_shift(to_x_poly(p), arc_prefix(lambda, T), std::optional<rational>(T));
}

// p(lambda(y), y) truncated at T, evaluated by Horner's rule in x. This is
// deliberately a separate code path from shift_expand.
inline puiseux_series substitute_arc(const bivariate_poly &p, const puiseux_series &lambda, const rational &T)
{
    const x_poly g = to_x_poly(p);
    const puiseux_series lam = arc_prefix(lambda, T);
    puiseux_series acc;
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        acc = puiseux_series::multiply(acc, lam, T) + it->cut(T);
    }
    return acc.truncated(T);
}

} // namespace hpinv
