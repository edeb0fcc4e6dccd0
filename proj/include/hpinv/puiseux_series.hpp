#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <hpinv/coeff.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

inline integer lcm(const integer &a, const integer &b)
{
    integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline rational min_opt(const std::optional<rational> &a, const rational &b)
{
    return a && *a < b ? *a : b;
}

// Finite fractional power series sum c_e y^e with rational exponents e >= 0.
// `truncation` = T means every exponent >= T is unknown; no truncation means
// the series is known exactly (a Puiseux polynomial). Exact zeros are never
// stored; ball coefficients are kept even when they may vanish.
class puiseux_series
{
public:
    using term_map = std::map<rational, coeff_value>;

    puiseux_series() = default;
    explicit puiseux_series(std::optional<rational> truncation) : m_trunc(std::move(truncation)) {}

    static puiseux_series monomial(coeff_value c, rational e)
    {
        puiseux_series s;
        s.add_term(std::move(e), std::move(c));
        return s;
    }

    void add_term(const rational &e, const coeff_value &c)
    {
        if (m_trunc && e >= *m_trunc) {
            return;
        }
        if (detail::structurally_zero(c)) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(e, c);
        if (!inserted) {
            it->second = it->second + c;
            if (detail::structurally_zero(it->second)) {
                m_terms.erase(it);
            }
        }
    }
    // Overwrites a coefficient (used to pin structural zeros).
    void set_term(const rational &e, const coeff_value &c)
    {
        if (detail::structurally_zero(c)) {
            m_terms.erase(e);
        } else if (!m_trunc || e < *m_trunc) {
            m_terms.insert_or_assign(e, c);
        }
    }

    const term_map &terms() const noexcept
    {
        return m_terms;
    }
    const std::optional<rational> &truncation() const noexcept
    {
        return m_trunc;
    }
    bool is_exact() const noexcept
    {
        return !m_trunc.has_value();
    }
    bool empty() const noexcept
    {
        return m_terms.empty();
    }
    coeff_value coeff(const rational &e) const
    {
        auto it = m_terms.find(e);
        return it == m_terms.end() ? coeff_value{} : it->second;
    }

    // Least common denominator of the stored exponents.
    integer ramification() const
    {
        integer n = 1;
        for (const auto &[e, c] : m_terms) {
            n = lcm(n, e.get_den());
        }
        return n;
    }

    bool all_coefficients_exact() const
    {
        return std::all_of(m_terms.begin(), m_terms.end(), [](const auto &t) { return t.second.is_exact(); });
    }

    // Smallest stored exponent: a lower bound on the order.
    std::optional<rational> min_exponent() const
    {
        if (m_terms.empty()) {
            return std::nullopt;
        }
        return m_terms.begin()->first;
    }

    struct order_info {
        // First exponent whose coefficient is certified nonzero.
        std::optional<rational> order;
        // First exponent (below `order`) whose coefficient could not be
        // decided; absent when every earlier coefficient is exactly zero.
        std::optional<rational> first_unknown;
    };

    order_info order() const
    {
        order_info info;
        for (const auto &[e, c] : m_terms) {
            const auto z = c.test_zero();
            if (z == zero_test::nonzero) {
                info.order = e;
                return info;
            }
            if (z == zero_test::unknown && !info.first_unknown) {
                info.first_unknown = e;
            }
        }
        return info;
    }

    puiseux_series truncated(const rational &t) const
    {
        puiseux_series r(min_opt(m_trunc, t));
        for (const auto &[e, c] : m_terms) {
            if (e < *r.m_trunc) {
                r.m_terms.emplace(e, c);
            }
        }
        return r;
    }

    // Keeps only the terms below t, but stays exact if nothing was dropped.
    puiseux_series cut(const rational &t) const
    {
        if (m_trunc || (!m_terms.empty() && m_terms.rbegin()->first >= t)) {
            return truncated(t);
        }
        return *this;
    }

    puiseux_series operator-() const
    {
        puiseux_series r(m_trunc);
        for (const auto &[e, c] : m_terms) {
            r.m_terms.emplace(e, -c);
        }
        return r;
    }

    friend puiseux_series operator+(const puiseux_series &a, const puiseux_series &b)
    {
        std::optional<rational> t = a.m_trunc;
        if (b.m_trunc) {
            t = min_opt(t, *b.m_trunc);
        }
        puiseux_series r(t);
        for (const auto &[e, c] : a.m_terms) {
            r.add_term(e, c);
        }
        for (const auto &[e, c] : b.m_terms) {
            r.add_term(e, c);
        }
        return r;
    }
    friend puiseux_series operator-(const puiseux_series &a, const puiseux_series &b)
    {
        return a + (-b);
    }

    // Product. Terms at or above `cap` are dropped; the result is marked
    // truncated only where something was actually lost.
    static puiseux_series multiply(const puiseux_series &a, const puiseux_series &b,
                                   const std::optional<rational> &cap = std::nullopt)
    {
        // An unknown tail of u at order >= tu meets v only from ord(v) onward.
        auto tail = [](const puiseux_series &u, const puiseux_series &v) -> std::optional<rational> {
            if (!u.m_trunc) {
                return std::nullopt;
            }
            if (v.m_terms.empty()) {
                return v.m_trunc ? std::optional<rational>(*u.m_trunc + *v.m_trunc) : std::nullopt;
            }
            return *u.m_trunc + v.m_terms.begin()->first;
        };
        std::optional<rational> t;
        if (auto x = tail(a, b)) {
            t = min_opt(t, *x);
        }
        if (auto x = tail(b, a)) {
            t = min_opt(t, *x);
        }
        std::optional<rational> lim = t;
        if (cap) {
            lim = min_opt(lim, *cap);
        }
        puiseux_series r(lim);
        bool dropped = false;
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                rational e = ea + eb;
                if (lim && e >= *lim) {
                    dropped = dropped || !t || e < *t;
                    break;
                }
                r.add_term(e, ca * cb);
            }
        }
        r.m_trunc = dropped ? lim : t;
        return r;
    }

    friend puiseux_series operator*(const puiseux_series &a, const puiseux_series &b)
    {
        return multiply(a, b);
    }
    friend puiseux_series operator*(const coeff_value &s, const puiseux_series &p)
    {
        puiseux_series r(p.m_trunc);
        for (const auto &[e, c] : p.m_terms) {
            r.add_term(e, s * c);
        }
        return r;
    }

    // Numeric value at a positive real y (principal branch of y^e).
    std::complex<double> evaluate(double y) const
    {
        std::complex<double> acc;
        for (const auto &[e, c] : m_terms) {
            acc += c.approx() * std::pow(y, e.get_d());
        }
        return acc;
    }

    std::string to_string(const std::string &var = "y") const
    {
        std::string s;
        for (const auto &[e, c] : m_terms) {
            if (!s.empty()) {
                s += " + ";
            }
            s += "(" + c.to_string() + ")";
            if (e != 0) {
                s += "*" + var + "^" + e.get_str();
            }
        }
        if (s.empty()) {
            s = "0";
        }
        if (m_trunc) {
            s += " + O(" + var + "^" + m_trunc->get_str() + ")";
        }
        return s;
    }

private:
    term_map m_terms;
    std::optional<rational> m_trunc;
};

} // namespace hpinv
