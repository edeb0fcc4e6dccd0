#pragma once

#include <cstddef>
#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

namespace detail
{

// Exactly zero as opposed to possibly zero; C decides through is_zero().
template <typename C> bool structurally_zero(const C &c)
{
    return c.is_zero();
}

} // namespace detail

// Dense univariate polynomial, coefficients stored from degree 0 upward.
// Trailing coefficients that are exactly zero are trimmed; ball coefficients
// are never dropped even if they contain zero.
template <typename C>
class upoly
{
public:
    upoly() = default;
    upoly(std::initializer_list<C> cs) : m_c(cs)
    {
        trim();
    }
    explicit upoly(std::vector<C> cs) : m_c(std::move(cs))
    {
        trim();
    }

    static upoly monomial(C c, std::size_t deg)
    {
        std::vector<C> v(deg + 1);
        v[deg] = std::move(c);
        return upoly(std::move(v));
    }

    bool is_zero() const noexcept
    {
        return m_c.empty();
    }
    // -1 for the zero polynomial.
    long degree() const noexcept
    {
        return static_cast<long>(m_c.size()) - 1;
    }
    const C &lc() const
    {
        return m_c.back();
    }
    const std::vector<C> &coeffs() const noexcept
    {
        return m_c;
    }
    C coeff(std::size_t i) const
    {
        return i < m_c.size() ? m_c[i] : C{};
    }

    C operator()(const C &z) const
    {
        C acc{};
        for (auto it = m_c.rbegin(); it != m_c.rend(); ++it) {
            acc = acc * z + *it;
        }
        return acc;
    }

    upoly derivative() const
    {
        if (m_c.size() <= 1) {
            return {};
        }
        std::vector<C> d(m_c.size() - 1);
        for (std::size_t i = 1; i < m_c.size(); ++i) {
            d[i - 1] = m_c[i] * C(static_cast<long>(i));
        }
        return upoly(std::move(d));
    }

    // p(z + a), by repeated synthetic division.
    upoly shift(const C &a) const
    {
        std::vector<C> c = m_c;
        const std::size_t n = c.size();
        for (std::size_t k = 0; k + 1 < n; ++k) {
            for (std::size_t j = n - 1; j > k; --j) {
                c[j - 1] = c[j - 1] + a * c[j];
            }
        }
        return upoly(std::move(c));
    }

    upoly operator-() const
    {
        std::vector<C> c;
        c.reserve(m_c.size());
        for (const auto &x : m_c) {
            c.push_back(-x);
        }
        return upoly(std::move(c));
    }

    friend upoly operator+(const upoly &a, const upoly &b)
    {
        std::vector<C> c(std::max(a.m_c.size(), b.m_c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < a.m_c.size() && i < b.m_c.size()) {
                c[i] = a.m_c[i] + b.m_c[i];
            } else {
                c[i] = i < a.m_c.size() ? a.m_c[i] : b.m_c[i];
            }
        }
        return upoly(std::move(c));
    }
    friend upoly operator-(const upoly &a, const upoly &b)
    {
        return a + (-b);
    }
    friend upoly operator*(const upoly &a, const upoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<C> c(a.m_c.size() + b.m_c.size() - 1);
        for (std::size_t i = 0; i < a.m_c.size(); ++i) {
            if (detail::structurally_zero(a.m_c[i])) {
                continue;
            }
            for (std::size_t j = 0; j < b.m_c.size(); ++j) {
                c[i + j] = c[i + j] + a.m_c[i] * b.m_c[j];
            }
        }
        return upoly(std::move(c));
    }
    friend upoly operator*(const C &s, const upoly &p)
    {
        std::vector<C> c;
        c.reserve(p.m_c.size());
        for (const auto &x : p.m_c) {
            c.push_back(s * x);
        }
        return upoly(std::move(c));
    }

    friend bool operator==(const upoly &a, const upoly &b)
    {
        return a.m_c == b.m_c;
    }

private:
    void trim()
    {
        while (!m_c.empty() && detail::structurally_zero(m_c.back())) {
            m_c.pop_back();
        }
    }

    std::vector<C> m_c;
};

using qi_upoly = upoly<gaussian_rational>;

// Euclidean division over the field Q(i).
inline std::pair<qi_upoly, qi_upoly> divmod(const qi_upoly &a, const qi_upoly &b)
{
    if (b.is_zero()) {
        throw error(error_kind::division_by_zero, "polynomial division by zero");
    }
    if (a.degree() < b.degree()) {
        return {qi_upoly{}, a};
    }
    std::vector<gaussian_rational> r = a.coeffs();
    std::vector<gaussian_rational> q(a.coeffs().size() - b.coeffs().size() + 1);
    const auto inv_lc = b.lc().inverse();
    const std::size_t db = b.coeffs().size() - 1;
    for (std::size_t k = q.size(); k-- > 0;) {
        const gaussian_rational f = r[k + db] * inv_lc;
        if (f.is_zero()) {
            continue;
        }
        q[k] = f;
        for (std::size_t j = 0; j <= db; ++j) {
            r[k + j] -= f * b.coeffs()[j];
        }
    }
    r.resize(db);
    return {qi_upoly(std::move(q)), qi_upoly(std::move(r))};
}

inline qi_upoly exact_quotient(const qi_upoly &a, const qi_upoly &b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) {
        throw error(error_kind::invalid_argument, "polynomial division is not exact");
    }
    return q;
}

inline qi_upoly monic(const qi_upoly &p)
{
    if (p.is_zero()) {
        return p;
    }
    return p.lc().inverse() * p;
}

// Monic gcd; gcd(0, 0) = 0.
inline qi_upoly gcd(qi_upoly a, qi_upoly b)
{
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

// Yun's algorithm: p = lc(p) * prod_i factors[i]^(i+1), each factor monic and
// squarefree, pairwise coprime. Trailing entries may be the constant 1.
inline std::vector<qi_upoly> squarefree_decomposition(const qi_upoly &p)
{
    if (p.is_zero()) {
        throw error(error_kind::zero_polynomial, "squarefree decomposition of zero");
    }
    std::vector<qi_upoly> out;
    if (p.degree() == 0) {
        return out;
    }
    const qi_upoly pm = monic(p);
    const qi_upoly dp = pm.derivative();
    qi_upoly a = gcd(pm, dp);
    qi_upoly b = exact_quotient(pm, a);
    qi_upoly c = exact_quotient(dp, a);
    qi_upoly d = c - b.derivative();
    while (b.degree() > 0) {
        qi_upoly g = gcd(b, d);
        out.push_back(g);
        b = exact_quotient(b, g);
        c = exact_quotient(d, g);
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) {
        out.pop_back();
    }
    return out;
}

inline bool is_squarefree(const qi_upoly &p)
{
    return gcd(p, p.derivative()).degree() <= 0;
}

template <typename C>
std::string to_string(const upoly<C> &p, const std::string &var = "z")
{
    if (p.is_zero()) {
        return "0";
    }
    std::string s;
    for (long i = p.degree(); i >= 0; --i) {
        const auto &c = p.coeffs()[static_cast<std::size_t>(i)];
        if (detail::structurally_zero(c)) {
            continue;
        }
        if (!s.empty()) {
            s += " + ";
        }
        s += "(" + to_string(c) + ")";
        if (i > 0) {
            s += "*" + var;
        }
        if (i > 1) {
            s += "^" + std::to_string(i);
        }
    }
    return s;
}

} // namespace hpinv
