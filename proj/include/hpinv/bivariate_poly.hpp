#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>
#include <hpinv/upoly.hpp>

namespace hpinv
{

enum class variable { x, y };

// Sparse polynomial in x, y over Q(i). Keys are (x-exponent, y-exponent);
// zero coefficients are never stored.
class bivariate_poly
{
public:
    using exponent = std::pair<unsigned, unsigned>;
    using term_map = std::map<exponent, gaussian_rational>;

    bivariate_poly() = default;
    bivariate_poly(gaussian_rational c)
    {
        add_term(0, 0, std::move(c));
    }

    static bivariate_poly monomial(gaussian_rational c, unsigned i, unsigned j)
    {
        bivariate_poly p;
        p.add_term(i, j, std::move(c));
        return p;
    }
    static bivariate_poly var(variable v)
    {
        return v == variable::x ? monomial(1, 1, 0) : monomial(1, 0, 1);
    }

    void add_term(unsigned i, unsigned j, const gaussian_rational &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace({i, j}, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                m_terms.erase(it);
            }
        }
    }

    const term_map &terms() const noexcept
    {
        return m_terms;
    }
    bool is_zero() const noexcept
    {
        return m_terms.empty();
    }
    std::size_t size() const noexcept
    {
        return m_terms.size();
    }
    gaussian_rational coeff(unsigned i, unsigned j) const
    {
        auto it = m_terms.find({i, j});
        return it == m_terms.end() ? gaussian_rational{} : it->second;
    }
    bool is_constant() const
    {
        return m_terms.empty() || (m_terms.size() == 1 && m_terms.begin()->first == exponent{0, 0});
    }

    unsigned degree(variable v) const
    {
        unsigned d = 0;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, v == variable::x ? e.first : e.second);
        }
        return d;
    }
    unsigned total_degree() const
    {
        unsigned d = 0;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, e.first + e.second);
        }
        return d;
    }

    // Multiplicity at the origin: least total degree of a stored term.
    unsigned order() const
    {
        if (is_zero()) {
            throw error(error_kind::zero_polynomial, "order of the zero polynomial");
        }
        unsigned k = ~0u;
        for (const auto &[e, c] : m_terms) {
            k = std::min(k, e.first + e.second);
        }
        return k;
    }

    bivariate_poly homogeneous_part(unsigned j) const
    {
        bivariate_poly h;
        for (const auto &[e, c] : m_terms) {
            if (e.first + e.second == j) {
                h.m_terms.emplace(e, c);
            }
        }
        return h;
    }

    bivariate_poly derivative(variable v) const
    {
        bivariate_poly d;
        for (const auto &[e, c] : m_terms) {
            const unsigned n = v == variable::x ? e.first : e.second;
            if (n == 0) {
                continue;
            }
            const gaussian_rational dc = c * gaussian_rational(static_cast<long>(n));
            if (v == variable::x) {
                d.add_term(e.first - 1, e.second, dc);
            } else {
                d.add_term(e.first, e.second - 1, dc);
            }
        }
        return d;
    }

    gaussian_rational operator()(const gaussian_rational &x, const gaussian_rational &y) const
    {
        gaussian_rational acc;
        for (const auto &[e, c] : m_terms) {
            acc += c * pow(x, e.first) * pow(y, e.second);
        }
        return acc;
    }

    // Coefficient of x^i as a polynomial in y.
    qi_upoly x_coefficient(unsigned i) const
    {
        std::vector<gaussian_rational> c;
        for (const auto &[e, v] : m_terms) {
            if (e.first == i) {
                if (c.size() <= e.second) {
                    c.resize(e.second + 1);
                }
                c[e.second] = v;
            }
        }
        return qi_upoly(std::move(c));
    }

    // The polynomial viewed in K[y][x]: entry i is the coefficient of x^i.
    std::vector<qi_upoly> as_x_poly() const
    {
        std::vector<qi_upoly> out(is_zero() ? 0 : degree(variable::x) + 1);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = x_coefficient(static_cast<unsigned>(i));
        }
        return out;
    }

    static bivariate_poly from_x_poly(const std::vector<qi_upoly> &p)
    {
        bivariate_poly out;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto &c = p[i].coeffs();
            for (std::size_t j = 0; j < c.size(); ++j) {
                out.add_term(static_cast<unsigned>(i), static_cast<unsigned>(j), c[j]);
            }
        }
        return out;
    }

    // Univariate form in z of H(z, 1) (dehomogenisation at y = 1).
    qi_upoly dehomogenize() const
    {
        std::vector<gaussian_rational> c(is_zero() ? 0 : degree(variable::x) + 1);
        for (const auto &[e, v] : m_terms) {
            c[e.first] += v;
        }
        return qi_upoly(std::move(c));
    }

    bivariate_poly operator-() const
    {
        bivariate_poly r;
        for (const auto &[e, c] : m_terms) {
            r.m_terms.emplace(e, -c);
        }
        return r;
    }
    bivariate_poly &operator+=(const bivariate_poly &o)
    {
        for (const auto &[e, c] : o.m_terms) {
            add_term(e.first, e.second, c);
        }
        return *this;
    }
    bivariate_poly &operator-=(const bivariate_poly &o)
    {
        for (const auto &[e, c] : o.m_terms) {
            add_term(e.first, e.second, -c);
        }
        return *this;
    }
    friend bivariate_poly operator+(bivariate_poly a, const bivariate_poly &b)
    {
        return a += b;
    }
    friend bivariate_poly operator-(bivariate_poly a, const bivariate_poly &b)
    {
        return a -= b;
    }
    friend bivariate_poly operator*(const bivariate_poly &a, const bivariate_poly &b)
    {
        bivariate_poly r;
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
            }
        }
        return r;
    }
    friend bivariate_poly operator*(const gaussian_rational &s, const bivariate_poly &p)
    {
        bivariate_poly r;
        if (s.is_zero()) {
            return r;
        }
        for (const auto &[e, c] : p.m_terms) {
            r.m_terms.emplace(e, s * c);
        }
        return r;
    }
    friend bool operator==(const bivariate_poly &a, const bivariate_poly &b)
    {
        return a.m_terms == b.m_terms;
    }

private:
    term_map m_terms;
};

inline bivariate_poly pow(const bivariate_poly &p, unsigned e)
{
    bivariate_poly r(1);
    for (unsigned k = 0; k < e; ++k) {
        r = r * p;
    }
    return r;
}

// Invertible linear change of coordinates (x, y) -> (a x + b y, c x + d y).
struct linear_map {
    gaussian_rational a{1}, b{0}, c{0}, d{1};

    gaussian_rational det() const
    {
        return a * d - b * c;
    }
};

// f(a x + b y, c x + d y)
inline bivariate_poly compose(const bivariate_poly &f, const linear_map &m)
{
    const bivariate_poly u = bivariate_poly::monomial(m.a, 1, 0) + bivariate_poly::monomial(m.b, 0, 1);
    const bivariate_poly v = bivariate_poly::monomial(m.c, 1, 0) + bivariate_poly::monomial(m.d, 0, 1);
    std::vector<bivariate_poly> up{bivariate_poly(1)};
    std::vector<bivariate_poly> vp{bivariate_poly(1)};
    for (unsigned k = 1; k <= f.degree(variable::x); ++k) {
        up.push_back(up.back() * u);
    }
    for (unsigned k = 1; k <= f.degree(variable::y); ++k) {
        vp.push_back(vp.back() * v);
    }
    bivariate_poly out;
    for (const auto &[e, c] : f.terms()) {
        out += c * (up[e.first] * vp[e.second]);
    }
    return out;
}

// f(x, y + s x)
inline bivariate_poly shear(const bivariate_poly &f, const gaussian_rational &s)
{
    return compose(f, linear_map{1, 0, s, 1});
}

namespace detail
{

using ypoly = qi_upoly;
using xy_poly = std::vector<ypoly>; // K[y][x], entry i = coefficient of x^i

inline void trim(xy_poly &p)
{
    while (!p.empty() && p.back().is_zero()) {
        p.pop_back();
    }
}

inline long deg(const xy_poly &p)
{
    return static_cast<long>(p.size()) - 1;
}

inline ypoly content(const xy_poly &p)
{
    ypoly g;
    for (const auto &c : p) {
        g = gcd(g, c);
        if (g.degree() == 0) {
            break;
        }
    }
    return g;
}

inline xy_poly divide(const xy_poly &p, const ypoly &d)
{
    xy_poly out;
    out.reserve(p.size());
    for (const auto &c : p) {
        out.push_back(exact_quotient(c, d));
    }
    return out;
}

inline xy_poly scale(const xy_poly &p, const ypoly &s)
{
    xy_poly out;
    out.reserve(p.size());
    for (const auto &c : p) {
        out.push_back(c * s);
    }
    trim(out);
    return out;
}

// lc(b)^(deg a - deg b + 1) * a  mod  b, in K[y][x].
inline xy_poly pseudo_remainder(xy_poly a, const xy_poly &b)
{
    const long db = deg(b);
    const long delta = deg(a) - db;
    const ypoly &lb = b.back();
    long steps = 0;
    while (deg(a) >= db && !a.empty()) {
        const ypoly la = a.back();
        const long shift = deg(a) - db;
        for (auto &c : a) {
            c = c * lb;
        }
        for (long j = 0; j <= db; ++j) {
            a[static_cast<std::size_t>(j + shift)] = a[static_cast<std::size_t>(j + shift)] - la * b[static_cast<std::size_t>(j)];
        }
        trim(a);
        ++steps;
    }
    ypoly extra = qi_upoly{gaussian_rational(1)};
    for (long k = steps; k < delta + 1; ++k) {
        extra = extra * lb;
    }
    return scale(a, extra);
}

inline ypoly ypow(const ypoly &p, long e)
{
    ypoly r{gaussian_rational(1)};
    for (long k = 0; k < e; ++k) {
        r = r * p;
    }
    return r;
}

} // namespace detail

// Greatest common divisor in Q(i)[y][x] by the subresultant remainder
// sequence in x. The result is normalised so that its leading coefficient
// (in x, then in y) is 1.
inline bivariate_poly gcd_in_x(const bivariate_poly &p, const bivariate_poly &q)
{
    using namespace detail;
    xy_poly a = p.as_x_poly();
    xy_poly b = q.as_x_poly();
    if (a.empty() && b.empty()) {
        return {};
    }
    if (deg(b) > deg(a)) {
        std::swap(a, b);
    }
    if (b.empty()) {
        const ypoly lc = a.back();
        return gaussian_rational(1) / lc.lc() * bivariate_poly::from_x_poly(a);
    }
    const ypoly ca = content(a);
    const ypoly cb = content(b);
    const ypoly d = gcd(ca, cb);
    a = divide(a, ca);
    b = divide(b, cb);
    ypoly g{gaussian_rational(1)};
    ypoly h{gaussian_rational(1)};
    for (;;) {
        const long delta = deg(a) - deg(b);
        xy_poly r = pseudo_remainder(a, b);
        if (r.empty()) {
            break;
        }
        if (deg(r) == 0) {
            b = xy_poly{ypoly{gaussian_rational(1)}};
            break;
        }
        a = std::move(b);
        b = divide(r, g * ypow(h, delta));
        g = a.back();
        if (delta == 0) {
            // h stays
        } else if (delta == 1) {
            h = g;
        } else {
            h = exact_quotient(ypow(g, delta), ypow(h, delta - 1));
        }
    }
    xy_poly result = scale(divide(b, content(b)), d);
    bivariate_poly out = bivariate_poly::from_x_poly(result);
    const gaussian_rational lead = result.back().lc();
    return lead.inverse() * out;
}

} // namespace hpinv
