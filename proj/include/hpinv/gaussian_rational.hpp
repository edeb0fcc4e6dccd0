#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include <hpinv/error.hpp>

namespace hpinv
{

using rational = mpq_class;
using integer = mpz_class;

inline rational make_rational(long num, long den = 1)
{
    rational r{integer(num), integer(den)};
    r.canonicalize();
    return r;
}

inline std::string to_string(const rational &q)
{
    return q.get_str();
}

inline std::strong_ordering compare(const rational &a, const rational &b)
{
    const int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// Element of Q(i). gmp keeps both parts canonical (positive, reduced denominators).
class gaussian_rational
{
public:
    gaussian_rational() = default;
    gaussian_rational(long re) : m_re(re) {}
    gaussian_rational(rational re) : m_re(std::move(re)) {}
    gaussian_rational(rational re, rational im) : m_re(std::move(re)), m_im(std::move(im)) {}

    static gaussian_rational imaginary_unit()
    {
        return {rational(0), rational(1)};
    }

    const rational &re() const noexcept
    {
        return m_re;
    }
    const rational &im() const noexcept
    {
        return m_im;
    }

    bool is_zero() const
    {
        return sgn(m_re) == 0 && sgn(m_im) == 0;
    }
    bool is_real() const
    {
        return sgn(m_im) == 0;
    }
    bool is_one() const
    {
        return m_re == 1 && sgn(m_im) == 0;
    }

    gaussian_rational conj() const
    {
        return {m_re, -m_im};
    }
    // |z|^2
    rational norm() const
    {
        return m_re * m_re + m_im * m_im;
    }

    gaussian_rational inverse() const
    {
        if (is_zero()) {
            throw error(error_kind::division_by_zero, "inverse of zero gaussian rational");
        }
        const rational n = norm();
        return {m_re / n, -m_im / n};
    }

    gaussian_rational operator-() const
    {
        return {-m_re, -m_im};
    }

    gaussian_rational &operator+=(const gaussian_rational &o)
    {
        m_re += o.m_re;
        m_im += o.m_im;
        return *this;
    }
    gaussian_rational &operator-=(const gaussian_rational &o)
    {
        m_re -= o.m_re;
        m_im -= o.m_im;
        return *this;
    }
    gaussian_rational &operator*=(const gaussian_rational &o)
    {
        if (o.is_real()) {
            m_re *= o.m_re;
            m_im *= o.m_re;
            return *this;
        }
        rational re = m_re * o.m_re - m_im * o.m_im;
        rational im = m_re * o.m_im + m_im * o.m_re;
        m_re = std::move(re);
        m_im = std::move(im);
        return *this;
    }
    gaussian_rational &operator/=(const gaussian_rational &o)
    {
        if (o.is_real()) {
            if (sgn(o.m_re) == 0) {
                throw error(error_kind::division_by_zero, "division by zero gaussian rational");
            }
            m_re /= o.m_re;
            m_im /= o.m_re;
            return *this;
        }
        return *this *= o.inverse();
    }

    friend gaussian_rational operator+(gaussian_rational a, const gaussian_rational &b)
    {
        return a += b;
    }
    friend gaussian_rational operator-(gaussian_rational a, const gaussian_rational &b)
    {
        return a -= b;
    }
    friend gaussian_rational operator*(gaussian_rational a, const gaussian_rational &b)
    {
        return a *= b;
    }
    friend gaussian_rational operator/(gaussian_rational a, const gaussian_rational &b)
    {
        return a /= b;
    }

    friend bool operator==(const gaussian_rational &a, const gaussian_rational &b)
    {
        return a.m_re == b.m_re && a.m_im == b.m_im;
    }

    // Lexicographic (Re, Im) order used by canonical forms.
    friend std::strong_ordering operator<=>(const gaussian_rational &a, const gaussian_rational &b)
    {
        if (auto c = compare(a.m_re, b.m_re); c != 0) {
            return c;
        }
        return compare(a.m_im, b.m_im);
    }

private:
    rational m_re{0};
    rational m_im{0};
};

inline gaussian_rational pow(gaussian_rational base, long e)
{
    if (e < 0) {
        return pow(base.inverse(), -e);
    }
    gaussian_rational r(1);
    while (e > 0) {
        if (e & 1) {
            r *= base;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return r;
}

// "a/b", "c/d i" or "a/b+c/d i"; the imaginary unit alone is written "i".
inline std::string to_string(const gaussian_rational &z)
{
    if (z.is_real()) {
        return z.re().get_str();
    }
    auto imag_part = [](const rational &q) -> std::string {
        if (q == 1) {
            return "i";
        }
        if (q == -1) {
            return "-i";
        }
        return q.get_str() + " i";
    };
    if (sgn(z.re()) == 0) {
        return imag_part(z.im());
    }
    std::string s = z.re().get_str();
    const std::string im = imag_part(z.im());
    if (im.front() != '-') {
        s += '+';
    }
    return s + im;
}

inline std::ostream &operator<<(std::ostream &os, const gaussian_rational &z)
{
    return os << to_string(z);
}

inline std::size_t hash_value(const gaussian_rational &z)
{
    std::hash<std::string> h;
    return h(z.re().get_str()) * 31u + h(z.im().get_str());
}

} // namespace hpinv
