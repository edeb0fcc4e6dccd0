#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <mpfr.h>

#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

// Owning RAII handle around an mpfr_t. Precision is fixed at construction
// and follows copies.
class big_float
{
public:
    explicit big_float(mpfr_prec_t prec = 64)
    {
        mpfr_init2(m_v, prec);
        mpfr_set_zero(m_v, 1);
    }
    big_float(double d, mpfr_prec_t prec)
    {
        mpfr_init2(m_v, prec);
        mpfr_set_d(m_v, d, MPFR_RNDN);
    }
    big_float(const big_float &o)
    {
        mpfr_init2(m_v, mpfr_get_prec(o.m_v));
        mpfr_set(m_v, o.m_v, MPFR_RNDN);
    }
    big_float(big_float &&o) noexcept
    {
        mpfr_init2(m_v, MPFR_PREC_MIN);
        mpfr_swap(m_v, o.m_v);
    }
    big_float &operator=(const big_float &o)
    {
        if (this != &o) {
            mpfr_set_prec(m_v, mpfr_get_prec(o.m_v));
            mpfr_set(m_v, o.m_v, MPFR_RNDN);
        }
        return *this;
    }
    big_float &operator=(big_float &&o) noexcept
    {
        mpfr_swap(m_v, o.m_v);
        return *this;
    }
    ~big_float()
    {
        mpfr_clear(m_v);
    }

    mpfr_ptr get() noexcept
    {
        return m_v;
    }
    mpfr_srcptr get() const noexcept
    {
        return m_v;
    }
    mpfr_prec_t prec() const noexcept
    {
        return mpfr_get_prec(m_v);
    }

    bool is_zero() const
    {
        return mpfr_zero_p(m_v) != 0;
    }
    int sign() const
    {
        return mpfr_sgn(m_v);
    }
    double to_double() const
    {
        return mpfr_get_d(m_v, MPFR_RNDN);
    }
    long double to_long_double() const
    {
        return mpfr_get_ld(m_v, MPFR_RNDN);
    }
    // Binary exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
    long exponent() const
    {
        return mpfr_get_exp(m_v);
    }

    std::string to_string(int digits = 20) const
    {
        char *buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, m_v);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

private:
    mpfr_t m_v;
};

namespace detail
{

inline mpfr_prec_t prec_of(const big_float &a, const big_float &b)
{
    return std::max(a.prec(), b.prec());
}

} // namespace detail

// Midpoint arithmetic without error tracking; used by iterative root finders.
struct mp_complex {
    big_float re;
    big_float im;

    explicit mp_complex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    mp_complex(big_float r, big_float i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const
    {
        return detail::prec_of(re, im);
    }

    static mp_complex from(const gaussian_rational &z, mpfr_prec_t prec)
    {
        mp_complex c(prec);
        mpfr_set_q(c.re.get(), z.re().get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(c.im.get(), z.im().get_mpq_t(), MPFR_RNDN);
        return c;
    }
    static mp_complex from(double re, double im, mpfr_prec_t prec)
    {
        return {big_float(re, prec), big_float(im, prec)};
    }
};

inline mp_complex operator+(const mp_complex &a, const mp_complex &b)
{
    mp_complex r(std::max(a.prec(), b.prec()));
    mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    return r;
}

inline mp_complex operator-(const mp_complex &a, const mp_complex &b)
{
    mp_complex r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    return r;
}

inline mp_complex operator*(const mp_complex &a, const mp_complex &b)
{
    mp_complex r(std::max(a.prec(), b.prec()));
    mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    return r;
}

inline mp_complex operator/(const mp_complex &a, const mp_complex &b)
{
    const auto p = std::max(a.prec(), b.prec()) + 16;
    big_float n(p);
    mpfr_fmma(n.get(), b.re.get(), b.re.get(), b.im.get(), b.im.get(), MPFR_RNDN);
    mp_complex num(p);
    // a * conj(b)
    mpfr_fmma(num.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_fmms(num.im.get(), a.im.get(), b.re.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mp_complex r(std::max(a.prec(), b.prec()));
    mpfr_div(r.re.get(), num.re.get(), n.get(), MPFR_RNDN);
    mpfr_div(r.im.get(), num.im.get(), n.get(), MPFR_RNDN);
    return r;
}

// |z| rounded in the requested direction, at 64 bits.
inline big_float abs_bound(const mp_complex &z, mpfr_rnd_t rnd)
{
    big_float r(64);
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), rnd);
    return r;
}

inline double abs_approx(const mp_complex &z)
{
    return abs_bound(z, MPFR_RNDN).to_double();
}

} // namespace hpinv
