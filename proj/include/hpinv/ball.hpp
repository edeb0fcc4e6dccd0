#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <utility>

#include <mpfr.h>

#include <hpinv/big_float.hpp>
#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

// Complex disk {mid + e : |e| <= rad}. Midpoint components carry the working
// precision; the radius is a 64-bit float that is only ever rounded upward,
// so every operation returns a disk containing all possible exact results.
class ball_complex
{
public:
    explicit ball_complex(mpfr_prec_t prec = 256) : m_mid(prec), m_rad(64) {}
    ball_complex(mp_complex mid, big_float rad) : m_mid(std::move(mid)), m_rad(64)
    {
        mpfr_set(m_rad.get(), rad.get(), MPFR_RNDU);
    }

    static ball_complex exact(const gaussian_rational &z, mpfr_prec_t prec)
    {
        ball_complex b(prec);
        const int tr = mpfr_set_q(b.m_mid.re.get(), z.re().get_mpq_t(), MPFR_RNDN);
        const int ti = mpfr_set_q(b.m_mid.im.get(), z.im().get_mpq_t(), MPFR_RNDN);
        b.add_rounding_error(tr, ti, 1);
        return b;
    }

    const mp_complex &mid() const noexcept
    {
        return m_mid;
    }
    const big_float &rad() const noexcept
    {
        return m_rad;
    }
    mpfr_prec_t prec() const
    {
        return m_mid.prec();
    }

    // Upper bound of |z| over the disk.
    big_float abs_upper() const
    {
        big_float r = abs_bound(m_mid, MPFR_RNDU);
        mpfr_add(r.get(), r.get(), m_rad.get(), MPFR_RNDU);
        return r;
    }
    // Lower bound of |z| over the disk (zero if the disk contains the origin).
    big_float abs_lower() const
    {
        big_float r = abs_bound(m_mid, MPFR_RNDD);
        mpfr_sub(r.get(), r.get(), m_rad.get(), MPFR_RNDD);
        if (r.sign() < 0) {
            mpfr_set_zero(r.get(), 1);
        }
        return r;
    }

    bool certified_nonzero() const
    {
        big_float m = abs_bound(m_mid, MPFR_RNDD);
        return mpfr_greater_p(m.get(), m_rad.get()) != 0;
    }
    bool contains_zero() const
    {
        return !certified_nonzero();
    }

    bool overlaps(const ball_complex &o) const
    {
        const mp_complex d = m_mid - o.m_mid;
        // The difference is computed with rounding; pad by its own error.
        big_float dist = abs_bound(d, MPFR_RNDD);
        big_float slack(64);
        mpfr_add(slack.get(), m_rad.get(), o.m_rad.get(), MPFR_RNDU);
        big_float pad = abs_bound(d, MPFR_RNDU);
        mpfr_mul_2si(pad.get(), pad.get(), 2 - static_cast<long>(d.prec()), MPFR_RNDU);
        mpfr_add(slack.get(), slack.get(), pad.get(), MPFR_RNDU);
        return mpfr_lessequal_p(dist.get(), slack.get()) != 0;
    }

    std::complex<double> approx() const
    {
        return {m_mid.re.to_double(), m_mid.im.to_double()};
    }

    ball_complex operator-() const
    {
        ball_complex r(*this);
        mpfr_neg(r.m_mid.re.get(), r.m_mid.re.get(), MPFR_RNDN);
        mpfr_neg(r.m_mid.im.get(), r.m_mid.im.get(), MPFR_RNDN);
        return r;
    }

    friend ball_complex operator+(const ball_complex &a, const ball_complex &b)
    {
        return add_sub(a, b, false);
    }
    friend ball_complex operator-(const ball_complex &a, const ball_complex &b)
    {
        return add_sub(a, b, true);
    }

    friend ball_complex operator*(const ball_complex &a, const ball_complex &b)
    {
        ball_complex r(std::max(a.prec(), b.prec()));
        const int tr = mpfr_fmms(r.m_mid.re.get(), a.m_mid.re.get(), b.m_mid.re.get(), a.m_mid.im.get(),
                                 b.m_mid.im.get(), MPFR_RNDN);
        const int ti = mpfr_fmma(r.m_mid.im.get(), a.m_mid.re.get(), b.m_mid.im.get(), a.m_mid.im.get(),
                                 b.m_mid.re.get(), MPFR_RNDN);
        // |a| rb + |b| ra + ra rb
        big_float t(64);
        big_float u(64);
        mpfr_mul(t.get(), abs_bound(a.m_mid, MPFR_RNDU).get(), b.m_rad.get(), MPFR_RNDU);
        mpfr_mul(u.get(), abs_bound(b.m_mid, MPFR_RNDU).get(), a.m_rad.get(), MPFR_RNDU);
        mpfr_add(t.get(), t.get(), u.get(), MPFR_RNDU);
        mpfr_mul(u.get(), a.m_rad.get(), b.m_rad.get(), MPFR_RNDU);
        mpfr_add(r.m_rad.get(), t.get(), u.get(), MPFR_RNDU);
        r.add_rounding_error(tr, ti, 1);
        return r;
    }

    ball_complex inverse() const
    {
        big_float lo = abs_bound(m_mid, MPFR_RNDD);
        if (mpfr_lessequal_p(lo.get(), m_rad.get())) {
            throw indeterminate("inverse of a ball that contains zero");
        }
        const auto p = prec();
        big_float n(p);
        const int tn = mpfr_fmma(n.get(), m_mid.re.get(), m_mid.re.get(), m_mid.im.get(), m_mid.im.get(), MPFR_RNDN);
        ball_complex r(p);
        const int tr = mpfr_div(r.m_mid.re.get(), m_mid.re.get(), n.get(), MPFR_RNDN);
        const int ti = mpfr_div(r.m_mid.im.get(), m_mid.im.get(), n.get(), MPFR_RNDN);
        mpfr_neg(r.m_mid.im.get(), r.m_mid.im.get(), MPFR_RNDN);
        // propagated: rad / (|m| (|m| - rad))
        big_float den(64);
        mpfr_sub(den.get(), lo.get(), m_rad.get(), MPFR_RNDD);
        mpfr_mul(den.get(), den.get(), lo.get(), MPFR_RNDD);
        mpfr_div(r.m_rad.get(), m_rad.get(), den.get(), MPFR_RNDU);
        const bool inexact = tn != 0 || tr != 0 || ti != 0;
        r.add_rounding_error(inexact, inexact, 3);
        return r;
    }

    friend ball_complex operator/(const ball_complex &a, const ball_complex &b)
    {
        return a * b.inverse();
    }

    // Enlarges the radius by `extra` (rounded up).
    void inflate(const big_float &extra)
    {
        mpfr_add(m_rad.get(), m_rad.get(), extra.get(), MPFR_RNDU);
    }

    std::string to_string(int digits = 17) const
    {
        return "[" + m_mid.re.to_string(digits) + (m_mid.im.sign() < 0 ? "" : "+") + m_mid.im.to_string(digits) +
               "i +/- " + m_rad.to_string(3) + "]";
    }

private:
    static ball_complex add_sub(const ball_complex &a, const ball_complex &b, bool sub)
    {
        ball_complex r(std::max(a.prec(), b.prec()));
        int tr = 0;
        int ti = 0;
        if (sub) {
            tr = mpfr_sub(r.m_mid.re.get(), a.m_mid.re.get(), b.m_mid.re.get(), MPFR_RNDN);
            ti = mpfr_sub(r.m_mid.im.get(), a.m_mid.im.get(), b.m_mid.im.get(), MPFR_RNDN);
        } else {
            tr = mpfr_add(r.m_mid.re.get(), a.m_mid.re.get(), b.m_mid.re.get(), MPFR_RNDN);
            ti = mpfr_add(r.m_mid.im.get(), a.m_mid.im.get(), b.m_mid.im.get(), MPFR_RNDN);
        }
        mpfr_add(r.m_rad.get(), a.m_rad.get(), b.m_rad.get(), MPFR_RNDU);
        r.add_rounding_error(tr, ti, 1);
        return r;
    }

    // Each inexact round-to-nearest step contributes at most 2^-p |component|.
    void add_rounding_error(int tern_re, int tern_im, long factor)
    {
        const long p = static_cast<long>(prec());
        big_float e(64);
        big_float t(64);
        if (tern_re != 0) {
            mpfr_abs(t.get(), m_mid.re.get(), MPFR_RNDU);
            mpfr_add(e.get(), e.get(), t.get(), MPFR_RNDU);
        }
        if (tern_im != 0) {
            mpfr_abs(t.get(), m_mid.im.get(), MPFR_RNDU);
            mpfr_add(e.get(), e.get(), t.get(), MPFR_RNDU);
        }
        if (e.is_zero()) {
            return;
        }
        mpfr_mul_si(e.get(), e.get(), factor, MPFR_RNDU);
        mpfr_mul_2si(e.get(), e.get(), -p, MPFR_RNDU);
        mpfr_add(m_rad.get(), m_rad.get(), e.get(), MPFR_RNDU);
    }

    mp_complex m_mid;
    big_float m_rad;
};

inline ball_complex pow(const ball_complex &b, long e)
{
    if (e < 0) {
        return pow(b.inverse(), -e);
    }
    ball_complex r = ball_complex::exact(gaussian_rational(1), b.prec());
    ball_complex base = b;
    while (e > 0) {
        if (e & 1) {
            r = r * base;
        }
        e >>= 1;
        if (e > 0) {
            base = base * base;
        }
    }
    return r;
}

// exp(2 pi i k / m) as a certified ball.
inline ball_complex root_of_unity(long k, long m, mpfr_prec_t prec)
{
    k %= m;
    if (k < 0) {
        k += m;
    }
    // Exact cases first so that e.g. -1 and i stay exact points.
    if (k == 0) {
        return ball_complex::exact(gaussian_rational(1), prec);
    }
    if (2 * k == m) {
        return ball_complex::exact(gaussian_rational(-1), prec);
    }
    if (4 * k == m) {
        return ball_complex::exact(gaussian_rational::imaginary_unit(), prec);
    }
    if (4 * k == 3 * m) {
        return ball_complex::exact(-gaussian_rational::imaginary_unit(), prec);
    }
    const mpfr_prec_t wp = prec + 32;
    big_float angle(wp);
    mpfr_const_pi(angle.get(), MPFR_RNDN);
    mpfr_mul_si(angle.get(), angle.get(), 2 * k, MPFR_RNDN);
    mpfr_div_si(angle.get(), angle.get(), m, MPFR_RNDN);
    mp_complex mid(prec);
    mpfr_sin_cos(mid.im.get(), mid.re.get(), angle.get(), MPFR_RNDN);
    // angle carries relative error <= 3 * 2^-wp; sin/cos are 1-Lipschitz.
    big_float rad(64);
    mpfr_abs(rad.get(), angle.get(), MPFR_RNDU);
    mpfr_mul_ui(rad.get(), rad.get(), 4, MPFR_RNDU);
    mpfr_add_ui(rad.get(), rad.get(), 2, MPFR_RNDU);
    mpfr_mul_2si(rad.get(), rad.get(), -static_cast<long>(prec), MPFR_RNDU);
    return ball_complex(std::move(mid), std::move(rad));
}

// A ball containing one m-th root of every value in `a` (which must be
// certified nonzero). The root is the one nearest the principal branch.
inline ball_complex nth_root(const ball_complex &a, long m)
{
    if (m == 1) {
        return a;
    }
    if (!a.certified_nonzero()) {
        throw indeterminate("root of a ball that contains zero");
    }
    const mpfr_prec_t p = a.prec();
    const mpfr_prec_t wp = p + 32;
    big_float r(wp);
    big_float th(wp);
    mpfr_hypot(r.get(), a.mid().re.get(), a.mid().im.get(), MPFR_RNDN);
    mpfr_atan2(th.get(), a.mid().im.get(), a.mid().re.get(), MPFR_RNDN);
    mpfr_rootn_ui(r.get(), r.get(), static_cast<unsigned long>(m), MPFR_RNDN);
    mpfr_div_si(th.get(), th.get(), m, MPFR_RNDN);
    mp_complex w(p);
    big_float c(wp);
    big_float s(wp);
    mpfr_sin_cos(s.get(), c.get(), th.get(), MPFR_RNDN);
    mpfr_mul(w.re.get(), r.get(), c.get(), MPFR_RNDN);
    mpfr_mul(w.im.get(), r.get(), s.get(), MPFR_RNDN);
    // Newton inclusion for q(z) = z^m - a: a root lies within m |q(w)| / |q'(w)|.
    const ball_complex wb(w, big_float(64));
    const ball_complex q = pow(wb, m) - a;
    big_float num = q.abs_upper();
    big_float den = pow(wb, m - 1).abs_lower();
    if (den.is_zero()) {
        throw indeterminate("root inclusion failed");
    }
    big_float rad(64);
    mpfr_div(rad.get(), num.get(), den.get(), MPFR_RNDU);
    return ball_complex(std::move(w), std::move(rad));
}

} // namespace hpinv
