#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include <hpinv/ball.hpp>
#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>
#include <hpinv/poly_core.hpp>

namespace hpinv
{

// Q(i)[z]/(s) for a squarefree s, together with one root c of s fixed by an
// isolating disk. Its elements stand for numbers a(c). A zero test splits s
// into gcd(a, s) and the cofactor and keeps the factor vanishing at c, so
// the answer is exact; the disk is only used to tell the two factors apart,
// which always succeeds because exactly one of them vanishes at c.
class algebraic_field
{
public:
    algebraic_field(qi_upoly s, ball_complex disk, mpfr_prec_t prec)
        : m_s(monic(s)), m_disk(std::move(disk)), m_prec(prec)
    {
    }

    mpfr_prec_t prec() const noexcept
    {
        return m_prec;
    }
    long degree() const
    {
        std::lock_guard lock(m_mu);
        return m_s.degree();
    }

    qi_upoly reduce(const qi_upoly &a) const
    {
        std::lock_guard lock(m_mu);
        return divmod(a, m_s).second;
    }

    bool vanishes(const qi_upoly &a) const
    {
        std::lock_guard lock(m_mu);
        return vanishes_locked(a);
    }

    // a(c)^-1 as an element; a(c) must be nonzero.
    qi_upoly inverse(const qi_upoly &a) const
    {
        std::lock_guard lock(m_mu);
        if (vanishes_locked(a)) {
            throw error(error_kind::division_by_zero, "algebraic number is zero");
        }
        // after the zero test gcd(a, s) = 1; extended Euclid for u a + v s = 1
        qi_upoly r0 = m_s;
        qi_upoly r1 = divmod(a, m_s).second;
        qi_upoly u0;
        qi_upoly u1{gaussian_rational(1)};
        while (r1.degree() > 0) {
            auto [q, r] = divmod(r0, r1);
            qi_upoly u = u0 - q * u1;
            r0 = std::move(r1);
            r1 = std::move(r);
            u0 = std::move(u1);
            u1 = std::move(u);
        }
        return divmod(r1.lc().inverse() * u1, m_s).second;
    }

    ball_complex root(mpfr_prec_t prec) const
    {
        std::lock_guard lock(m_mu);
        return root_locked(prec);
    }

    ball_complex evaluate(const qi_upoly &a, mpfr_prec_t prec) const
    {
        std::lock_guard lock(m_mu);
        return horner(a, root_locked(prec), prec);
    }

private:
    static ball_complex horner(const qi_upoly &a, const ball_complex &z, mpfr_prec_t prec)
    {
        ball_complex acc = ball_complex::exact(gaussian_rational{}, prec);
        for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
            acc = acc * z + ball_complex::exact(*it, prec);
        }
        return acc;
    }

    // True when the disk is narrow enough for `prec` bits relative to c.
    bool tight(mpfr_prec_t prec) const
    {
        if (m_disk.prec() < prec) {
            return false;
        }
        big_float lim = m_disk.abs_upper();
        mpfr_mul_2si(lim.get(), lim.get(), -static_cast<long>(prec) + 8, MPFR_RNDD);
        return mpfr_lessequal_p(m_disk.rad().get(), lim.get()) != 0;
    }

    // Newton steps from the disk centre, then the inclusion radius
    // deg(s) |s(z)/s'(z)|, which holds some root of s; inside the old disk
    // that root is c.
    ball_complex root_locked(mpfr_prec_t prec) const
    {
        if (tight(prec)) {
            return m_disk;
        }
        const mpfr_prec_t wp = prec + 32;
        const qi_upoly ds = m_s.derivative();
        for (int attempt = 0; attempt < 4; ++attempt) {
            mp_complex z(wp);
            mpfr_set(z.re.get(), m_disk.mid().re.get(), MPFR_RNDN);
            mpfr_set(z.im.get(), m_disk.mid().im.get(), MPFR_RNDN);
            for (long bits = 16; bits < 4 * wp; bits *= 2) {
                const ball_complex point(z, big_float(64));
                const ball_complex step = horner(m_s, point, wp) / horner(ds, point, wp);
                z = z - step.mid();
            }
            for (int extra = 0; extra < attempt; ++extra) {
                const ball_complex point(z, big_float(64));
                z = z - (horner(m_s, point, wp) / horner(ds, point, wp)).mid();
            }
            const ball_complex point(z, big_float(64));
            const ball_complex num = horner(m_s, point, wp);
            const ball_complex den = horner(ds, point, wp);
            if (!den.certified_nonzero()) {
                continue;
            }
            big_float rho = num.abs_upper();
            mpfr_div(rho.get(), rho.get(), den.abs_lower().get(), MPFR_RNDU);
            mpfr_mul_ui(rho.get(), rho.get(), static_cast<unsigned long>(m_s.degree()), MPFR_RNDU);
            // |z - old centre| + rho must stay inside the old disk
            const ball_complex shift(z - m_disk.mid(), big_float(64));
            big_float reach = shift.abs_upper();
            mpfr_add(reach.get(), reach.get(), rho.get(), MPFR_RNDU);
            if (mpfr_lessequal_p(reach.get(), m_disk.rad().get())) {
                m_disk = ball_complex(z, rho);
                if (tight(prec) || m_disk.prec() >= prec) {
                    return m_disk;
                }
            }
        }
        throw indeterminate("algebraic root could not be refined");
    }

    bool vanishes_locked(const qi_upoly &a) const
    {
        const qi_upoly r = divmod(a, m_s).second;
        if (r.is_zero()) {
            return true;
        }
        const qi_upoly g = gcd(r, m_s);
        if (g.degree() <= 0) {
            return false;
        }
        const qi_upoly h = exact_quotient(m_s, g);
        for (mpfr_prec_t p = std::max<mpfr_prec_t>(m_prec, 64); p <= (mpfr_prec_t(1) << 16); p *= 2) {
            const ball_complex c = root_locked(p);
            if (horner(g, c, p).certified_nonzero()) {
                m_s = h;
                return false;
            }
            if (horner(h, c, p).certified_nonzero()) {
                m_s = g;
                return true;
            }
        }
        throw indeterminate("factor vanishing at an algebraic root not identified");
    }

    mutable std::mutex m_mu;
    mutable qi_upoly m_s;
    mutable ball_complex m_disk;
    mpfr_prec_t m_prec;
};

// An element a(c) of an algebraic_field.
struct algebraic_number {
    std::shared_ptr<const algebraic_field> field;
    qi_upoly value;
};

} // namespace hpinv
