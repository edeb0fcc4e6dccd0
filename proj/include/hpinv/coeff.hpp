#pragma once

#include <complex>
#include <string>
#include <utility>
#include <variant>

#include <hpinv/algebraic.hpp>
#include <hpinv/ball.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

enum class zero_test { zero, nonzero, unknown };

// A coefficient: an exact element of Q(i), an exact algebraic number over
// Q(i), or a certified ball. Mixed operations stay exact when both operands
// live in Q(i) or in one algebraic field and otherwise fall back to balls.
class coeff_value
{
public:
    coeff_value() : m_v(gaussian_rational{}) {}
    coeff_value(long v) : m_v(gaussian_rational(v)) {}
    coeff_value(gaussian_rational v) : m_v(std::move(v)) {}
    coeff_value(ball_complex v) : m_v(std::move(v)) {}
    // Collapses to an exact value when a is constant.
    coeff_value(algebraic_number a)
    {
        if (a.value.degree() <= 0) {
            m_v = a.value.coeff(0);
        } else {
            m_v = std::move(a);
        }
    }

    bool is_exact() const noexcept
    {
        return std::holds_alternative<gaussian_rational>(m_v);
    }
    const gaussian_rational &exact() const
    {
        return std::get<gaussian_rational>(m_v);
    }
    bool is_algebraic() const noexcept
    {
        return std::holds_alternative<algebraic_number>(m_v);
    }
    const algebraic_number &algebraic() const
    {
        return std::get<algebraic_number>(m_v);
    }
    bool is_ball() const noexcept
    {
        return std::holds_alternative<ball_complex>(m_v);
    }
    const ball_complex &ball() const
    {
        return std::get<ball_complex>(m_v);
    }

    // Working precision of a ball or algebraic number; 0 for Q(i).
    mpfr_prec_t prec() const
    {
        if (is_exact()) {
            return 0;
        }
        return is_ball() ? ball().prec() : algebraic().field->prec();
    }

    // Enclosure; algebraic numbers are evaluated to the requested precision.
    ball_complex to_ball(mpfr_prec_t prec) const
    {
        if (is_exact()) {
            return ball_complex::exact(exact(), prec);
        }
        if (is_algebraic()) {
            return algebraic().field->evaluate(algebraic().value, std::max<mpfr_prec_t>(prec, 64));
        }
        return ball();
    }

    zero_test test_zero() const
    {
        if (is_exact()) {
            return exact().is_zero() ? zero_test::zero : zero_test::nonzero;
        }
        if (is_algebraic()) {
            return algebraic().field->vanishes(algebraic().value) ? zero_test::zero : zero_test::nonzero;
        }
        return ball().certified_nonzero() ? zero_test::nonzero : zero_test::unknown;
    }
    bool is_zero() const
    {
        return test_zero() == zero_test::zero;
    }
    bool is_nonzero() const
    {
        return test_zero() == zero_test::nonzero;
    }

    std::complex<double> approx() const
    {
        if (is_exact()) {
            return {exact().re().get_d(), exact().im().get_d()};
        }
        return to_ball(prec()).approx();
    }

    coeff_value operator-() const
    {
        if (is_exact()) {
            return -exact();
        }
        if (is_algebraic()) {
            return algebraic_number{algebraic().field, -algebraic().value};
        }
        return -ball();
    }

    friend coeff_value operator+(const coeff_value &a, const coeff_value &b)
    {
        if (a.is_exact() && b.is_exact()) {
            return a.exact() + b.exact();
        }
        if (a.is_exact() && a.exact().is_zero()) {
            return b;
        }
        if (b.is_exact() && b.exact().is_zero()) {
            return a;
        }
        if (auto f = shared_field(a, b)) {
            return algebraic_number{f, a.poly() + b.poly()};
        }
        const auto p = common_prec(a, b);
        return a.to_ball(p) + b.to_ball(p);
    }
    friend coeff_value operator-(const coeff_value &a, const coeff_value &b)
    {
        return a + (-b);
    }
    friend coeff_value operator*(const coeff_value &a, const coeff_value &b)
    {
        if (a.is_exact() && b.is_exact()) {
            return a.exact() * b.exact();
        }
        // Exact zero annihilates; keeps structural zeros exact.
        if ((a.is_exact() && a.exact().is_zero()) || (b.is_exact() && b.exact().is_zero())) {
            return gaussian_rational{};
        }
        if (a.is_exact() && a.exact().is_one()) {
            return b;
        }
        if (b.is_exact() && b.exact().is_one()) {
            return a;
        }
        if (auto f = shared_field(a, b)) {
            return algebraic_number{f, f->reduce(a.poly() * b.poly())};
        }
        const auto p = common_prec(a, b);
        return a.to_ball(p) * b.to_ball(p);
    }
    friend coeff_value operator/(const coeff_value &a, const coeff_value &b)
    {
        if (a.is_exact() && b.is_exact()) {
            return a.exact() / b.exact();
        }
        if (b.is_exact() && b.exact().is_zero()) {
            throw error(error_kind::division_by_zero, "division by exact zero");
        }
        if (a.is_exact() && a.exact().is_zero()) {
            return gaussian_rational{};
        }
        if (auto f = shared_field(a, b)) {
            return algebraic_number{f, f->reduce(a.poly() * f->inverse(b.poly()))};
        }
        const auto p = common_prec(a, b);
        return a.to_ball(p) / b.to_ball(p);
    }
    coeff_value &operator+=(const coeff_value &o)
    {
        return *this = *this + o;
    }
    coeff_value &operator-=(const coeff_value &o)
    {
        return *this = *this - o;
    }
    coeff_value &operator*=(const coeff_value &o)
    {
        return *this = *this * o;
    }

    // Decided exactly within Q(i) or one algebraic field; otherwise the
    // balls must overlap.
    bool may_equal(const coeff_value &o) const
    {
        if (is_exact() && o.is_exact()) {
            return exact() == o.exact();
        }
        if (auto f = shared_field(*this, o)) {
            return f->vanishes(poly() - o.poly());
        }
        const auto p = common_prec(*this, o);
        return to_ball(p).overlaps(o.to_ball(p));
    }

    // Structural equality: same exact value, same element of the same
    // field, or bitwise identical balls.
    friend bool operator==(const coeff_value &a, const coeff_value &b)
    {
        if (a.m_v.index() != b.m_v.index()) {
            return false;
        }
        if (a.is_exact()) {
            return a.exact() == b.exact();
        }
        if (a.is_algebraic()) {
            return a.algebraic().field == b.algebraic().field &&
                   a.algebraic().field->reduce(a.algebraic().value - b.algebraic().value).is_zero();
        }
        const auto &u = a.ball();
        const auto &v = b.ball();
        return mpfr_equal_p(u.mid().re.get(), v.mid().re.get()) && mpfr_equal_p(u.mid().im.get(), v.mid().im.get()) &&
               mpfr_equal_p(u.rad().get(), v.rad().get());
    }

    std::string to_string() const
    {
        return is_exact() ? hpinv::to_string(exact()) : to_ball(prec()).to_string();
    }

private:
    // The field both operands can be computed in, if any.
    static std::shared_ptr<const algebraic_field> shared_field(const coeff_value &a, const coeff_value &b)
    {
        if (a.is_ball() || b.is_ball() || (a.is_exact() && b.is_exact())) {
            return nullptr;
        }
        if (a.is_algebraic() && b.is_algebraic()) {
            return a.algebraic().field == b.algebraic().field ? a.algebraic().field : nullptr;
        }
        return a.is_algebraic() ? a.algebraic().field : b.algebraic().field;
    }
    qi_upoly poly() const
    {
        return is_exact() ? qi_upoly{exact()} : algebraic().value;
    }

    static mpfr_prec_t common_prec(const coeff_value &a, const coeff_value &b)
    {
        return std::max(a.prec(), b.prec());
    }

    std::variant<gaussian_rational, ball_complex, algebraic_number> m_v;
};

inline coeff_value pow(const coeff_value &c, long e)
{
    if (c.is_exact()) {
        return pow(c.exact(), e);
    }
    if (c.is_ball()) {
        return pow(c.ball(), e);
    }
    coeff_value base = e < 0 ? coeff_value(1) / c : c;
    coeff_value acc(1);
    for (unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e); k; k >>= 1) {
        if (k & 1) {
            acc *= base;
        }
        base *= base;
    }
    return acc;
}

inline std::string to_string(const coeff_value &c)
{
    return c.to_string();
}

} // namespace hpinv
