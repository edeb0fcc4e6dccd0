#include <gtest/gtest.h>

#include <hpinv/ball.hpp>
#include <hpinv/bivariate_poly.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/gaussian_rational.hpp>
#include <hpinv/puiseux_series.hpp>
#include <hpinv/roots.hpp>
#include <hpinv/upoly.hpp>

#include <random>

using namespace hpinv;

namespace
{

gaussian_rational gr(long a, long b = 0)
{
    return gaussian_rational(rational(a), rational(b));
}

} // namespace

TEST(GaussianRational, FieldArithmetic)
{
    const gaussian_rational a(make_rational(1, 2), make_rational(-3, 4));
    const gaussian_rational b(make_rational(2, 5), rational(1));
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(a * a.inverse(), gr(1));
    EXPECT_EQ(a.conj() * a, gaussian_rational(a.norm()));
    EXPECT_EQ(gaussian_rational::imaginary_unit() * gaussian_rational::imaginary_unit(), gr(-1));
    EXPECT_THROW(gr(0).inverse(), error);
}

TEST(GaussianRational, Formatting)
{
    EXPECT_EQ(to_string(gr(0, 1)), "i");
    EXPECT_EQ(to_string(gr(0, -1)), "-i");
    EXPECT_EQ(to_string(gaussian_rational(make_rational(1, 2), make_rational(-2, 3))), "1/2-2/3 i");
    EXPECT_EQ(to_string(gr(-3)), "-3");
    EXPECT_EQ(to_string(gaussian_rational(rational(0), make_rational(2, 3))), "2/3 i");
}

TEST(Ball, ExactOperationsStayTight)
{
    const auto a = ball_complex::exact(gr(3, -2), 128);
    const auto b = ball_complex::exact(gr(1, 5), 128);
    const auto p = a * b;
    EXPECT_TRUE(p.overlaps(ball_complex::exact(gr(13, 13), 128)));
    EXPECT_TRUE(p.rad().is_zero());
}

TEST(Ball, ContainsTrueValueOfThird)
{
    const auto third = ball_complex::exact(gaussian_rational(make_rational(1, 3)), 64);
    const auto x = third * ball_complex::exact(gr(3), 64) - ball_complex::exact(gr(1), 64);
    EXPECT_TRUE(x.contains_zero());
    EXPECT_FALSE(x.certified_nonzero());
}

TEST(Ball, NthRootEnclosesPrincipalRoot)
{
    const auto r = nth_root(ball_complex::exact(gr(0, 8), 128), 3);
    // principal cube root of 8i is sqrt(3) + i
    const auto back = pow(r, 3);
    EXPECT_TRUE(back.overlaps(ball_complex::exact(gr(0, 8), 128)));
    EXPECT_NEAR(r.approx().real(), std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(r.approx().imag(), 1.0, 1e-12);
}

TEST(UPoly, SquarefreeDecomposition)
{
    // (z - 1)^3 (z + i)^2 (z - 2)
    const qi_upoly l1{gr(-1), gr(1)};
    const qi_upoly l2{gr(0, 1), gr(1)};
    const qi_upoly l3{gr(-2), gr(1)};
    const qi_upoly p = gr(5) * (l1 * l1 * l1 * l2 * l2 * l3);
    const auto f = squarefree_decomposition(p);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0], l3);
    EXPECT_EQ(f[1], l2);
    EXPECT_EQ(f[2], l1);
    EXPECT_FALSE(is_squarefree(p));
    EXPECT_TRUE(is_squarefree(l1 * l2 * l3));
}

TEST(UPoly, ShiftMatchesEvaluation)
{
    const qi_upoly p{gr(1), gr(-2, 1), gr(0), gr(3)};
    const gaussian_rational a = gr(2, -1);
    const auto q = p.shift(a);
    for (long t = -2; t <= 2; ++t) {
        EXPECT_EQ(q(gr(t, 1)), p(gr(t, 1) + a));
    }
}

TEST(Roots, ExactGaussianRationalRoots)
{
    // 2 (z - 1/2)^2 (z + 3i) (z^2 - 2)
    const qi_upoly a{gaussian_rational(make_rational(-1, 2)), gr(1)};
    const qi_upoly b{gr(0, 3), gr(1)};
    const qi_upoly c{gr(-2), gr(0), gr(1)};
    const auto roots = uni_roots(gr(2) * a * a * b * c);
    unsigned total = 0;
    int exact = 0;
    for (const auto &r : roots) {
        total += r.multiplicity;
        if (r.root.is_exact()) {
            ++exact;
            if (r.multiplicity == 2) {
                EXPECT_EQ(r.root.exact(), gaussian_rational(make_rational(1, 2)));
            } else {
                EXPECT_EQ(r.root.exact(), gr(0, -3));
            }
        } else {
            EXPECT_EQ(r.multiplicity, 1u);
            EXPECT_NEAR(std::abs(r.root.approx()), std::sqrt(2.0), 1e-12);
        }
    }
    EXPECT_EQ(total, 5u);
    EXPECT_EQ(exact, 2);
}

TEST(Roots, ZeroRootsAreExact)
{
    const qi_upoly p{gr(0), gr(0), gr(-1), gr(1)};
    const auto roots = uni_roots(p);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_TRUE(roots[0].root.is_zero());
    EXPECT_EQ(roots[0].multiplicity, 2u);
}

TEST(Roots, BallCoefficientsWithDoubleRoot)
{
    // (z - sqrt(2))^2 with ball coefficients
    const auto s = nth_root(ball_complex::exact(gr(2), 256), 2);
    const cv_upoly p{coeff_value(s * s), coeff_value(-(s + s)), coeff_value(gr(1))};
    const auto roots = uni_roots(p, 256);
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_EQ(roots[0].multiplicity, 2u);
    EXPECT_NEAR(roots[0].root.approx().real(), std::sqrt(2.0), 1e-14);
}

TEST(Roots, RandomPolynomialsAgreeWithResidual)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<gaussian_rational> c;
        const int deg = 1 + trial % 7;
        for (int i = 0; i <= deg; ++i) {
            c.push_back(gr(d(rng), d(rng)));
        }
        if (c.back().is_zero()) {
            c.back() = gr(1);
        }
        const qi_upoly p(c);
        const auto roots = uni_roots(p);
        unsigned total = 0;
        for (const auto &r : roots) {
            total += r.multiplicity;
            // p vanishes somewhere inside every returned ball
            const auto v = to_coeff_poly(p)(r.root);
            EXPECT_FALSE(v.is_nonzero()) << to_string(p);
        }
        EXPECT_EQ(total, static_cast<unsigned>(p.degree()));
    }
}

TEST(Bivariate, GcdAndShear)
{
    const auto x = bivariate_poly::var(variable::x);
    const auto y = bivariate_poly::var(variable::y);
    const auto f = (x * x - y * y * y) * (x + y);
    const auto g = (x * x - y * y * y) * (x - y * y);
    const auto h = gcd_in_x(f, g);
    EXPECT_EQ(h, x * x - y * y * y);
    const auto s = shear(y * y * y, 1);
    EXPECT_EQ(s.homogeneous_part(3).coeff(3, 0), gr(1));
}

TEST(PuiseuxSeries, TruncatedProduct)
{
    puiseux_series a(rational(3));
    a.add_term(rational(1), coeff_value(gr(1)));
    a.add_term(make_rational(3, 2), coeff_value(gr(2)));
    puiseux_series b;
    b.add_term(rational(1), coeff_value(gr(1)));
    const auto p = a * b;
    ASSERT_TRUE(p.truncation());
    EXPECT_EQ(*p.truncation(), rational(4));
    EXPECT_EQ(p.coeff(rational(2)).exact(), gr(1));
    EXPECT_EQ(p.coeff(make_rational(5, 2)).exact(), gr(2));
    EXPECT_EQ(p.ramification(), integer(2));
}
