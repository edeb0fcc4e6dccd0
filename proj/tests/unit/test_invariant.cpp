#include <gtest/gtest.h>

#include <hpinv/asymptotics.hpp>
#include <hpinv/expr_parser.hpp>
#include <hpinv/germ_analysis.hpp>
#include <hpinv/hp_invariant.hpp>

#include <random>

using namespace hpinv;

namespace
{

bivariate_poly P(const std::string &s)
{
    return parse_poly(s);
}

gaussian_rational gr(long a, long b = 0)
{
    return gaussian_rational(rational(a), rational(b));
}

puiseux_series mono(long c, long num, long den = 1)
{
    return puiseux_series::monomial(coeff_value(gr(c)), make_rational(num, den));
}

std::string ft(const std::string &t, int d)
{
    return "x^3 - 3*(" + t + ")^2*x*y^" + std::to_string(2 * d) + " + y^" + std::to_string(3 * d);
}

leading_term term(long h, gaussian_rational c)
{
    return {rational(h), coeff_value(std::move(c))};
}

error_kind kind_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const error &e) {
        return e.kind();
    }
    return error_kind::invalid_argument;
}

} // namespace

TEST(Germ, ProfileOfFamilyMember)
{
    const auto p = analyze_germ(P(ft("1", 2)));
    EXPECT_EQ(p.k, 3u);
    EXPECT_EQ(p.shear, 0);
    EXPECT_TRUE(p.reduced);
    const auto sing = singular_cone_lines(p);
    ASSERT_EQ(sing.size(), 1u);
    EXPECT_TRUE(sing[0].slope.is_zero());
    EXPECT_EQ(sing[0].multiplicity, 3u);
    EXPECT_EQ(format_line(sing[0].slope, p.shear), "x=0*y");
}

TEST(Germ, ShearMakesMiniRegular)
{
    // xy has no x^2 term; a shear is needed
    const auto p = analyze_germ(P("x*y"));
    EXPECT_NE(p.shear, 0);
    EXPECT_FALSE(p.f.coeff(2, 0).is_zero());
    EXPECT_TRUE(p.reduced);
    const auto lines = tangent_cone_lines(p);
    ASSERT_EQ(lines.size(), 2u);
    std::vector<std::string> texts;
    for (const auto &l : lines) {
        texts.push_back(format_line(l.slope, p.shear));
    }
    std::sort(texts.begin(), texts.end());
    EXPECT_EQ(texts[0], "x=0*y");
    EXPECT_EQ(texts[1], "y=0");
}

TEST(Germ, Errors)
{
    EXPECT_EQ(kind_of([] { analyze_germ(P("0")); }), error_kind::zero_germ);
    EXPECT_EQ(kind_of([] { analyze_germ(P("1 + x")); }), error_kind::nonvanishing_at_origin);
    EXPECT_EQ(kind_of([] { analyze_germ(P("(x - y)^2")); }), error_kind::not_reduced);
    EXPECT_EQ(kind_of([] { analyze_germ(P("y^3")); }), error_kind::not_reduced);
    // repeated factor away from the origin is harmless
    EXPECT_TRUE(analyze_germ(P("(1 + x)^2*(x^2 - y^3)")).reduced);
}

TEST(Germ, UnreducedAllowedOnRequest)
{
    const auto p = analyze_germ(P("y^3"), false);
    EXPECT_FALSE(p.reduced);
    EXPECT_EQ(p.k, 3u);
    EXPECT_NE(p.shear, 0);
}

TEST(Asymptotics, FamilyMemberArcData)
{
    const auto f = P(ft("1", 2));
    const auto d = arc_local_data_at(f, mono(1, 2), rational(3));
    EXPECT_EQ(d.h0, rational(6));
    EXPECT_EQ(d.c0.exact(), gr(-1));
    ASSERT_GE(d.h.size(), 4u);
    EXPECT_FALSE(d.h[1].has_value());
    EXPECT_EQ(*d.h[2], rational(2));
    EXPECT_EQ(*d.h[3], rational(0));
    EXPECT_EQ(d.xi, rational(2));
    EXPECT_TRUE(truncation_certificate(d, rational(3)));
    EXPECT_FALSE(truncation_certificate(d, rational(2)));
    EXPECT_EQ(arc_local_data_at(f, mono(-1, 2), rational(3)).c0.exact(), gr(3));
}

TEST(Asymptotics, CuspArcData)
{
    const auto f = P("x^2 - y^3");
    const auto d = arc_local_data_at(f, puiseux_series(), rational(2));
    EXPECT_EQ(d.h0, rational(3));
    EXPECT_FALSE(d.h[1].has_value());
    EXPECT_EQ(*d.h[2], rational(0));
    EXPECT_EQ(d.xi, make_rational(3, 2));
    EXPECT_TRUE(truncation_certificate(d, rational(2)));
    // R(z) = z^2 - 1, R(z + 1) = z^2 + 2z
    const auto R1 = shifted_R(d, coeff_value(1));
    ASSERT_EQ(R1.coeffs().size(), 3u);
    EXPECT_TRUE(R1.coeffs()[0].is_zero());
    EXPECT_EQ(R1.coeffs()[1].exact(), gr(2));
    EXPECT_EQ(R1.coeffs()[2].exact(), gr(1));
    const auto R0 = shifted_R(d, coeff_value(0));
    EXPECT_EQ(R0.coeffs()[0].exact(), gr(-1));
    // direct recomputation along y^(3/2)
    const auto W = weighted_initial(f, mono(1, 3, 2), make_rational(3, 2), rational(3));
    for (std::size_t m = 0; m < 3; ++m) {
        EXPECT_TRUE(W.coeffs()[m].may_equal(R1.coeffs()[m])) << m;
    }
}

TEST(Asymptotics, ShiftSwapsPolarValues)
{
    const auto f = P(ft("1", 2));
    const auto d = arc_local_data_at(f, mono(1, 2), rational(3));
    // moving y^2 to -y^2 turns c0 = -1 into 3
    const auto R = shifted_R(d, coeff_value(-2));
    EXPECT_EQ(R.coeffs()[0].exact(), gr(3));
}

TEST(Asymptotics, ArcInZeroSet)
{
    EXPECT_EQ(kind_of([] { arc_local_data_at(P("x - y^2"), mono(1, 2), rational(3)); }), error_kind::arc_in_zero_set);
}

// R-shift law and agreement with plain substitution on random input.
TEST(Asymptotics, ShiftLawRandom)
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-3, 3);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        // f with a known smooth arc direction: random terms plus x^k
        std::string s = "x^3";
        for (int i = 0; i <= 3; ++i) {
            for (int j = 0; i + j <= 6; ++j) {
                if (i + j >= 2 && i < 3 && c(rng) > 1) {
                    s += " + (" + std::to_string(c(rng)) + ")*x^" + std::to_string(i) + "*y^" + std::to_string(j);
                }
            }
        }
        const auto f = P(s);
        const puiseux_series lam = mono(c(rng) == 0 ? 1 : c(rng), 1) + mono(c(rng), 2);
        try {
            const auto d = arc_local_data_at(f, lam, rational(3));
            const auto sub = substitute_arc(f, lam, d.h0 + 1);
            EXPECT_TRUE(sub.coeff(d.h0).may_equal(d.c0)) << s;
            if (d.xi == 0 || d.xi.get_den() != 1) {
                continue;
            }
            const long a = c(rng);
            const auto W = weighted_initial(f, lam + mono(a, d.xi.get_num().get_si()), d.xi, d.h0);
            const auto Rs = shifted_R(d, coeff_value(a));
            for (std::size_t m = 0; m < Rs.coeffs().size(); ++m) {
                EXPECT_TRUE(W.coeffs()[m].may_equal(Rs.coeffs()[m])) << s;
            }
            ++checked;
        } catch (const error &) {
        }
    }
    EXPECT_GT(checked, 5);
}

TEST(Canonicalize, Examples)
{
    const auto one = canonicalize({term(3, gr(-1))});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].c0.exact(), gr(1));
    const auto two = canonicalize({term(6, gr(-1)), term(6, gr(3))});
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].c0.exact(), gr(-3));
    EXPECT_EQ(two[1].c0.exact(), gr(1));
    const auto single = canonicalize({{make_rational(5, 2), coeff_value(gr(2, 7))}});
    EXPECT_EQ(single[0].c0.exact(), gr(1));
}

// Canonical forms agree exactly on orbits and are fixed points; the
// independent matcher agrees.
TEST(Canonicalize, OrbitProperty)
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> c(-3, 3);
    std::uniform_int_distribution<int> hd(2, 7);
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<leading_term> t;
        const int n = 1 + trial % 3;
        for (int i = 0; i < n; ++i) {
            int a = c(rng);
            const int b = c(rng);
            if (a == 0 && b == 0) {
                a = 1;
            }
            t.push_back(term(hd(rng), gr(a, b)));
        }
        // exact w in {i, -1, 1+i, 2}
        const gaussian_rational ws[] = {gr(0, 1), gr(-1), gr(1, 1), gr(2)};
        const auto &w = ws[trial % 4];
        std::vector<leading_term> moved;
        for (const auto &s : t) {
            moved.push_back({s.h0, coeff_value(s.c0.exact() * pow(w, s.h0.get_num().get_si()))});
        }
        const auto ct = canonicalize(t);
        const auto cm = canonicalize(moved);
        EXPECT_EQ(detail::compare_terms(ct, cm), 0);
        EXPECT_EQ(detail::compare_terms(canonicalize(ct), ct), 0);
        EXPECT_TRUE(match_classes(t, moved));
        EXPECT_TRUE(match_classes(t, ct));
    }
}

TEST(Invariant, FamilyMember)
{
    const auto p = analyze_germ(P(ft("1", 2)));
    const auto polars = polar_arcs(p);
    unsigned total = 0;
    for (const auto &a : polars) {
        total += a.arc.multiplicity;
        EXPECT_EQ(a.data.h0, rational(6));
    }
    EXPECT_EQ(total, 2u);
    const auto inv = invariant(p);
    ASSERT_EQ(inv.classes.size(), 1u);
    const auto &cl = inv.classes[0];
    EXPECT_EQ(cl.line_text, "x=0*y");
    ASSERT_EQ(cl.raw_terms.size(), 2u);
    EXPECT_EQ(cl.raw_terms[0].c0.exact(), gr(-1));
    EXPECT_EQ(cl.raw_terms[1].c0.exact(), gr(3));
    EXPECT_EQ(cl.canonical[0].c0.exact(), gr(-3));
}

TEST(Invariant, SmallExamples)
{
    const auto cusp = invariant(analyze_germ(P("x^2 - y^3")));
    ASSERT_EQ(cusp.classes.size(), 1u);
    ASSERT_EQ(cusp.classes[0].raw_terms.size(), 1u);
    EXPECT_EQ(cusp.classes[0].raw_terms[0].h0, rational(3));
    EXPECT_EQ(cusp.classes[0].raw_terms[0].c0.exact(), gr(-1));
    EXPECT_EQ(cusp.classes[0].canonical[0].c0.exact(), gr(1));

    const auto node = analyze_germ(P("x^2 - y^2"));
    EXPECT_TRUE(invariant(node).classes.empty());
    const auto polars = polar_arcs(node);
    ASSERT_EQ(polars.size(), 1u);
    EXPECT_EQ(polars[0].data.h0, rational(2));
}

TEST(Invariant, Compare)
{
    EXPECT_EQ(compare(P(ft("1", 2)), P(ft("-1", 2))).result, verdict::invariants_equal);
    const auto c = compare(P(ft("1", 2)), P(ft("1+i", 2)));
    EXPECT_EQ(c.result, verdict::distinct);
    EXPECT_EQ(c.reason, "InvariantMismatch");
    const auto m = compare(P("x^2 - y^3"), P("x^3 - y^5"));
    EXPECT_EQ(m.result, verdict::distinct);
    EXPECT_EQ(m.reason, "MultiplicityMismatch");
}

// The polar branches x = +-sqrt(2/3) y^2 are irrational, so the terms are balls.
TEST(Invariant, BallCoefficients)
{
    const auto inv = compute_invariant(P("x^3 - 2*x*y^4 + y^6"));
    ASSERT_EQ(inv.classes.size(), 1u);
    ASSERT_EQ(inv.classes[0].raw_terms.size(), 2u);
    // c0 = 1 -+ 4/3 sqrt(2/3)
    const double r = 4.0 / 3.0 * std::sqrt(2.0 / 3.0);
    EXPECT_FALSE(inv.classes[0].raw_terms[0].c0.is_exact());
    EXPECT_NEAR(inv.classes[0].raw_terms[0].c0.approx().real(), 1 - r, 1e-12);
    EXPECT_NEAR(inv.classes[0].raw_terms[1].c0.approx().real(), 1 + r, 1e-12);
    const auto again = compute_invariant(compose(P("x^3 - 2*x*y^4 + y^6"), linear_map{2, 0, 0, 1}));
    EXPECT_TRUE(invariants_equal(inv, again));
}

// After the shear the line y = 0 of f becomes x = -y, and the polar branch
// x = -y + ... agrees with it to first order: the prefix alone lies in f = 0.
TEST(Invariant, PolarPrefixOnLineOfF)
{
    const auto prof = analyze_germ(P("2*x^2*y^2 + (2+3*i)*x*y^4 - i*x^4*y^2 - 3*i*x^6*y + (1-2*i)*y^7"));
    ASSERT_EQ(prof.shear, 1);
    const auto arcs = polar_arcs(prof);
    unsigned total = 0;
    for (const auto &a : arcs) {
        total += a.arc.multiplicity;
    }
    EXPECT_EQ(total, prof.k - 1);
    EXPECT_NO_THROW(invariant(prof));
}
