#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <hpinv/asymptotics.hpp>
#include <hpinv/ball.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/error.hpp>
#include <hpinv/germ_analysis.hpp>
#include <hpinv/newton_puiseux.hpp>
#include <hpinv/roots.hpp>

namespace hpinv
{

struct invariant_options {
    mpfr_prec_t prec = 256;
    mpfr_prec_t prec_cap = 4096;
    // extra orders of expansion past the xi certificate when refining
    unsigned trunc_guard = 1;
};

// c0 y^h0
struct leading_term {
    rational h0;
    coeff_value c0;
};

struct polar_arc {
    puiseux_arc arc;
    arc_local_data data;
};

struct tangential_arc {
    puiseux_arc arc;
    leading_term term;
    std::size_t line = 0; // index into singular_cone_lines
};

struct line_class {
    tangent_line line;
    std::string line_text; // in the original coordinates
    std::vector<leading_term> raw_terms;
    std::vector<leading_term> canonical;
};

struct germ_invariant {
    unsigned k = 0;
    std::vector<line_class> classes;
};

namespace detail
{

// Order relation on coefficients by (Re, Im). Balls that overlap but are
// narrower than half the working precision are taken as equal; wider
// overlapping balls cannot be ordered.
inline int compare_part(const big_float &a, const big_float &ra, const big_float &b, const big_float &rb, mpfr_prec_t p)
{
    big_float diff(p + 16);
    mpfr_sub(diff.get(), a.get(), b.get(), MPFR_RNDN);
    big_float sep(64);
    mpfr_add(sep.get(), ra.get(), rb.get(), MPFR_RNDU);
    big_float slack(64);
    // the subtraction above may be off by one ulp of the larger operand
    mpfr_set_ui_2exp(slack.get(), 1, -static_cast<long>(p), MPFR_RNDU);
    big_float mag(64);
    mpfr_abs(mag.get(), a.get(), MPFR_RNDU);
    big_float mb(64);
    mpfr_abs(mb.get(), b.get(), MPFR_RNDU);
    mpfr_max(mag.get(), mag.get(), mb.get(), MPFR_RNDU);
    mpfr_mul(slack.get(), slack.get(), mag.get(), MPFR_RNDU);
    mpfr_add(sep.get(), sep.get(), slack.get(), MPFR_RNDU);
    big_float ad(64);
    mpfr_abs(ad.get(), diff.get(), MPFR_RNDD);
    if (mpfr_greater_p(ad.get(), sep.get())) {
        return mpfr_sgn(diff.get()) < 0 ? -1 : 1;
    }
    big_float tiny(64);
    mpfr_set_ui_2exp(tiny.get(), 1, -static_cast<long>(p / 2), MPFR_RNDN);
    big_float scale(64);
    mpfr_max(scale.get(), mag.get(), big_float(1.0, 64).get(), MPFR_RNDU);
    mpfr_mul(tiny.get(), tiny.get(), scale.get(), MPFR_RNDN);
    if (mpfr_lessequal_p(ra.get(), tiny.get()) && mpfr_lessequal_p(rb.get(), tiny.get())) {
        return 0;
    }
    throw indeterminate("coefficients too close to order at this precision");
}

inline int compare_coeff(const coeff_value &a, const coeff_value &b)
{
    if (a.is_exact() && b.is_exact()) {
        const auto &x = a.exact();
        const auto &y = b.exact();
        if (x.re() != y.re()) {
            return x.re() < y.re() ? -1 : 1;
        }
        if (x.im() != y.im()) {
            return x.im() < y.im() ? -1 : 1;
        }
        return 0;
    }
    const mpfr_prec_t p = std::max(a.prec(), b.prec());
    const ball_complex u = a.to_ball(p);
    const ball_complex v = b.to_ball(p);
    const int re = compare_part(u.mid().re, u.rad(), v.mid().re, v.rad(), p);
    if (re != 0) {
        return re;
    }
    return compare_part(u.mid().im, u.rad(), v.mid().im, v.rad(), p);
}

inline int compare_term(const leading_term &a, const leading_term &b)
{
    if (a.h0 != b.h0) {
        return a.h0 < b.h0 ? -1 : 1;
    }
    return compare_coeff(a.c0, b.c0);
}

inline int compare_terms(const std::vector<leading_term> &a, const std::vector<leading_term> &b)
{
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (const int c = compare_term(a[i], b[i])) {
            return c;
        }
    }
    return a.size() == b.size() ? 0 : (a.size() < b.size() ? -1 : 1);
}

inline void sort_terms(std::vector<leading_term> &t)
{
    std::sort(t.begin(), t.end(), [](const leading_term &a, const leading_term &b) { return compare_term(a, b) < 0; });
}

// All w with w^m = v.
inline std::vector<coeff_value> roots_of(const coeff_value &v, long m, mpfr_prec_t prec)
{
    std::vector<coeff_value> out;
    if (v.is_exact()) {
        std::vector<gaussian_rational> c(static_cast<std::size_t>(m) + 1);
        c[0] = -v.exact();
        c.back() = gaussian_rational(1);
        for (const auto &r : uni_roots(qi_upoly(std::move(c)), prec)) {
            out.push_back(r.root);
        }
        return out;
    }
    const ball_complex base = nth_root(v.to_ball(std::max<mpfr_prec_t>(prec, v.prec())), m);
    for (long j = 0; j < m; ++j) {
        out.emplace_back(base * root_of_unity(j, m, base.prec()));
    }
    return out;
}

} // namespace detail

// Canonical representative of the orbit of `terms` under c_j -> c_j w^(N h_j).
// Every term of least h0 serves as pivot in turn; for each, the w making its
// coefficient 1 are enumerated and the smallest normalised list is kept.
inline std::vector<leading_term> canonicalize(const std::vector<leading_term> &terms, mpfr_prec_t prec = 256)
{
    if (terms.empty()) {
        return {};
    }
    integer N = 1;
    for (const auto &t : terms) {
        if (!t.c0.is_nonzero()) {
            throw indeterminate("leading coefficient not certified nonzero");
        }
        N = lcm(N, t.h0.get_den());
    }
    std::vector<long> m;
    long g = 0;
    for (const auto &t : terms) {
        const rational scaled = t.h0 * rational(N);
        m.push_back(scaled.get_num().get_si());
        g = std::gcd(g, m.back());
    }
    for (auto &x : m) {
        x /= g;
    }
    rational hmin = terms.front().h0;
    for (const auto &t : terms) {
        hmin = std::min(hmin, t.h0);
    }
    std::optional<std::vector<leading_term>> best;
    for (std::size_t p = 0; p < terms.size(); ++p) {
        if (terms[p].h0 != hmin) {
            continue;
        }
        const coeff_value inv = coeff_value(1) / terms[p].c0;
        for (const auto &w : detail::roots_of(inv, m[p], prec)) {
            std::vector<leading_term> cand;
            for (std::size_t j = 0; j < terms.size(); ++j) {
                // w^m_j = inv^q w^r keeps exact what can be exact
                const long q = m[j] / m[p];
                const long r = m[j] % m[p];
                coeff_value c = terms[j].c0 * pow(inv, q);
                if (r != 0) {
                    c *= pow(w, r);
                }
                cand.push_back({terms[j].h0, j == p ? coeff_value(1) : c});
            }
            detail::sort_terms(cand);
            if (!best || detail::compare_terms(cand, *best) < 0) {
                best = std::move(cand);
            }
        }
    }
    return *best;
}

// Whether some w in C* carries the multiset a onto b (c_j -> c_j w^(N h_j)).
// Independent of canonicalize; used to cross-check it.
inline bool match_classes(const std::vector<leading_term> &a, const std::vector<leading_term> &b, mpfr_prec_t prec = 256)
{
    if (a.size() != b.size()) {
        return false;
    }
    if (a.empty()) {
        return true;
    }
    std::vector<rational> ha;
    std::vector<rational> hb;
    integer N = 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ha.push_back(a[i].h0);
        hb.push_back(b[i].h0);
        N = lcm(N, a[i].h0.get_den());
    }
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) {
        return false;
    }
    // pivot: the term of a with the smallest exponent N h
    std::size_t p = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i].h0 < a[p].h0) {
            p = i;
        }
    }
    const long mp = rational(a[p].h0 * rational(N)).get_num().get_si();
    for (const auto &t : b) {
        if (t.h0 != a[p].h0) {
            continue;
        }
        for (const auto &w : detail::roots_of(t.c0 / a[p].c0, mp, prec)) {
            std::vector<leading_term> moved;
            for (const auto &s : a) {
                moved.push_back({s.h0, s.c0 * pow(w, rational(s.h0 * rational(N)).get_num().get_si())});
            }
            auto sb = b;
            detail::sort_terms(moved);
            detail::sort_terms(sb);
            if (detail::compare_terms(moved, sb) == 0) {
                return true;
            }
        }
    }
    return false;
}

// Branches of the polar curve f_x = 0 with their arc data, each expanded
// until the xi certificate holds. Multiplicities add up to k - 1.
inline std::vector<polar_arc> polar_arcs(const germ_profile &prof, const invariant_options &opt = {})
{
    const bivariate_poly g = prof.f.derivative(variable::x);
    std::vector<polar_arc> out;
    if (prof.k <= 1) {
        return out;
    }
    std::vector<puiseux_arc> todo = expand_branches(g, rational(2), {opt.prec});
    while (!todo.empty()) {
        puiseux_arc arc = std::move(todo.back());
        todo.pop_back();
        for (int round = 0;; ++round) {
            if (round == 32) {
                throw error(error_kind::precision_exhausted, "xi certificate not reached after 32 refinements");
            }
            arc_local_data data;
            bool prefix_in_zero_set = false;
            const rational T = arc.terminating()
                                   ? (arc.representative.empty() ? rational(1)
                                                                 : arc.representative.terms().rbegin()->first + 1)
                                   : *arc.series.truncation();
            try {
                data = arc_local_data_at(prof.f, arc, T);
            } catch (const error &e) {
                if (e.kind() != error_kind::arc_in_zero_set) {
                    throw;
                }
                if (arc.terminating()) {
                    throw error(error_kind::shared_component, "f and its polar curve share a component");
                }
                // only the known prefix lies in f = 0 (say a line of f when
                // the arc is that line plus higher terms): expand further
                prefix_in_zero_set = true;
            }
            if (!prefix_in_zero_set && (arc.terminating() || truncation_certificate(data, T))) {
                out.push_back({std::move(arc), std::move(data)});
                break;
            }
            rational next = T + 1;
            if (!prefix_in_zero_set) {
                next = std::max(rational(data.xi + rational(1 + static_cast<long>(opt.trunc_guard))), next);
            }
            auto refined = refine_arc(g, arc, next, opt.prec);
            if (refined.empty()) {
                throw std::logic_error("refinement lost a polar branch");
            }
            arc = std::move(refined.back());
            refined.pop_back();
            for (auto &r : refined) {
                todo.push_back(std::move(r));
            }
        }
    }
    unsigned total = 0;
    for (const auto &a : out) {
        total += a.arc.multiplicity;
    }
    if (total != prof.k - 1) {
        throw std::logic_error("polar branch count " + std::to_string(total) + " differs from k - 1");
    }
    return out;
}

// Polar arcs with h0 > k, each tied to the singular cone line it is tangent to.
inline std::vector<tangential_arc> tangential_arcs(const germ_profile &prof, const std::vector<polar_arc> &polars,
                                                   const std::vector<tangent_line> &sing)
{
    std::vector<tangential_arc> out;
    for (const auto &p : polars) {
        if (p.data.h0 <= rational(prof.k)) {
            continue;
        }
        const coeff_value slope = p.arc.tangent_coefficient();
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < sing.size(); ++i) {
            if (slope.may_equal(sing[i].slope)) {
                if (hit) {
                    throw indeterminate("tangent line of a polar arc is ambiguous");
                }
                hit = i;
            }
        }
        if (!hit) {
            throw error(error_kind::cone_consistency_violation,
                        "tangential polar arc along x=" + to_string(slope) + "*y is not on a repeated cone line");
        }
        out.push_back({p.arc, {p.data.h0, p.data.c0}, *hit});
    }
    return out;
}

inline germ_invariant invariant(const germ_profile &prof, const invariant_options &opt = {})
{
    germ_invariant inv;
    inv.k = prof.k;
    const auto sing = singular_cone_lines(prof, opt.prec);
    if (sing.empty()) {
        return inv;
    }
    const auto tang = tangential_arcs(prof, polar_arcs(prof, opt), sing);
    for (std::size_t i = 0; i < sing.size(); ++i) {
        line_class c;
        c.line = sing[i];
        c.line_text = format_line(sing[i].slope, prof.shear);
        for (const auto &t : tang) {
            if (t.line == i) {
                c.raw_terms.insert(c.raw_terms.end(), t.arc.multiplicity, t.term);
            }
        }
        detail::sort_terms(c.raw_terms);
        c.canonical = canonicalize(c.raw_terms, opt.prec);
        inv.classes.push_back(std::move(c));
    }
    std::stable_sort(inv.classes.begin(), inv.classes.end(), [](const line_class &a, const line_class &b) {
        return detail::compare_terms(a.canonical, b.canonical) < 0;
    });
    return inv;
}

// Equality of invariants: same order and the same multiset of canonical
// classes. Lines are not compared, they depend on the coordinates.
inline bool invariants_equal(const germ_invariant &a, const germ_invariant &b)
{
    if (a.k != b.k || a.classes.size() != b.classes.size()) {
        return false;
    }
    std::vector<bool> used(b.classes.size(), false);
    for (const auto &ca : a.classes) {
        bool found = false;
        for (std::size_t j = 0; j < b.classes.size() && !found; ++j) {
            if (!used[j] && detail::compare_terms(ca.canonical, b.classes[j].canonical) == 0) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) {
            return false;
        }
    }
    return true;
}

// Runs fn(prec) at the working precision, doubling it on Indeterminate up
// to the cap.
template <class Fn> auto with_precision_escalation(const invariant_options &opt, Fn &&fn)
{
    for (mpfr_prec_t p = opt.prec;; p *= 2) {
        try {
            return fn(p);
        } catch (const indeterminate &e) {
            if (p * 2 > opt.prec_cap) {
                throw error(error_kind::precision_exhausted,
                            std::string(e.what()) + " (at " + std::to_string(p) + " bits)");
            }
        }
    }
}

inline germ_invariant compute_invariant(const bivariate_poly &f, const invariant_options &opt = {})
{
    const germ_profile prof = analyze_germ(f);
    return with_precision_escalation(opt, [&](mpfr_prec_t p) {
        invariant_options o = opt;
        o.prec = p;
        return invariant(prof, o);
    });
}

enum class verdict { invariants_equal, distinct, indeterminate };

struct comparison {
    verdict result = verdict::indeterminate;
    // "MultiplicityMismatch" or "InvariantMismatch" for distinct germs
    std::string reason;
};

// Necessary condition only: equal invariants do not prove equivalence.
inline comparison compare(const bivariate_poly &f, const bivariate_poly &g, const invariant_options &opt = {})
{
    const germ_profile pf = analyze_germ(f);
    const germ_profile pg = analyze_germ(g);
    if (pf.k != pg.k) {
        return {verdict::distinct, "MultiplicityMismatch"};
    }
    try {
        return with_precision_escalation(opt, [&](mpfr_prec_t p) {
            invariant_options o = opt;
            o.prec = p;
            const bool eq = invariants_equal(invariant(pf, o), invariant(pg, o));
            return eq ? comparison{verdict::invariants_equal, ""} : comparison{verdict::distinct, "InvariantMismatch"};
        });
    } catch (const error &e) {
        if (e.kind() == error_kind::precision_exhausted) {
            return {verdict::indeterminate, e.what()};
        }
        throw;
    }
}

inline std::string to_string(verdict v)
{
    switch (v) {
        case verdict::invariants_equal: return "InvariantsEqual";
        case verdict::distinct: return "Distinct";
        case verdict::indeterminate: return "Indeterminate";
    }
    return "?";
}

} // namespace hpinv
