#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/error.hpp>
#include <hpinv/puiseux_series.hpp>
#include <hpinv/roots.hpp>
#include <hpinv/series_ops.hpp>
#include <hpinv/upoly.hpp>

namespace hpinv
{

// One edge of the lower Newton polygon of sum_i x^i G_i(y). A missing slope
// marks the degenerate edge of the root x = 0 (G_0 = ... = G_{v-1} = 0).
struct newton_edge {
    std::optional<rational> slope;
    std::size_t i_begin = 0;
    std::size_t i_end = 0;
    rational level; // j + i * slope, constant along the edge
    cv_upoly char_poly;
};

namespace detail
{

// kappa^s with the principal determination; exact when s is an integer.
inline coeff_value principal_power(const gaussian_rational &kappa, const rational &s, mpfr_prec_t prec)
{
    if (s.get_den() == 1 || kappa == gaussian_rational(1)) {
        return coeff_value(pow(kappa, s.get_num().get_si()));
    }
    const ball_complex root = nth_root(ball_complex::exact(kappa, prec), s.get_den().get_si());
    return coeff_value(pow(root, s.get_num().get_si()));
}

// exp(2 pi i k e): the factor by which going k times around y = 0 multiplies
// the coefficient of y^e.
inline coeff_value monodromy_factor(long k, const rational &e, mpfr_prec_t prec)
{
    const long d = e.get_den().get_si();
    const integer num = e.get_num() % d;
    long n = (k % d) * num.get_si() % d;
    if (n < 0) {
        n += d;
    }
    if (n == 0) {
        return coeff_value(1);
    }
    if (2 * n == d) {
        return coeff_value(-1);
    }
    if (4 * n == d) {
        return coeff_value(gaussian_rational::imaginary_unit());
    }
    if (4 * n == 3 * d) {
        return coeff_value(-gaussian_rational::imaginary_unit());
    }
    return coeff_value(root_of_unity(n, d, prec));
}

} // namespace detail

// How an arc is obtained from an exact representative: y = prod kappa^D * Y
// for the listed pairs, then the monodromy y^e -> exp(2 pi i twist e) y^e.
// Both act on a series coefficientwise by factor(e).
struct series_frame {
    std::vector<std::pair<gaussian_rational, long>> scale;
    long twist = 0;

    bool trivial() const
    {
        return scale.empty() && twist == 0;
    }
    gaussian_rational y_scale() const
    {
        gaussian_rational s(1);
        for (const auto &[kappa, D] : scale) {
            s *= pow(kappa, D);
        }
        return s;
    }
    coeff_value factor(const rational &e, mpfr_prec_t prec) const
    {
        coeff_value v(1);
        for (const auto &[kappa, D] : scale) {
            v *= detail::principal_power(kappa, -e * rational(D), prec);
        }
        return v * detail::monodromy_factor(twist, e, prec);
    }
    puiseux_series apply(const puiseux_series &s, mpfr_prec_t prec) const
    {
        if (trivial()) {
            return s;
        }
        puiseux_series out(s.truncation());
        for (const auto &[e, c] : s.terms()) {
            out.add_term(e, factor(e, prec) * c);
        }
        return out;
    }
};

struct puiseux_arc {
    // Known terms; truncation() is the order T from which terms are unknown,
    // absent when the arc is an exact root.
    puiseux_series series;
    unsigned multiplicity = 1;
    // Every term of g(series(y), y) below this exponent vanishes; absent when
    // the substitution is identically zero.
    std::optional<rational> residual_bound;
    // series = frame.apply(representative); the representative keeps exact
    // coefficients wherever the conjugate orbit allows it.
    puiseux_series representative;
    series_frame frame;
    mpfr_prec_t prec = 256;

    coeff_value tangent_coefficient() const
    {
        return series.coeff(rational(1));
    }
    bool terminating() const
    {
        return series.is_exact();
    }
};

struct expansion_options {
    mpfr_prec_t prec = 256;
};

namespace detail
{

struct np_point {
    std::size_t i;
    rational j;
};

// Vertices of the lower convex hull of points sorted by i.
inline std::vector<np_point> lower_hull(const std::vector<np_point> &pts)
{
    std::vector<np_point> h;
    for (const auto &p : pts) {
        while (h.size() >= 2) {
            const auto &a = h[h.size() - 2];
            const auto &b = h.back();
            // drop b when it lies on or above the segment a-p
            const rational lhs = (b.j - a.j) * rational(static_cast<long>(p.i - a.i));
            const rational rhs = (p.j - a.j) * rational(static_cast<long>(b.i - a.i));
            if (lhs >= rhs) {
                h.pop_back();
            } else {
                break;
            }
        }
        h.push_back(p);
    }
    return h;
}

struct polygon_scan {
    std::size_t v = 0;     // leading empty coefficients
    bool v_exact = true;   // ... and all of them exactly zero
    std::vector<newton_edge> edges;
};

inline cv_upoly edge_polynomial(const x_poly &g, std::size_t a, std::size_t b, const rational &level,
                                const rational &slope)
{
    std::vector<coeff_value> c(b - a + 1);
    for (std::size_t i = a; i <= b; ++i) {
        c[i - a] = g[i].coeff(level - slope * rational(static_cast<long>(i)));
    }
    return cv_upoly(std::move(c));
}

// Newton polygon of the part of g with x-degree <= r. Ball coefficients
// that might vanish are only tolerated where they cannot change an edge of
// slope below T.
inline polygon_scan scan_polygon(const x_poly &g, std::size_t r, const std::optional<rational> &T)
{
    polygon_scan out;
    std::vector<np_point> pts;
    std::vector<np_point> unsure;
    // leading coefficients with no certified nonzero term; they count as an
    // exact root only when they are exactly zero
    while (out.v < r && !g[out.v].order().order) {
        out.v_exact = out.v_exact && g[out.v].empty() && g[out.v].is_exact();
        ++out.v;
    }
    for (std::size_t i = 0; i <= r && i < g.size(); ++i) {
        const auto info = g[i].order();
        if (info.order) {
            pts.push_back({i, *info.order});
        }
        if (info.first_unknown) {
            unsure.push_back({i, *info.first_unknown});
        }
    }
    if (pts.empty() || pts.back().i != r) {
        throw indeterminate("Newton polygon vertex cannot be certified nonzero");
    }
    const auto hull = lower_hull(pts);
    // split vertex: edges left of it have slope >= T
    std::size_t split = 0;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const rational nu = (hull[k].j - hull[k + 1].j) / rational(static_cast<long>(hull[k + 1].i - hull[k].i));
        if (T && nu >= *T) {
            split = k + 1;
        }
    }
    auto height = [&](std::size_t i) -> rational {
        for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
            if (i >= hull[k].i && i <= hull[k + 1].i) {
                const rational t = rational(static_cast<long>(i - hull[k].i)) /
                                   rational(static_cast<long>(hull[k + 1].i - hull[k].i));
                return hull[k].j + t * (hull[k + 1].j - hull[k].j);
            }
        }
        return hull.back().j;
    };
    for (const auto &u : unsure) {
        if (!T) {
            throw indeterminate("undecided coefficient in the Newton polygon");
        }
        const auto &sv = hull[split];
        const rational bound =
            u.i >= sv.i ? height(u.i) : rational(sv.j + rational(static_cast<long>(sv.i - u.i)) * *T);
        if (u.j < bound) {
            throw indeterminate("undecided coefficient below the Newton polygon");
        }
    }
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        newton_edge e;
        e.i_begin = hull[k].i;
        e.i_end = hull[k + 1].i;
        e.slope = (hull[k].j - hull[k + 1].j) / rational(static_cast<long>(e.i_end - e.i_begin));
        e.level = hull[k].j + *e.slope * rational(static_cast<long>(e.i_begin));
        e.char_poly = edge_polynomial(g, e.i_begin, e.i_end, e.level, *e.slope);
        out.edges.push_back(std::move(e));
    }
    return out;
}

// Smallest x-order of g(x, 0); the number of branches through the origin
// when g is mini-regular.
inline std::size_t x_order(const x_poly &g)
{
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i].coeff(rational(0)).is_nonzero()) {
            return i;
        }
    }
    return g.size();
}

inline std::optional<rational> vanishing_bound(const puiseux_series &s)
{
    if (auto e = s.min_exponent()) {
        return e;
    }
    return s.truncation();
}

// Multiplies the coefficient of y^e by kappa^(D e), D e being an integer.
inline puiseux_series rescale(const puiseux_series &s, const gaussian_rational &kappa, long D)
{
    puiseux_series out(s.truncation());
    for (const auto &[e, c] : s.terms()) {
        const rational de = e * rational(D);
        out.add_term(e, coeff_value(pow(kappa, de.get_num().get_si())) * c);
    }
    return out;
}

// Expansion state. The recursion runs in a rescaled variable Y with
// y = prod kappa^D * Y (kappa exact), chosen so that a representative of each
// orbit of conjugate branches keeps exact coefficients. Every branch found
// stands for its images under the monodromies listed in `twists`.
struct np_state {
    puiseux_series prefix; // in Y
    x_poly g;              // g(prefix + x', Y)
    rational mu;
    std::size_t r;
    std::vector<std::pair<gaussian_rational, long>> frame;
    std::vector<long> twists{0};
};

// The root of the edge polynomial E enclosed by `approx` as an exact
// algebraic number when E has exact coefficients and the root is isolated;
// otherwise the ball itself.
inline coeff_value algebraic_root(const cv_upoly &E, const ball_complex &approx, mpfr_prec_t prec)
{
    const auto ex = to_exact_poly(E);
    if (!ex) {
        return approx;
    }
    const qi_upoly z{gaussian_rational(0), gaussian_rational(1)};
    qi_upoly s = exact_quotient(monic(*ex), gcd(*ex, ex->derivative()));
    while (s.coeff(0).is_zero()) {
        s = exact_quotient(s, z);
    }
    std::optional<ball_complex> disk;
    for (const auto &r : uni_roots(s, prec)) {
        if (!r.root.to_ball(prec).overlaps(approx)) {
            continue;
        }
        if (disk || r.root.is_exact()) {
            return r.root.is_exact() && !disk ? r.root : coeff_value(approx);
        }
        disk = r.root.ball();
    }
    if (!disk) {
        return approx;
    }
    return algebraic_number{std::make_shared<const algebraic_field>(s, *disk, prec), z};
}

inline void emit(std::vector<puiseux_arc> &out, const np_state &st, const puiseux_series &prefix, unsigned mult,
                 const std::optional<rational> &bound, mpfr_prec_t prec)
{
    for (const long t : st.twists) {
        puiseux_arc a;
        a.frame.scale = st.frame;
        a.frame.twist = t;
        a.series = a.frame.apply(prefix, prec);
        a.representative = prefix;
        a.multiplicity = mult;
        a.residual_bound = bound;
        a.prec = prec;
        out.push_back(std::move(a));
    }
}

} // namespace detail

// Newton polygon of g (as a polynomial in x over y-series), restricted to the
// branches through the origin.
inline std::vector<newton_edge> newton_polygon(const bivariate_poly &g)
{
    if (g.is_zero()) {
        throw error(error_kind::zero_polynomial, "Newton polygon of zero");
    }
    const x_poly xp = to_x_poly(g);
    const std::size_t r = detail::x_order(xp);
    if (r == 0 || r >= xp.size()) {
        return {};
    }
    auto scan = detail::scan_polygon(xp, r, std::nullopt);
    std::vector<newton_edge> out;
    if (scan.v > 0) {
        newton_edge e;
        e.i_begin = 0;
        e.i_end = scan.v;
        e.char_poly = cv_upoly::monomial(xp[scan.v].coeff(xp[scan.v].min_exponent().value_or(rational(0))), scan.v);
        out.push_back(std::move(e));
    }
    for (auto &e : scan.edges) {
        out.push_back(std::move(e));
    }
    return out;
}

// All branches x = gamma(y) of g = 0 through the origin, known below order T.
// Each Puiseux root is returned separately; branches that agree below T are
// returned as one arc carrying their number as multiplicity.
inline std::vector<puiseux_arc> expand_branches(const bivariate_poly &g, const rational &T,
                                                const expansion_options &opt = {})
{
    using namespace detail;
    if (g.is_zero()) {
        throw error(error_kind::zero_polynomial, "branches of the zero polynomial");
    }
    const unsigned m = g.order();
    std::vector<puiseux_arc> out;
    if (m == 0) {
        return out;
    }
    if (g.coeff(m, 0).is_zero()) {
        throw error(error_kind::not_mini_regular, "x^" + std::to_string(m) + " is missing from the initial form");
    }

    std::vector<np_state> stack;
    {
        np_state s0;
        const rational cap = rational(m) * T;
        for (auto &c : to_x_poly(g)) {
            s0.g.push_back(c.cut(cap));
        }
        s0.mu = 0;
        s0.r = m;
        stack.push_back(std::move(s0));
    }

    while (!stack.empty()) {
        np_state st = std::move(stack.back());
        stack.pop_back();
        const polygon_scan scan = scan_polygon(st.g, st.r, T);

        std::size_t lumped = 0;
        if (scan.v > 0) {
            if (scan.v_exact) {
                emit(out, st, st.prefix, static_cast<unsigned>(scan.v), std::nullopt, opt.prec);
            } else {
                lumped += scan.v;
            }
        }
        std::size_t first_open = 0;
        while (first_open < scan.edges.size() && *scan.edges[first_open].slope >= T) {
            lumped += scan.edges[first_open].i_end - scan.edges[first_open].i_begin;
            ++first_open;
        }
        if (lumped > 0) {
            emit(out, st, st.prefix.truncated(T), static_cast<unsigned>(lumped), vanishing_bound(st.g[0]), opt.prec);
        }

        const long D0 = st.prefix.ramification().get_si();
        for (std::size_t k = first_open; k < scan.edges.size(); ++k) {
            const auto &edge = scan.edges[k];
            const rational nu = *edge.slope;
            const rational scaled = nu * rational(D0);
            const long p = scaled.get_num().get_si();
            const long q = scaled.get_den().get_si();
            // Only every q-th coefficient of the edge polynomial can be
            // nonzero, so its roots come in orbits c * exp(2 pi i j / q).
            std::vector<coeff_value> pc;
            const auto &cp = edge.char_poly.coeffs();
            for (std::size_t i = 0; i < cp.size(); ++i) {
                if (i % static_cast<std::size_t>(q) == 0) {
                    pc.push_back(cp[i]);
                } else if (!cp[i].is_zero()) {
                    throw std::logic_error("edge polynomial is not a polynomial in z^q");
                }
            }
            // exact roots of the edge polynomial itself, found on demand
            std::optional<std::vector<gaussian_rational>> exact_roots;
            auto exact_qth_root = [&](const gaussian_rational &w) -> std::optional<gaussian_rational> {
                if (!exact_roots) {
                    exact_roots.emplace();
                    for (const auto &z : uni_roots(edge.char_poly, opt.prec)) {
                        if (z.root.is_exact() && !z.root.is_zero()) {
                            exact_roots->push_back(z.root.exact());
                        }
                    }
                }
                for (const auto &z : *exact_roots) {
                    if (pow(z, q) == w) {
                        return z;
                    }
                }
                return std::nullopt;
            };
            for (const auto &root : uni_roots(cv_upoly(std::move(pc)), opt.prec)) {
                if (!root.root.is_nonzero()) {
                    throw indeterminate("characteristic root cannot be separated from zero");
                }
                np_state next;
                next.mu = nu;
                next.r = root.multiplicity;
                next.frame = st.frame;
                for (const long t : st.twists) {
                    for (long j = 0; j < q; ++j) {
                        next.twists.push_back(t + D0 * j);
                    }
                }
                next.twists.erase(next.twists.begin());
                const x_poly *base = &st.g;
                x_poly rescaled;
                coeff_value c;
                if (q == 1 && !root.root.is_ball()) {
                    c = root.root;
                    next.prefix = st.prefix;
                } else if (root.root.is_exact() && exact_qth_root(root.root.exact())) {
                    c = coeff_value(*exact_qth_root(root.root.exact()));
                    next.prefix = st.prefix;
                } else if (root.root.is_exact()) {
                    // With y = kappa^D0 Y the orbit contains the exact root w^b.
                    const gaussian_rational &w = root.root.exact();
                    long a = 1;
                    while ((a * p - 1) % q != 0) {
                        ++a;
                    }
                    const long b = (1 - a * p) / q;
                    const gaussian_rational kappa = pow(w, -a);
                    for (const auto &gi : st.g) {
                        rescaled.push_back(rescale(gi, kappa, D0));
                    }
                    base = &rescaled;
                    next.prefix = rescale(st.prefix, kappa, D0);
                    next.frame.emplace_back(kappa, D0);
                    c = coeff_value(pow(w, b));
                } else {
                    const ball_complex w = root.root.to_ball(opt.prec);
                    c = algebraic_root(edge.char_poly, q == 1 ? w : nth_root(w, q), opt.prec);
                    next.prefix = st.prefix;
                }
                next.prefix.add_term(nu, c);
                const rational cap = edge.level + rational(static_cast<long>(root.multiplicity)) * (T - nu);
                std::vector<std::optional<rational>> caps(base->size());
                for (std::size_t i = 0; i < caps.size(); ++i) {
                    caps[i] = cap - nu * rational(static_cast<long>(i));
                }
                next.g = taylor_shift(*base, puiseux_series::monomial(c, nu), caps);
                // the weighted initial form now has a root of order r at 0
                for (std::size_t i = 0; i < next.r && i < next.g.size(); ++i) {
                    next.g[i].set_term(edge.level - nu * rational(static_cast<long>(i)), coeff_value{});
                }
                stack.push_back(std::move(next));
            }
        }
    }
    return out;
}

// Re-expands g below the larger order T and keeps the branches that extend
// `arc` (several when a truncated cluster splits).
inline std::vector<puiseux_arc> refine_arc(const bivariate_poly &g, const puiseux_arc &arc, const rational &T,
                                           mpfr_prec_t prec = 256)
{
    // an exact root is already known to every order
    if (arc.terminating()) {
        return {arc};
    }
    const rational known = *arc.series.truncation();
    std::vector<puiseux_arc> out;
    for (auto &cand : expand_branches(g, T, {prec})) {
        bool agrees = true;
        auto check = [&](const rational &e) {
            if (e < known && !arc.series.coeff(e).may_equal(cand.series.coeff(e))) {
                agrees = false;
            }
        };
        for (const auto &t : arc.series.terms()) {
            check(t.first);
        }
        for (const auto &t : cand.series.terms()) {
            check(t.first);
        }
        if (agrees) {
            out.push_back(std::move(cand));
        }
    }
    return out;
}

} // namespace hpinv
