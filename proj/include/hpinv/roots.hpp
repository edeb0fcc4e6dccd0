#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include <hpinv/ball.hpp>
#include <hpinv/big_float.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/error.hpp>
#include <hpinv/upoly.hpp>

namespace hpinv
{

struct polynomial_root {
    coeff_value root;
    unsigned multiplicity = 1;
};

namespace detail
{

inline std::complex<double> horner(const std::vector<std::complex<double>> &c, std::complex<double> z,
                                   std::complex<double> &deriv)
{
    std::complex<double> p = 0;
    deriv = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        deriv = deriv * z + p;
        p = p * z + *it;
    }
    return p;
}

// Double precision Aberth-Ehrlich iteration; only a starting point for the
// multiprecision phase.
inline std::vector<std::complex<double>> aberth_double(const std::vector<std::complex<double>> &c)
{
    const std::size_t n = c.size() - 1;
    std::vector<std::complex<double>> z(n);
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        r = std::max(r, std::pow(std::abs(c[i] / c[n]), 1.0 / static_cast<double>(n - i)));
    }
    if (!(r > 0) || !std::isfinite(r)) {
        r = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double a = 2 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(r, a);
    }
    for (int it = 0; it < 500; ++it) {
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> d;
            const auto p = horner(c, z[i], d);
            if (p == 0.0) {
                continue;
            }
            const auto ratio = p / d;
            std::complex<double> s = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            const auto w = ratio / (1.0 - ratio * s);
            if (std::isfinite(w.real()) && std::isfinite(w.imag())) {
                z[i] -= w;
                worst = std::max(worst, std::abs(w) / std::max(1e-300, std::abs(z[i])));
            }
        }
        if (worst < 1e-15) {
            break;
        }
    }
    return z;
}

inline mp_complex horner_mp(const std::vector<mp_complex> &c, const mp_complex &z, mp_complex &deriv)
{
    const auto prec = z.prec();
    mp_complex p(prec);
    deriv = mp_complex(prec);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        deriv = deriv * z + p;
        p = p * z + *it;
    }
    return p;
}

inline std::vector<mp_complex> aberth_mp(const std::vector<mp_complex> &c, std::vector<mp_complex> z, mpfr_prec_t prec)
{
    const std::size_t n = z.size();
    const int max_iter = 60 + 2 * static_cast<int>(prec);
    const mp_complex one = mp_complex::from(1.0, 0.0, prec);
    std::vector<bool> done(n, false);
    for (int it = 0; it < max_iter; ++it) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) {
                continue;
            }
            mp_complex d(prec);
            const mp_complex p = horner_mp(c, z[i], d);
            if (p.re.is_zero() && p.im.is_zero()) {
                done[i] = true;
                continue;
            }
            if (d.re.is_zero() && d.im.is_zero()) {
                all_done = false;
                continue;
            }
            const mp_complex ratio = p / d;
            mp_complex s(prec);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    const mp_complex diff = z[i] - z[j];
                    if (!(diff.re.is_zero() && diff.im.is_zero())) {
                        s = s + one / diff;
                    }
                }
            }
            const mp_complex den = one - ratio * s;
            if (den.re.is_zero() && den.im.is_zero()) {
                all_done = false;
                continue;
            }
            const mp_complex w = ratio / den;
            z[i] = z[i] - w;
            // converged once the correction is below the working precision
            const big_float aw = abs_bound(w, MPFR_RNDU);
            const big_float az = abs_bound(z[i], MPFR_RNDD);
            if (aw.is_zero() || (!az.is_zero() && aw.exponent() < az.exponent() - static_cast<long>(prec) + 4)) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if (all_done) {
            break;
        }
    }
    return z;
}

struct isolating_disk {
    mp_complex center;
    big_float radius;
};

// Weierstrass/Gerschgorin inclusion: for approximations z_i of the roots of a
// degree-n polynomial, the disks D(z_i, n |W_i|) with W_i = p(z_i) / (lc *
// prod_{j != i} (z_i - z_j)) cover all roots and every connected component
// made of k disks holds exactly k roots. Ball coefficients are handled by
// bounding |W_i| over the whole coefficient family.
inline std::vector<big_float> inclusion_radii(const std::vector<ball_complex> &c, const std::vector<mp_complex> &z)
{
    const std::size_t n = z.size();
    const auto prec = z.empty() ? 64 : z.front().prec();
    std::vector<big_float> radii;
    radii.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ball_complex zi(z[i], big_float(64));
        ball_complex p(prec);
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            p = p * zi + *it;
        }
        ball_complex den = c.back();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                den = den * (zi - ball_complex(z[j], big_float(64)));
            }
        }
        big_float lo = den.abs_lower();
        big_float r(64);
        if (lo.is_zero()) {
            mpfr_set_inf(r.get(), 1);
        } else {
            mpfr_div(r.get(), p.abs_upper().get(), lo.get(), MPFR_RNDU);
            mpfr_mul_ui(r.get(), r.get(), static_cast<unsigned long>(n), MPFR_RNDU);
        }
        radii.push_back(std::move(r));
    }
    return radii;
}

inline bool disks_overlap(const mp_complex &a, const big_float &ra, const mp_complex &b, const big_float &rb)
{
    if (mpfr_inf_p(ra.get()) || mpfr_inf_p(rb.get())) {
        return true;
    }
    const big_float d = abs_bound(a - b, MPFR_RNDD);
    big_float s(64);
    mpfr_add(s.get(), ra.get(), rb.get(), MPFR_RNDU);
    // pad for the rounding of a - b
    big_float pad = abs_bound(a - b, MPFR_RNDU);
    mpfr_mul_2si(pad.get(), pad.get(), 2 - static_cast<long>(a.prec()), MPFR_RNDU);
    mpfr_add(s.get(), s.get(), pad.get(), MPFR_RNDU);
    return mpfr_lessequal_p(d.get(), s.get()) != 0;
}

struct root_cluster {
    std::vector<std::size_t> members;
};

inline std::vector<root_cluster> connected_components(const std::vector<mp_complex> &z, const std::vector<big_float> &r)
{
    const std::size_t n = z.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a) {
            a = parent[a] = parent[parent[a]];
        }
        return a;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (disks_overlap(z[i], r[i], z[j], r[j])) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<root_cluster> out;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[root])].members.push_back(i);
    }
    return out;
}

inline std::vector<mp_complex> approximate_roots(const std::vector<ball_complex> &c, mpfr_prec_t prec)
{
    const std::size_t n = c.size() - 1;
    std::vector<std::complex<double>> cd;
    cd.reserve(c.size());
    for (const auto &b : c) {
        cd.push_back(b.approx());
    }
    std::vector<mp_complex> cm;
    cm.reserve(c.size());
    const mpfr_prec_t wp = prec + 32;
    for (const auto &b : c) {
        mp_complex m(wp);
        mpfr_set(m.re.get(), b.mid().re.get(), MPFR_RNDN);
        mpfr_set(m.im.get(), b.mid().im.get(), MPFR_RNDN);
        cm.push_back(std::move(m));
    }
    std::vector<mp_complex> z;
    z.reserve(n);
    bool finite = std::all_of(cd.begin(), cd.end(), [](auto v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    if (finite && std::abs(cd.back()) > 0) {
        for (const auto &s : aberth_double(cd)) {
            z.push_back(mp_complex::from(s.real(), s.imag(), wp));
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const double a = 2 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
            z.push_back(mp_complex::from(std::cos(a), std::sin(a), wp));
        }
    }
    // Separate coincident starting points; the inclusion test needs distinct nodes.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const mp_complex d = z[i] - z[j];
            if (d.re.is_zero() && d.im.is_zero()) {
                z[i] = z[i] + mp_complex::from(1e-3 * static_cast<double>(i + 1), 1e-3, wp);
            }
        }
    }
    z = aberth_mp(cm, std::move(z), wp);
    std::vector<mp_complex> out;
    out.reserve(n);
    for (auto &v : z) {
        mp_complex w(prec);
        mpfr_set(w.re.get(), v.re.get(), MPFR_RNDN);
        mpfr_set(w.im.get(), v.im.get(), MPFR_RNDN);
        out.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const mp_complex d = out[i] - out[j];
            if (d.re.is_zero() && d.im.is_zero()) {
                // nudge by a few ulps so the inclusion denominators stay nonzero
                big_float e = abs_bound(out[i], MPFR_RNDU);
                if (e.is_zero()) {
                    mpfr_set_ui(e.get(), 1, MPFR_RNDN);
                }
                mp_complex nudge(prec);
                mpfr_mul_2si(nudge.re.get(), e.get(), -static_cast<long>(prec) / 2 - static_cast<long>(i), MPFR_RNDN);
                out[i] = out[i] + nudge;
            }
        }
    }
    return out;
}

// Isolates the roots of a polynomial with ball coefficients. Components with
// more than one disk are returned as clusters.
inline std::vector<std::pair<root_cluster, std::vector<isolating_disk>>> isolate(const std::vector<ball_complex> &c,
                                                                                mpfr_prec_t prec)
{
    if (!c.back().certified_nonzero()) {
        throw indeterminate("leading coefficient may vanish");
    }
    const std::vector<mp_complex> z = approximate_roots(c, prec);
    const std::vector<big_float> r = inclusion_radii(c, z);
    std::vector<std::pair<root_cluster, std::vector<isolating_disk>>> out;
    for (auto &comp : connected_components(z, r)) {
        std::vector<isolating_disk> disks;
        for (auto i : comp.members) {
            disks.push_back({z[i], r[i]});
        }
        out.emplace_back(std::move(comp), std::move(disks));
    }
    return out;
}

// Smallest disk (centred at the mean) covering a cluster of disks.
inline ball_complex cluster_ball(const std::vector<isolating_disk> &disks, mpfr_prec_t prec)
{
    mp_complex centre(prec);
    for (const auto &d : disks) {
        centre = centre + d.center;
    }
    big_float n(static_cast<double>(disks.size()), prec);
    mpfr_div(centre.re.get(), centre.re.get(), n.get(), MPFR_RNDN);
    mpfr_div(centre.im.get(), centre.im.get(), n.get(), MPFR_RNDN);
    big_float rad(64);
    for (const auto &d : disks) {
        big_float t = abs_bound(d.center - centre, MPFR_RNDU);
        // slack for the rounding of the subtraction
        big_float pad(64);
        mpfr_mul_2si(pad.get(), t.get(), 2 - static_cast<long>(prec), MPFR_RNDU);
        mpfr_add(t.get(), t.get(), pad.get(), MPFR_RNDU);
        mpfr_add(t.get(), t.get(), d.radius.get(), MPFR_RNDU);
        if (mpfr_greater_p(t.get(), rad.get())) {
            rad = t;
        }
    }
    return ball_complex(std::move(centre), std::move(rad));
}

// A cluster of k disks is accepted as one k-fold root once its enclosing
// radius drops below 2^(8 - prec / (2k)) * max(1, |centre|).
inline bool is_tight_cluster(const ball_complex &b, std::size_t k, mpfr_prec_t prec)
{
    big_float scale = b.abs_upper();
    if (mpfr_cmp_ui(scale.get(), 1) < 0) {
        mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
    }
    const long shift = 8 - static_cast<long>(prec) / (2 * static_cast<long>(k));
    mpfr_mul_2si(scale.get(), scale.get(), shift, MPFR_RNDD);
    return mpfr_lessequal_p(b.rad().get(), scale.get()) != 0;
}

inline std::vector<ball_complex> to_balls(const qi_upoly &p, mpfr_prec_t prec)
{
    std::vector<ball_complex> c;
    c.reserve(p.coeffs().size());
    for (const auto &x : p.coeffs()) {
        c.push_back(ball_complex::exact(x, prec));
    }
    return c;
}

// Integer common denominator of all real and imaginary parts.
inline integer common_denominator(const qi_upoly &p)
{
    integer d = 1;
    for (const auto &c : p.coeffs()) {
        d = lcm(d, c.re().get_den());
        d = lcm(d, c.im().get_den());
    }
    return d;
}

inline integer round_nearest(const big_float &x)
{
    big_float t(x.prec() + 2);
    mpfr_round(t.get(), x.get());
    integer z;
    mpfr_get_z(z.get_mpz_t(), t.get(), MPFR_RNDN);
    return z;
}

// Roots of a squarefree exact polynomial: Gaussian rational roots exactly,
// the rest as certified balls.
inline std::vector<coeff_value> squarefree_roots(const qi_upoly &f, mpfr_prec_t prec)
{
    std::vector<coeff_value> out;
    if (f.degree() <= 0) {
        return out;
    }
    if (f.degree() == 1) {
        out.emplace_back(-f.coeffs()[0] / f.coeffs()[1]);
        return out;
    }
    const auto isolated = isolate(to_balls(f, prec), prec);
    // Gaussian-integer form: lc * r is an algebraic integer for every root r.
    const integer den = common_denominator(f);
    const gaussian_rational lead = f.lc() * gaussian_rational(rational(den));
    for (const auto &[comp, disks] : isolated) {
        if (disks.size() != 1) {
            throw indeterminate("roots of a squarefree factor are not yet separated");
        }
        const auto &d = disks.front();
        // |lead| * radius < 1/4 guarantees a Gaussian rational root is found by rounding.
        const ball_complex lead_b = ball_complex::exact(lead, prec);
        big_float bound(64);
        mpfr_mul(bound.get(), lead_b.abs_upper().get(), d.radius.get(), MPFR_RNDU);
        if (mpfr_cmp_d(bound.get(), 0.25) >= 0) {
            throw indeterminate("isolating disk too wide for rational root recognition");
        }
        const ball_complex scaled = lead_b * ball_complex(d.center, d.radius);
        const gaussian_rational candidate =
            gaussian_rational(rational(round_nearest(scaled.mid().re)), rational(round_nearest(scaled.mid().im))) / lead;
        if (f(candidate).is_zero()) {
            out.emplace_back(candidate);
        } else {
            out.emplace_back(ball_complex(d.center, d.radius));
        }
    }
    return out;
}

} // namespace detail

// All complex roots of q with multiplicities. Gaussian rational roots of an
// exact polynomial come back exact; everything else as certified balls whose
// radii shrink with `prec`. Throws `indeterminate` when the roots cannot be
// separated at this precision.
inline std::vector<polynomial_root> uni_roots(const cv_upoly &q, mpfr_prec_t prec = 256)
{
    if (q.is_zero()) {
        throw error(error_kind::zero_polynomial, "roots of the zero polynomial");
    }
    std::vector<polynomial_root> out;
    if (q.degree() == 0) {
        return out;
    }
    // exact zero roots
    std::size_t v = 0;
    while (detail::structurally_zero(q.coeffs()[v])) {
        ++v;
    }
    if (v > 0) {
        out.push_back({coeff_value{}, static_cast<unsigned>(v)});
    }
    const cv_upoly p(std::vector<coeff_value>(q.coeffs().begin() + static_cast<long>(v), q.coeffs().end()));
    if (p.degree() <= 0) {
        return out;
    }
    if (auto exact = to_exact_poly(p)) {
        const auto factors = squarefree_decomposition(*exact);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            for (auto &r : detail::squarefree_roots(factors[j], prec)) {
                out.push_back({std::move(r), static_cast<unsigned>(j + 1)});
            }
        }
        return out;
    }
    if (p.degree() == 1 && p.coeffs()[1].is_nonzero()) {
        out.push_back({-p.coeffs()[0] / p.coeffs()[1], 1});
        return out;
    }
    std::vector<ball_complex> c;
    for (const auto &x : p.coeffs()) {
        c.push_back(x.to_ball(prec));
    }
    for (const auto &[comp, disks] : detail::isolate(c, prec)) {
        if (disks.size() == 1) {
            out.push_back({ball_complex(disks.front().center, disks.front().radius), 1});
            continue;
        }
        ball_complex b = detail::cluster_ball(disks, prec);
        if (!detail::is_tight_cluster(b, disks.size(), prec)) {
            throw indeterminate("root cluster not resolved at this precision");
        }
        out.push_back({std::move(b), static_cast<unsigned>(disks.size())});
    }
    return out;
}

inline std::vector<polynomial_root> uni_roots(const qi_upoly &q, mpfr_prec_t prec = 256)
{
    return uni_roots(to_coeff_poly(q), prec);
}

} // namespace hpinv
