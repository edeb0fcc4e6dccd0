#pragma once

#include <string>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/coeff.hpp>
#include <hpinv/error.hpp>
#include <hpinv/expr_parser.hpp>
#include <hpinv/roots.hpp>

namespace hpinv
{

// The line x = slope * y, in the (possibly sheared) working coordinates.
struct tangent_line {
    coeff_value slope;
    unsigned multiplicity = 1;
};

struct germ_profile {
    bivariate_poly original;
    bivariate_poly f; // original after the shear, mini-regular in x
    unsigned k = 0;
    bivariate_poly h_k;
    long shear = 0; // f(x, y) = original(x, y + shear * x)
    bool reduced = true;
};

// gcd(f, f_x, f_y); f is reduced at the origin exactly when this does not
// vanish there.
inline bivariate_poly repeated_factor(const bivariate_poly &f)
{
    return gcd_in_x(gcd_in_x(f, f.derivative(variable::x)), f.derivative(variable::y));
}

inline germ_profile analyze_germ(const bivariate_poly &f, bool require_reduced = true)
{
    if (f.is_zero()) {
        throw error(error_kind::zero_germ, "the zero germ has no invariant");
    }
    if (!f.coeff(0, 0).is_zero()) {
        throw error(error_kind::nonvanishing_at_origin, "f(0, 0) = " + to_string(f.coeff(0, 0)));
    }
    germ_profile p;
    p.original = f;
    p.f = f;
    p.k = f.order();
    p.h_k = f.homogeneous_part(p.k);
    // H_k(1, s) is a nonzero polynomial of degree <= k in s, so one of
    // s = 1..k+1 works
    for (long s = 1; p.h_k.coeff(p.k, 0).is_zero(); ++s) {
        p.shear = s;
        p.f = shear(f, gaussian_rational(s));
        p.h_k = p.f.homogeneous_part(p.k);
    }
    const bivariate_poly g = repeated_factor(p.f);
    p.reduced = g.coeff(0, 0) != gaussian_rational(0) || g.is_constant();
    if (!p.reduced && require_reduced) {
        bivariate_poly back = p.shear == 0 ? g : shear(g, gaussian_rational(-p.shear));
        throw error(error_kind::not_reduced, "repeated factor " + format_poly(back));
    }
    return p;
}

// H_k = c * prod (x - a_i y)^(m_i); multiplicities come from an exact
// squarefree decomposition.
inline std::vector<tangent_line> tangent_cone_lines(const germ_profile &p, mpfr_prec_t prec = 256)
{
    std::vector<tangent_line> out;
    for (const auto &r : uni_roots(p.h_k.dehomogenize(), prec)) {
        out.push_back({r.root, r.multiplicity});
    }
    return out;
}

inline std::vector<tangent_line> singular_cone_lines(const germ_profile &p, mpfr_prec_t prec = 256)
{
    std::vector<tangent_line> out;
    for (auto &l : tangent_cone_lines(p, prec)) {
        if (l.multiplicity >= 2) {
            out.push_back(std::move(l));
        }
    }
    return out;
}

// The line x = a y of the working coordinates written in the original ones:
// x = a / (1 + s a) * y, or y = 0 when 1 + s a vanishes.
inline std::string format_line(const coeff_value &a, long shear_s)
{
    if (shear_s == 0) {
        return "x=" + to_string(a) + "*y";
    }
    const coeff_value den = coeff_value(1) + coeff_value(gaussian_rational(shear_s)) * a;
    if (den.is_zero()) {
        return "y=0";
    }
    if (!den.is_nonzero()) {
        throw indeterminate("line through the shear cannot be located");
    }
    return "x=" + to_string(a / den) + "*y";
}

} // namespace hpinv
