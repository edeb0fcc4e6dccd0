#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <hpinv/coeff.hpp>
#include <hpinv/poly_core.hpp>
#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

using cv_upoly = upoly<coeff_value>;

inline cv_upoly to_coeff_poly(const qi_upoly &p)
{
    std::vector<coeff_value> c;
    c.reserve(p.coeffs().size());
    for (const auto &x : p.coeffs()) {
        c.emplace_back(x);
    }
    return cv_upoly(std::move(c));
}

// Returns the exact polynomial if every coefficient is exact.
inline std::optional<qi_upoly> to_exact_poly(const cv_upoly &p)
{
    std::vector<gaussian_rational> c;
    c.reserve(p.coeffs().size());
    for (const auto &x : p.coeffs()) {
        if (!x.is_exact()) {
            return std::nullopt;
        }
        c.push_back(x.exact());
    }
    return qi_upoly(std::move(c));
}

} // namespace hpinv
