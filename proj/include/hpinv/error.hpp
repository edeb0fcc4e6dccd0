#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hpinv
{

enum class error_kind {
    syntax,
    non_integer_exponent,
    unknown_identifier,
    division_by_polynomial,
    division_by_zero,
    zero_polynomial,
    indeterminate,
    precision_exhausted,
    not_mini_regular,
    not_reduced,
    zero_germ,
    nonvanishing_at_origin,
    arc_in_zero_set,
    shared_component,
    cone_consistency_violation,
    root_collision,
    degenerate_fit,
    invalid_argument,
};

inline std::string_view to_string(error_kind k)
{
    switch (k) {
        case error_kind::syntax: return "SyntaxError";
        case error_kind::non_integer_exponent: return "NonIntegerExponent";
        case error_kind::unknown_identifier: return "UnknownIdentifier";
        case error_kind::division_by_polynomial: return "DivisionByPolynomial";
        case error_kind::division_by_zero: return "DivisionByZero";
        case error_kind::zero_polynomial: return "ZeroPolynomial";
        case error_kind::indeterminate: return "Indeterminate";
        case error_kind::precision_exhausted: return "PrecisionExhausted";
        case error_kind::not_mini_regular: return "NotMiniRegular";
        case error_kind::not_reduced: return "NotReduced";
        case error_kind::zero_germ: return "ZeroGerm";
        case error_kind::nonvanishing_at_origin: return "NonvanishingAtOrigin";
        case error_kind::arc_in_zero_set: return "ArcInZeroSet";
        case error_kind::shared_component: return "SharedComponent";
        case error_kind::cone_consistency_violation: return "ConeConsistencyViolation";
        case error_kind::root_collision: return "RootCollision";
        case error_kind::degenerate_fit: return "DegenerateFit";
        case error_kind::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

// Base of every exception thrown by the library; carries a stable kind tag.
class error : public std::runtime_error
{
public:
    error(error_kind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), m_kind(kind)
    {
    }

    error_kind kind() const noexcept
    {
        return m_kind;
    }

private:
    error_kind m_kind;
};

class parse_error : public error
{
public:
    parse_error(error_kind kind, std::size_t pos, const std::string &what)
        : error(kind, what + " at position " + std::to_string(pos)), m_pos(pos)
    {
    }

    std::size_t position() const noexcept
    {
        return m_pos;
    }

private:
    std::size_t m_pos;
};

// Raised when ball arithmetic cannot decide a sign, a zero test or an
// ordering at the current working precision. Drivers catch it and retry
// at a higher precision.
class indeterminate : public error
{
public:
    explicit indeterminate(const std::string &what) : error(error_kind::indeterminate, what) {}
};

} // namespace hpinv
