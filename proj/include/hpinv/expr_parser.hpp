#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <hpinv/bivariate_poly.hpp>
#include <hpinv/error.hpp>
#include <hpinv/gaussian_rational.hpp>

namespace hpinv
{

namespace detail
{

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' uint)?
//   base   := number | imag | 'i' | 'x' | 'y' | '(' expr ')' | '-' factor
// where imag is a literal such as "2/3 i" or "5i" (the form format_poly emits).
class poly_parser
{
public:
    explicit poly_parser(std::string_view src) : m_src(src) {}

    bivariate_poly parse()
    {
        skip_space();
        if (at_end()) {
            throw parse_error(error_kind::syntax, m_pos, "empty expression");
        }
        bivariate_poly p = expr();
        skip_space();
        if (!at_end()) {
            throw parse_error(error_kind::syntax, m_pos, std::string("unexpected '") + m_src[m_pos] + "'");
        }
        return p;
    }

private:
    bool at_end() const
    {
        return m_pos >= m_src.size();
    }
    char peek() const
    {
        return at_end() ? '\0' : m_src[m_pos];
    }
    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(m_src[m_pos]))) {
            ++m_pos;
        }
    }
    bool accept(char c)
    {
        skip_space();
        if (peek() == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    bivariate_poly expr()
    {
        bivariate_poly acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    bivariate_poly term()
    {
        bivariate_poly acc = factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * factor();
            } else if (accept('/')) {
                const std::size_t at = m_pos;
                const bivariate_poly d = factor();
                if (!d.is_constant()) {
                    throw parse_error(error_kind::division_by_polynomial, at, "divisor is not a constant");
                }
                if (d.is_zero()) {
                    throw parse_error(error_kind::division_by_zero, at, "division by zero");
                }
                acc = d.coeff(0, 0).inverse() * acc;
            } else {
                return acc;
            }
        }
    }

    bivariate_poly factor()
    {
        bivariate_poly b = base();
        if (accept('^')) {
            skip_space();
            const std::size_t at = m_pos;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                throw parse_error(error_kind::non_integer_exponent, at, "exponent must be a non-negative integer");
            }
            const rational e = number();
            if (e.get_den() != 1) {
                throw parse_error(error_kind::non_integer_exponent, at, "exponent must be a non-negative integer");
            }
            if (!e.get_num().fits_ulong_p() || e.get_num() > 100000) {
                throw parse_error(error_kind::syntax, at, "exponent too large");
            }
            return pow(b, static_cast<unsigned>(e.get_num().get_ui()));
        }
        return b;
    }

    bivariate_poly base()
    {
        skip_space();
        const std::size_t at = m_pos;
        const char c = peek();
        if (c == '(') {
            ++m_pos;
            bivariate_poly p = expr();
            if (!accept(')')) {
                throw parse_error(error_kind::syntax, m_pos, "expected ')'");
            }
            return p;
        }
        if (c == '-') {
            ++m_pos;
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return literal();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = m_pos;
            while (end < m_src.size() && (std::isalnum(static_cast<unsigned char>(m_src[end])) || m_src[end] == '_')) {
                ++end;
            }
            const std::string_view id = m_src.substr(m_pos, end - m_pos);
            if (id == "x") {
                m_pos = end;
                return bivariate_poly::var(variable::x);
            }
            if (id == "y") {
                m_pos = end;
                return bivariate_poly::var(variable::y);
            }
            if (id == "i") {
                m_pos = end;
                return bivariate_poly(gaussian_rational::imaginary_unit());
            }
            throw parse_error(error_kind::unknown_identifier, at, "unknown identifier '" + std::string(id) + "'");
        }
        if (at_end()) {
            throw parse_error(error_kind::syntax, at, "unexpected end of input");
        }
        throw parse_error(error_kind::syntax, at, std::string("unexpected '") + c + "'");
    }

    // Unsigned decimal number, exact.
    rational number()
    {
        const std::size_t start = m_pos;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++m_pos;
        }
        std::string digits(m_src.substr(start, m_pos - start));
        integer den = 1;
        if (peek() == '.' && m_pos + 1 < m_src.size() && std::isdigit(static_cast<unsigned char>(m_src[m_pos + 1]))) {
            ++m_pos;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                digits += peek();
                den *= 10;
                ++m_pos;
            }
        }
        rational q{integer(digits, 10), den};
        q.canonicalize();
        return q;
    }

    // A number, possibly the imaginary literal "p/q i" or "p i".
    bivariate_poly literal()
    {
        rational v = number();
        const std::size_t after_num = m_pos;
        // p/q i
        if (peek() == '/') {
            std::size_t k = m_pos + 1;
            if (k < m_src.size() && std::isdigit(static_cast<unsigned char>(m_src[k]))) {
                m_pos = k;
                const rational d = number();
                if (imaginary_suffix()) {
                    if (d == 0) {
                        throw parse_error(error_kind::division_by_zero, k, "division by zero");
                    }
                    return bivariate_poly(gaussian_rational(rational(0), v / d));
                }
            }
            m_pos = after_num;
        }
        if (imaginary_suffix()) {
            return bivariate_poly(gaussian_rational(rational(0), v));
        }
        return bivariate_poly(gaussian_rational(v));
    }

    // Consumes a standalone `i` directly after a number (spaces allowed).
    bool imaginary_suffix()
    {
        std::size_t k = m_pos;
        while (k < m_src.size() && m_src[k] == ' ') {
            ++k;
        }
        if (k < m_src.size() && m_src[k] == 'i' &&
            (k + 1 >= m_src.size() || !(std::isalnum(static_cast<unsigned char>(m_src[k + 1])) || m_src[k + 1] == '_'))) {
            m_pos = k + 1;
            return true;
        }
        return false;
    }

    std::string_view m_src;
    std::size_t m_pos = 0;
};

inline std::string monomial_text(unsigned i, unsigned j)
{
    std::string s;
    auto var = [&](const char *v, unsigned e) {
        if (e == 0) {
            return;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += v;
        if (e > 1) {
            s += "^" + std::to_string(e);
        }
    };
    var("x", i);
    var("y", j);
    return s;
}

} // namespace detail

inline bivariate_poly parse_poly(std::string_view src)
{
    return detail::poly_parser(src).parse();
}

// Canonical text: terms by ascending total degree, then descending x-degree.
// Real coefficients print as signed rationals, others parenthesised.
inline std::string format_poly(const bivariate_poly &p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::vector<std::pair<bivariate_poly::exponent, gaussian_rational>> terms(p.terms().begin(), p.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
        const unsigned da = a.first.first + a.first.second;
        const unsigned db = b.first.first + b.first.second;
        if (da != db) {
            return da < db;
        }
        return a.first.first > b.first.first;
    });
    std::string out;
    for (const auto &[e, c] : terms) {
        const std::string mono = detail::monomial_text(e.first, e.second);
        bool negative = false;
        std::string coef;
        if (c.is_real()) {
            negative = sgn(c.re()) < 0;
            const rational a = abs(c.re());
            if (a != 1 || mono.empty()) {
                coef = to_string(a);
            }
        } else {
            coef = "(" + to_string(c) + ")";
        }
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        out += coef;
        if (!coef.empty() && !mono.empty()) {
            out += "*";
        }
        out += mono;
    }
    return out;
}

} // namespace hpinv
