#pragma once

#include <algorithm>
#include <atomic>
#include <numeric>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include <hpinv/expr_parser.hpp>
#include <hpinv/germ_analysis.hpp>
#include <hpinv/hp_invariant.hpp>
#include <hpinv/numeric_oracle.hpp>

// Report building for the command-line tool; argument parsing lives in
// tools/hpinv.cpp.
namespace hpinv::cli
{

using json = nlohmann::ordered_json;

inline json coeff_json(const coeff_value &c)
{
    if (c.is_exact()) {
        return {{"exact", to_string(c.exact())}};
    }
    const auto b = c.to_ball(c.prec());
    return {{"mid", {b.mid().re.to_string(30), b.mid().im.to_string(30)}}, {"rad", b.rad().to_string(6)}};
}

inline json terms_json(const std::vector<leading_term> &terms)
{
    json a = json::array();
    for (const auto &t : terms) {
        a.push_back({{"h0", t.h0.get_str()}, {"c0", coeff_json(t.c0)}});
    }
    return a;
}

inline json invariant_json(const germ_invariant &inv)
{
    json classes = json::array();
    for (const auto &c : inv.classes) {
        classes.push_back({{"line", c.line_text}, {"terms", terms_json(c.canonical)}});
    }
    return {{"order", inv.k}, {"classes", classes}};
}

inline std::string term_text(const leading_term &t)
{
    return "(" + to_string(t.c0) + ")*y^" + t.h0.get_str();
}

inline std::string invariant_text(const germ_invariant &inv)
{
    std::ostringstream os;
    os << "order " << inv.k << "\n";
    if (inv.classes.empty()) {
        os << "invariant: empty (tangent cone is " << inv.k << " distinct lines)\n";
    }
    for (const auto &c : inv.classes) {
        os << "line " << c.line_text << " (multiplicity " << c.line.multiplicity << ")\n";
        os << "  raw:      ";
        for (const auto &t : c.raw_terms) {
            os << " " << term_text(t);
        }
        os << "\n  canonical:";
        for (const auto &t : c.canonical) {
            os << " " << term_text(t);
        }
        os << "\n";
    }
    return os.str();
}

struct analysis {
    germ_profile profile;
    std::vector<tangent_line> lines;
    std::vector<tangent_line> sing;
    std::vector<polar_arc> polars;
    mpfr_prec_t prec = 0;
};

inline analysis analyze(const bivariate_poly &f, const invariant_options &opt)
{
    analysis a;
    a.profile = analyze_germ(f);
    return with_precision_escalation(opt, [&](mpfr_prec_t p) {
        invariant_options o = opt;
        o.prec = p;
        a.lines = tangent_cone_lines(a.profile, p);
        a.sing = singular_cone_lines(a.profile, p);
        a.polars = polar_arcs(a.profile, o);
        a.prec = p;
        return a;
    });
}

inline json analysis_json(const analysis &a)
{
    const auto &p = a.profile;
    json lines = json::array();
    for (const auto &l : a.lines) {
        lines.push_back({{"line", format_line(l.slope, p.shear)}, {"multiplicity", l.multiplicity}});
    }
    json sing = json::array();
    for (const auto &l : a.sing) {
        sing.push_back(format_line(l.slope, p.shear));
    }
    json arcs = json::array();
    for (const auto &x : a.polars) {
        arcs.push_back({{"arc", "x=" + x.arc.series.to_string()},
                        {"multiplicity", x.arc.multiplicity},
                        {"h0", x.data.h0.get_str()},
                        {"c0", coeff_json(x.data.c0)},
                        {"tangential", x.data.h0 > rational(p.k)}});
    }
    return {{"order", p.k},
            {"initial_form", format_poly(p.original.homogeneous_part(p.k))},
            {"shear", p.shear},
            {"tangent_cone", lines},
            {"singular_lines", sing},
            {"polar_arcs", arcs}};
}

inline std::string analysis_text(const analysis &a)
{
    const auto &p = a.profile;
    std::ostringstream os;
    os << "order k = " << p.k << "\n";
    os << "initial form: " << format_poly(p.original.homogeneous_part(p.k)) << "\n";
    if (p.shear != 0) {
        os << "shear: working coordinates satisfy f(x, y + " << p.shear << "*x) = original; arcs below use them\n";
    }
    os << "tangent cone:";
    for (const auto &l : a.lines) {
        os << " " << format_line(l.slope, p.shear) << " (x" << l.multiplicity << ")";
    }
    os << "\nsingular lines:";
    if (a.sing.empty()) {
        os << " none";
    }
    for (const auto &l : a.sing) {
        os << " " << format_line(l.slope, p.shear);
    }
    os << "\npolar arcs:\n";
    for (const auto &x : a.polars) {
        os << "  x = " << x.arc.series.to_string();
        if (x.arc.multiplicity > 1) {
            os << "  [multiplicity " << x.arc.multiplicity << "]";
        }
        os << "\n    h0 = " << x.data.h0.get_str() << ", c0 = " << to_string(x.data.c0)
           << (x.data.h0 > rational(p.k) ? ", tangential" : ", not tangential") << "\n";
    }
    return os.str();
}

// --- moduli scans ---

enum class cell { eq, neq, ind, deg };

inline const char *to_string(cell c)
{
    switch (c) {
        case cell::eq: return "EQ";
        case cell::neq: return "NEQ";
        case cell::ind: return "IND";
        case cell::deg: return "DEG";
    }
    return "?";
}

struct moduli_result {
    std::vector<std::string> labels;
    std::vector<bool> degenerate;
    std::vector<std::string> notes; // per point, empty when fine
    std::vector<std::vector<cell>> matrix;
    std::vector<std::vector<std::size_t>> clusters; // indices, degenerate points excluded
};

inline gaussian_rational parse_parameter(const std::string &text)
{
    const bivariate_poly p = parse_poly(text);
    if (!p.is_constant()) {
        throw error(error_kind::invalid_argument, "parameter value '" + text + "' is not a constant");
    }
    return p.coeff(0, 0);
}

// Replaces every standalone identifier t by the parenthesised value.
inline std::string instantiate(const std::string &tmpl, const gaussian_rational &v)
{
    const std::string value = "((" + v.re().get_str() + ")+(" + v.im().get_str() + ")*i)";
    static const std::regex token(R"((^|[^A-Za-z0-9_])t(?![A-Za-z0-9_]))");
    return std::regex_replace(tmpl, token, "$1" + value);
}

// a + b i with |a|, |b| <= n, row by row
inline std::vector<gaussian_rational> gaussian_box(long n)
{
    std::vector<gaussian_rational> out;
    for (long a = -n; a <= n; ++a) {
        for (long b = -n; b <= n; ++b) {
            out.emplace_back(rational(a), rational(b));
        }
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> clusters_from(const std::vector<std::vector<cell>> &m,
                                                           const std::vector<bool> &degenerate)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            i = parent[i] = parent[parent[i]];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m[i][j] == cell::eq) {
                parent[find(j)] = find(i);
            }
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (degenerate[i]) {
            continue;
        }
        const std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return out;
}

template <class Fn> void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned w = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    for (unsigned i = 0; i < w; ++i) {
        pool.emplace_back([&] {
            for (std::size_t k; (k = next++) < n;) {
                fn(k);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

// Invariants are computed once per grid point (in parallel); pairs are then
// decided from them, falling back to a full compare when the stored
// precision cannot order two coefficients.
inline moduli_result moduli_scan(const std::string &tmpl, const std::vector<gaussian_rational> &grid,
                                 const std::vector<std::string> &labels, const invariant_options &opt,
                                 unsigned threads = std::thread::hardware_concurrency())
{
    const std::size_t n = grid.size();
    moduli_result res;
    res.labels = labels;
    res.degenerate.assign(n, false);
    res.notes.assign(n, "");
    std::vector<bivariate_poly> germs(n);
    std::vector<std::optional<germ_invariant>> invs(n);
    for (std::size_t i = 0; i < n; ++i) {
        germs[i] = parse_poly(instantiate(tmpl, grid[i]));
    }
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            invs[i] = compute_invariant(germs[i], opt);
        } catch (const error &e) {
            if (e.kind() == error_kind::not_reduced || e.kind() == error_kind::zero_germ ||
                e.kind() == error_kind::nonvanishing_at_origin) {
                res.degenerate[i] = true;
            }
            res.notes[i] = e.what();
        }
    });
    res.matrix.assign(n, std::vector<cell>(n, cell::ind));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        cell c = cell::ind;
        if (res.degenerate[i] || res.degenerate[j]) {
            c = cell::deg;
        } else if (i == j && invs[i]) {
            c = cell::eq;
        } else if (invs[i] && invs[j]) {
            try {
                c = invariants_equal(*invs[i], *invs[j]) ? cell::eq : cell::neq;
            } catch (const indeterminate &) {
                const auto v = compare(germs[i], germs[j], opt).result;
                c = v == verdict::invariants_equal ? cell::eq : v == verdict::distinct ? cell::neq : cell::ind;
            }
        }
        res.matrix[i][j] = res.matrix[j][i] = c;
    });
    res.clusters = clusters_from(res.matrix, res.degenerate);
    return res;
}

inline std::string moduli_csv(const moduli_result &r)
{
    std::ostringstream os;
    os << "t";
    for (const auto &l : r.labels) {
        os << "," << l;
    }
    os << "\n";
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        os << r.labels[i];
        for (std::size_t j = 0; j < r.labels.size(); ++j) {
            os << "," << to_string(r.matrix[i][j]);
        }
        os << "\n";
    }
    return os.str();
}

inline std::string moduli_text(const moduli_result &r)
{
    std::ostringstream os;
    os << r.clusters.size() << " classes\n";
    for (const auto &c : r.clusters) {
        os << "  {";
        for (std::size_t k = 0; k < c.size(); ++k) {
            os << (k ? ", " : "") << r.labels[c[k]];
        }
        os << "}\n";
    }
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        if (r.degenerate[i]) {
            os << "DEGENERATE t = " << r.labels[i] << ": " << r.notes[i] << "\n";
        } else if (!r.notes[i].empty()) {
            os << "undecided t = " << r.labels[i] << ": " << r.notes[i] << "\n";
        }
    }
    return os.str();
}

inline json moduli_json(const moduli_result &r)
{
    json clusters = json::array();
    for (const auto &c : r.clusters) {
        json a = json::array();
        for (const auto i : c) {
            a.push_back(r.labels[i]);
        }
        clusters.push_back(a);
    }
    json deg = json::array();
    json notes = json::object();
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        if (r.degenerate[i]) {
            deg.push_back(r.labels[i]);
        }
        if (!r.notes[i].empty()) {
            notes[r.labels[i]] = r.notes[i];
        }
    }
    json m = json::array();
    for (const auto &row : r.matrix) {
        json a = json::array();
        for (const auto c : row) {
            a.push_back(to_string(c));
        }
        m.push_back(a);
    }
    return {{"parameters", r.labels}, {"clusters", clusters}, {"degenerate", deg}, {"notes", notes}, {"matrix", m}};
}

// --- oracle ---

inline json oracle_json(const oracle_report &r)
{
    json rows = json::array();
    for (const auto &x : r.rows) {
        rows.push_back({{"arc", "x=" + x.arc},
                        {"h0", x.h0.get_str()},
                        {"c0_abs", x.c0_abs},
                        {"h0_est", x.h0_est},
                        {"c0_abs_est", x.c0_est},
                        {"h0_rel_err", x.h_err},
                        {"c0_rel_err", x.c_err},
                        {"tangential", x.tangential},
                        {"pass", x.pass}});
    }
    json out = {{"pass", r.pass}, {"r_start", r.r_start}, {"tracks", rows}};
    if (!r.failure.empty()) {
        out["failure"] = r.failure;
    }
    return out;
}

inline std::string oracle_text(const oracle_report &r)
{
    std::ostringstream os;
    os.precision(6);
    os << "r_start = " << r.r_start << "\n";
    for (const auto &x : r.rows) {
        os << "  x = " << x.arc << "\n    h0 = " << x.h0.get_str() << " est " << x.h0_est << " (rel err "
           << x.h_err << "), |c0| = " << x.c0_abs << " est " << x.c0_est << " (rel err " << x.c_err << ") "
           << (x.pass ? "ok" : "MISMATCH") << "\n";
    }
    if (!r.failure.empty()) {
        os << "failure: " << r.failure << "\n";
    }
    os << (r.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace hpinv::cli
