// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <hpinv/cli.hpp>
#include <hpinv/expr_parser.hpp>
#include <hpinv/germ_analysis.hpp>
#include <hpinv/hp_invariant.hpp>
#include <hpinv/newton_puiseux.hpp>
#include <hpinv/numeric_oracle.hpp>

using namespace hpinv;

namespace
{

struct outcome {
    bool pass = false;
    std::string detail;
};

gaussian_rational gr(long a, long b = 0)
{
    return gaussian_rational(rational(a), rational(b));
}

std::string family(const gaussian_rational &t, int d)
{
    return "x^3 - 3*((" + t.re().get_str() + ")+(" + t.im().get_str() + ")*i)^2*x*y^" + std::to_string(2 * d) +
           " + y^" + std::to_string(3 * d);
}

// --- independent helpers ---

// order by direct inspection of the terms
unsigned term_order(const bivariate_poly &f)
{
    unsigned k = ~0u;
    for (const auto &[e, c] : f.terms()) {
        k = std::min(k, e.first + e.second);
    }
    return k;
}

using dense = std::vector<gaussian_rational>;

void strip(dense &p)
{
    while (!p.empty() && p.back().is_zero()) {
        p.pop_back();
    }
}

dense remainder(dense a, const dense &b)
{
    strip(a);
    while (a.size() >= b.size()) {
        const gaussian_rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            a[shift + j] -= f * b[j];
        }
        a.pop_back();
        strip(a);
    }
    return a;
}

// H_k(x, y) has no repeated linear factor: y divides it at most once and
// H_k(z, 1) is coprime to its derivative.
bool binary_form_squarefree(const bivariate_poly &f, unsigned k)
{
    dense h(k + 1);
    for (const auto &[e, c] : f.terms()) {
        if (e.first + e.second == k) {
            h[e.first] = c;
        }
    }
    strip(h);
    const std::size_t deg = h.size() - 1;
    if (k - deg >= 2) {
        return false;
    }
    dense a = h;
    dense b;
    for (std::size_t i = 1; i < h.size(); ++i) {
        b.push_back(h[i] * gaussian_rational(static_cast<long>(i)));
    }
    strip(b);
    while (!b.empty()) {
        dense r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.size() <= 1;
}

// g(lambda(y), y) by Horner in series arithmetic
puiseux_series back_substitute(const bivariate_poly &g, const puiseux_series &lambda)
{
    const unsigned n = g.degree(variable::x);
    std::vector<puiseux_series> col(n + 1);
    for (const auto &[e, c] : g.terms()) {
        col[e.first].add_term(rational(e.second), coeff_value(c));
    }
    puiseux_series acc;
    for (unsigned i = n + 1; i-- > 0;) {
        acc = acc * lambda + col[i];
    }
    return acc;
}

bivariate_poly random_germ(std::mt19937 &rng, unsigned k, bool repeated_lines)
{
    static const std::vector<std::pair<gaussian_rational, gaussian_rational>> lines = {
        {gr(1), gr(0)}, {gr(0), gr(1)}, {gr(1), gr(-1)}, {gr(1), gr(2)}, {gr(1), gr(0, -1)}, {gr(2), gr(1)},
        {gr(1), gr(3)}};
    std::uniform_int_distribution<int> c(-3, 3);
    std::uniform_int_distribution<std::size_t> pick(0, repeated_lines ? 2 : lines.size() - 1);
    bivariate_poly f(gr(1 + static_cast<long>(rng() % 2), static_cast<long>(rng() % 2)));
    for (unsigned j = 0; j < k; ++j) {
        const auto &[a, b] = lines[pick(rng)];
        f = f * (bivariate_poly::monomial(a, 1, 0) + bivariate_poly::monomial(b, 0, 1));
    }
    for (int t = 0; t < 4; ++t) {
        const unsigned deg = k + 1 + static_cast<unsigned>(rng() % 3);
        const unsigned i = static_cast<unsigned>(rng() % (deg + 1));
        f.add_term(i, deg - i, gr(c(rng), c(rng)));
    }
    return f;
}

bool reduced(const bivariate_poly &f)
{
    try {
        analyze_germ(f);
        return true;
    } catch (const error &e) {
        if (e.kind() == error_kind::not_reduced) {
            return false;
        }
        throw;
    }
}

// --- criteria ---

outcome family_member()
{
    const gaussian_rational t = gr(1);
    const int d = 2;
    // expected leading terms (1 - 2 t^3) y^(3d), (1 + 2 t^3) y^(3d) on x = +-t y^d
    const gaussian_rational lo = gr(1) - gr(2) * pow(t, 3);
    const gaussian_rational hi = gr(1) + gr(2) * pow(t, 3);
    const auto a = cli::analyze(parse_poly(family(t, d)), {});
    if (a.polars.size() != 2) {
        return {false, std::to_string(a.polars.size()) + " polar arcs"};
    }
    std::multiset<std::string> arcs_seen;
    std::multiset<std::string> arcs_want{to_string(t) + "*y^2", to_string(-t) + "*y^2"};
    std::map<std::string, gaussian_rational> term_of_arc;
    for (const auto &p : a.polars) {
        const auto &s = p.arc.series;
        if (!p.arc.terminating() || s.terms().size() != 1 || !s.terms().begin()->second.is_exact() ||
            s.terms().begin()->first != rational(d) || p.arc.multiplicity != 1) {
            return {false, "arc x=" + s.to_string() + " is not an exact monomial"};
        }
        const std::string key = to_string(s.terms().begin()->second.exact()) + "*y^2";
        arcs_seen.insert(key);
        if (!(p.data.h0 > rational(a.profile.k)) || !p.data.c0.is_exact() || p.data.h0 != rational(3 * d)) {
            return {false, "arc x=" + s.to_string() + " not tangential with an exact y^6 term"};
        }
        if (!p.arc.tangent_coefficient().is_zero()) {
            return {false, "arc not tangent to x=0"};
        }
        term_of_arc[key] = p.data.c0.exact();
    }
    if (arcs_seen != arcs_want) {
        return {false, "arcs differ from x=+-y^2"};
    }
    if (term_of_arc[to_string(t) + "*y^2"] != lo || term_of_arc[to_string(-t) + "*y^2"] != hi) {
        return {false, "leading coefficients differ"};
    }
    const auto inv = invariant(a.profile);
    if (inv.classes.size() != 1 || inv.classes[0].raw_terms.size() != 2 || inv.classes[0].line_text != "x=0*y") {
        return {false, "invariant is not one class on x=0 with two terms"};
    }
    std::multiset<std::string> raw;
    for (const auto &term : inv.classes[0].raw_terms) {
        if (!term.c0.is_exact() || term.h0 != rational(6)) {
            return {false, "raw term not exact"};
        }
        raw.insert(to_string(term.c0.exact()));
    }
    if (raw != std::multiset<std::string>{to_string(lo), to_string(hi)}) {
        return {false, "raw terms differ"};
    }
    return {true, "arcs x=y^2, x=-y^2 on line x=0, raw terms -y^6 and 3y^6"};
}

outcome moduli_grid()
{
    const auto grid = cli::gaussian_box(2);
    std::vector<std::string> labels;
    for (const auto &g : grid) {
        labels.push_back(to_string(g));
    }
    const auto r = cli::moduli_scan("x^3 - 3*t^2*x*y^4 + y^6", grid, labels, {});
    const std::size_t n = grid.size();
    // degenerate exactly when z^3 - 3 t^2 z + 1 has a double root: 108 t^6 = 27
    for (std::size_t i = 0; i < n; ++i) {
        const bool deg = gr(108) * pow(grid[i], 6) == gr(27);
        if (deg != r.degenerate[i]) {
            return {false, "degeneracy of t=" + labels[i] + " misjudged"};
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (r.degenerate[i] || r.degenerate[j]) {
                continue;
            }
            const bool want = pow(grid[i], 6) == pow(grid[j], 6);
            const auto c = r.matrix[i][j];
            if (c == cli::cell::ind) {
                return {false, "undecided pair " + labels[i] + ", " + labels[j]};
            }
            if ((c == cli::cell::eq) != want) {
                return {false, "pair " + labels[i] + ", " + labels[j] + " got " + cli::to_string(c)};
            }
        }
    }
    std::set<std::string> sixth;
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.degenerate[i]) {
            sixth.insert(to_string(pow(grid[i], 6)));
        }
    }
    if (r.clusters.size() != sixth.size()) {
        return {false, "cluster count " + std::to_string(r.clusters.size())};
    }
    if (r.clusters.size() < 5) {
        return {false, "fewer than 5 classes"};
    }
    return {true, std::to_string(r.clusters.size()) + " classes on 25 points, matching t^6 = s^6"};
}

outcome multiplicity_gate()
{
    std::mt19937 rng(101);
    int pairs = 0;
    int wrong = 0;
    while (pairs < 50) {
        const unsigned k1 = 2 + static_cast<unsigned>(rng() % 4);
        unsigned k2 = 2 + static_cast<unsigned>(rng() % 4);
        if (k1 == k2) {
            continue;
        }
        const auto f = random_germ(rng, k1, rng() % 2);
        const auto g = random_germ(rng, k2, rng() % 2);
        if (term_order(f) == term_order(g) || !reduced(f) || !reduced(g)) {
            continue;
        }
        ++pairs;
        const auto c = compare(f, g);
        if (c.result != verdict::distinct || c.reason != "MultiplicityMismatch") {
            ++wrong;
        }
    }
    return {wrong == 0, std::to_string(pairs) + " pairs, " + std::to_string(wrong) + " not MultiplicityMismatch"};
}

outcome empty_iff_squarefree()
{
    std::mt19937 rng(202);
    int germs = 0;
    int squarefree = 0;
    int wrong = 0;
    while (germs < 200) {
        const unsigned k = 2 + static_cast<unsigned>(rng() % 4);
        const auto f = random_germ(rng, k, rng() % 2);
        if (!reduced(f)) {
            continue;
        }
        ++germs;
        const bool sf = binary_form_squarefree(f, term_order(f));
        squarefree += sf;
        if (compute_invariant(f).classes.empty() != sf) {
            ++wrong;
        }
    }
    return {wrong == 0, std::to_string(germs) + " germs (" + std::to_string(squarefree) + " with squarefree cone), " +
                            std::to_string(wrong) + " disagreements"};
}

outcome coordinate_invariance()
{
    std::mt19937 rng(303);
    std::uniform_int_distribution<int> e(-2, 2);
    std::uniform_int_distribution<int> ei(-1, 1);
    int pairs = 0;
    int nonempty = 0;
    int inexact = 0;
    int wrong = 0;
    while (pairs < 100) {
        const unsigned k = 2 + static_cast<unsigned>(rng() % 3);
        const auto f = random_germ(rng, k, true);
        linear_map A{gr(e(rng), ei(rng)), gr(e(rng), ei(rng)), gr(e(rng), ei(rng)), gr(e(rng), ei(rng))};
        if (A.det().is_zero()) {
            continue;
        }
        const auto g = compose(f, A);
        if (!reduced(f) || !reduced(g)) {
            continue;
        }
        ++pairs;
        const auto a = compute_invariant(f);
        const auto b = compute_invariant(g);
        nonempty += !a.classes.empty();
        bool exact = true;
        for (const auto &c : a.classes) {
            for (const auto &t : c.canonical) {
                exact = exact && t.c0.is_exact();
            }
        }
        inexact += !exact;
        if (!invariants_equal(a, b)) {
            ++wrong;
        }
    }
    return {wrong == 0, std::to_string(pairs) + " pairs (" + std::to_string(nonempty) + " nonempty, " +
                            std::to_string(inexact) + " with irrational terms), " + std::to_string(wrong) +
                            " mismatches"};
}

outcome oracle_agreement()
{
    std::vector<std::string> corpus;
    for (const auto &t : {gr(1), gr(2), gr(1, 1)}) {
        for (const int d : {2, 3}) {
            corpus.push_back(family(t, d));
        }
    }
    corpus.insert(corpus.end(), {"x^2 - y^3", "x^2 - y^5", "x^3 - y^4"});
    int rows = 0;
    double worst_h = 0;
    double worst_c = 0;
    for (const auto &s : corpus) {
        const auto rep = cross_check(parse_poly(s));
        if (rep.rows.empty()) {
            return {false, s + ": no tracks " + rep.failure};
        }
        for (const auto &r : rep.rows) {
            ++rows;
            worst_h = std::max(worst_h, r.h_err);
            worst_c = std::max(worst_c, r.c_err);
            if (!(r.h_err <= 1e-3 && r.c_err <= 1e-2)) {
                return {false, s + ": track x=" + r.arc + " off (h0 " + std::to_string(r.h_err) + ", |c0| " +
                                   std::to_string(r.c_err) + ")"};
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu germs, %d tracks, worst relative error h0 %.1e, |c0| %.1e", corpus.size(),
                  rows, worst_h, worst_c);
    return {true, buf};
}

outcome puiseux_conservation()
{
    std::mt19937 rng(404);
    std::uniform_int_distribution<long> d(-3, 3);
    int polys = 0;
    int wrong = 0;
    int arcs_checked = 0;
    std::string first;
    while (polys < 200) {
        const unsigned m = 1 + static_cast<unsigned>(rng() % 6);
        bivariate_poly g = bivariate_poly::monomial(gr(1 + static_cast<long>(rng() % 2)), m, 0);
        for (int k = 0; k < 5; ++k) {
            const unsigned i = static_cast<unsigned>(rng() % (m + 2));
            const unsigned j = static_cast<unsigned>(rng() % 6);
            if (i + j > m || (i + j == m && i < m)) {
                g.add_term(i, j, gr(d(rng), d(rng)));
            }
        }
        if (term_order(g) != m || g.coeff(m, 0).is_zero()) {
            continue;
        }
        ++polys;
        const rational T(2 + static_cast<long>(rng() % 4));
        std::vector<puiseux_arc> arcs;
        try {
            arcs = expand_branches(g, T);
        } catch (const std::exception &ex) {
            ++wrong;
            if (first.empty()) {
                first = format_poly(g) + ": " + ex.what();
            }
            continue;
        }
        unsigned total = 0;
        bool ok = true;
        for (const auto &a : arcs) {
            total += a.multiplicity;
            ++arcs_checked;
            // Conjugate arcs are y-rescalings of one exact representative,
            // which has the same residual orders in Y = y / scale. Substitute
            // its known terms as an exact polynomial into g(x, scale * Y):
            // every term below the certificate must vanish, all of them
            // without one.
            const gaussian_rational scale = a.frame.y_scale();
            bivariate_poly gs;
            for (const auto &[e, c] : g.terms()) {
                gs.add_term(e.first, e.second, c * pow(scale, static_cast<long>(e.second)));
            }
            puiseux_series known;
            for (const auto &[e, c] : a.representative.terms()) {
                known.add_term(e, c);
            }
            const auto res = back_substitute(gs, known);
            for (const auto &[e, c] : res.terms()) {
                if ((!a.residual_bound || e < *a.residual_bound) && !c.is_zero()) {
                    ok = false;
                }
            }
        }
        if (total != m || !ok) {
            ++wrong;
            if (first.empty()) {
                first = format_poly(g) + (total != m ? ": multiplicities" : ": residual");
            }
        }
    }
    return {wrong == 0, std::to_string(polys) + " polynomials, " + std::to_string(arcs_checked) + " arcs, " +
                            std::to_string(wrong) + " failures" + (first.empty() ? "" : " (first: " + first + ")")};
}

struct criterion {
    const char *name;
    double budget_s; // 0: no time limit
    std::function<outcome()> run;
};

} // namespace

int main(int argc, char **argv)
{
    const std::vector<criterion> all = {
        {"family member t=1, d=2", 1.0, family_member},
        {"moduli on the Gaussian grid", 30.0, moduli_grid},
        {"multiplicity gate", 0, multiplicity_gate},
        {"empty invariant iff squarefree cone", 0, empty_iff_squarefree},
        {"coordinate invariance", 0, coordinate_invariance},
        {"numeric oracle agreement", 0, oracle_agreement},
        {"Newton-Puiseux conservation", 0, puiseux_conservation},
    };
    int only = 0;
    if (argc == 3 && std::strcmp(argv[1], "--only") == 0) {
        only = std::atoi(argv[2]);
    } else if (argc != 1) {
        std::fprintf(stderr, "usage: acceptance [--only N]\n");
        return 2;
    }
    bool all_pass = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (all[i].budget_s > 0 && secs >= all[i].budget_s) {
            o.pass = false;
            o.detail += " (over the time budget)";
        }
        std::printf("criterion %zu %s: %s - %s [%.2f s]\n", i + 1, all[i].name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
