#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <hpinv/cli.hpp>

using namespace hpinv;

namespace
{

// compare verdicts; 3 is any error
enum exit_code { equal_exit = 0, distinct_exit = 1, undecided_exit = 2, error_exit = 3 };

struct globals {
    invariant_options inv;
    bool json = false;
};

void emit(const globals &g, const cli::json &j, const std::string &text)
{
    if (g.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

int run_analyze(const globals &g, const std::string &germ)
{
    const auto a = cli::analyze(parse_poly(germ), g.inv);
    emit(g, cli::analysis_json(a), cli::analysis_text(a));
    return 0;
}

int run_invariant(const globals &g, const std::string &germ)
{
    const auto inv = compute_invariant(parse_poly(germ), g.inv);
    emit(g, cli::invariant_json(inv), cli::invariant_text(inv));
    return 0;
}

int run_compare(const globals &g, const std::string &f, const std::string &h)
{
    const auto c = compare(parse_poly(f), parse_poly(h), g.inv);
    cli::json j = {{"verdict", to_string(c.result)}};
    std::string text = to_string(c.result);
    if (!c.reason.empty()) {
        j["reason"] = c.reason;
        text += " (" + c.reason + ")";
    }
    emit(g, j, text + "\n");
    switch (c.result) {
        case verdict::invariants_equal: return equal_exit;
        case verdict::distinct: return distinct_exit;
        case verdict::indeterminate: return undecided_exit;
    }
    return error_exit;
}

int run_moduli(const globals &g, const std::string &tmpl, const std::vector<std::string> &values, long box,
               const std::string &csv_path, unsigned threads)
{
    std::vector<gaussian_rational> grid;
    std::vector<std::string> labels;
    for (const auto &v : values) {
        grid.push_back(cli::parse_parameter(v));
        labels.push_back(v);
    }
    if (box >= 0) {
        for (const auto &v : cli::gaussian_box(box)) {
            grid.push_back(v);
            labels.push_back(to_string(v));
        }
    }
    if (grid.empty()) {
        throw error(error_kind::invalid_argument, "empty parameter grid (use --grid or --box)");
    }
    const auto r = cli::moduli_scan(tmpl, grid, labels, g.inv, threads);
    const std::string csv = cli::moduli_csv(r);
    if (!csv_path.empty()) {
        std::ofstream(csv_path) << csv;
    }
    auto j = cli::moduli_json(r);
    emit(g, j, cli::moduli_text(r) + (csv_path.empty() ? "\n" + csv : ""));
    return 0;
}

int run_oracle(const globals &g, const std::string &germ, const oracle_options &base)
{
    oracle_options o = base;
    o.symbolic = g.inv;
    const auto r = cross_check(parse_poly(germ), o);
    emit(g, cli::oracle_json(r), cli::oracle_text(r));
    return r.pass ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"polar-arc invariants of plane curve germs"};
    app.require_subcommand(1);
    globals g;
    long prec = 256;
    long cap = 4096;
    app.add_option("--precision-bits", prec, "working precision of ball arithmetic")->capture_default_str();
    app.add_option("--precision-cap", cap, "largest precision tried before giving up")->capture_default_str();
    app.add_option("--trunc-guard", g.inv.trunc_guard, "extra expansion orders past the certificate")
        ->capture_default_str();
    app.add_flag("--json", g.json, "machine-readable output");

    std::string germ;
    std::string other;

    auto *analyze = app.add_subcommand("analyze", "order, tangent cone and polar arcs of a germ");
    analyze->add_option("germ", germ, "polynomial in x, y")->required();

    auto *invariant = app.add_subcommand("invariant", "the invariant in canonical form");
    invariant->add_option("germ", germ, "polynomial in x, y")->required();

    auto *cmp = app.add_subcommand("compare", "compare the invariants of two germs (exit 0 equal, 1 distinct, 2 undecided)");
    cmp->add_option("f", germ, "first germ")->required();
    cmp->add_option("g", other, "second germ")->required();

    std::vector<std::string> values;
    long box = -1;
    std::string csv_path;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto *moduli = app.add_subcommand("moduli", "scan a family in the parameter t");
    moduli->add_option("template", germ, "germ text with the parameter t")->required();
    moduli->add_option("--grid", values, "parameter values, e.g. --grid 1 -1 1+i")->delimiter(',');
    moduli->add_option("--box", box, "add all a+bi with |a|,|b| <= N");
    moduli->add_option("--csv", csv_path, "write the verdict matrix here");
    moduli->add_option("--threads", threads, "worker threads")->capture_default_str();

    oracle_options oo;
    auto *oracle = app.add_subcommand("oracle", "floating-point check of the polar leading terms");
    oracle->add_option("germ", germ, "polynomial in x, y")->required();
    oracle->add_option("--r-start", oo.r_start, "first radius")->capture_default_str();
    oracle->add_option("--steps", oo.steps, "number of radii")->capture_default_str();

    for (auto *sub : {analyze, invariant, cmp, moduli, oracle}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : error_exit;
    }
    if (prec < 2 || cap < prec) {
        std::cerr << "error: need 2 <= --precision-bits <= --precision-cap\n";
        return error_exit;
    }
    g.inv.prec = prec;
    g.inv.prec_cap = cap;

    try {
        if (*analyze) {
            return run_analyze(g, germ);
        }
        if (*invariant) {
            return run_invariant(g, germ);
        }
        if (*cmp) {
            return run_compare(g, germ, other);
        }
        if (*moduli) {
            return run_moduli(g, germ, values, box, csv_path, threads);
        }
        if (*oracle) {
            return run_oracle(g, germ, oo);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return error_exit;
    }
    return error_exit;
}
