#include "mgn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "mgn/coefficients.hpp"
#include "mgn/correlator.hpp"
#include "mgn/errors.hpp"
#include "mgn/kernels.hpp"
#include "mgn/oracles.hpp"
#include "mgn/recursion.hpp"
#include "mgn/volumes.hpp"

namespace mgn {

namespace {

std::string ks_joined(const CorrelatorKey& key, char sep) {
    std::ostringstream out;
    for (int i = 0; i < key.n(); ++i) {
        if (i) out << sep;
        out << key.ks[i];
    }
    return out.str();
}

void print_table(const std::vector<std::pair<CorrelatorKey, Rational>>& table,
                 const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << "[\n";
        for (std::size_t i = 0; i < table.size(); ++i) {
            nlohmann::ordered_json row;
            row["g"] = table[i].first.g;
            row["k0"] = table[i].first.k0;
            row["ks"] = table[i].first.ks;
            row["value"] = to_fraction_string(table[i].second);
            out << "  " << row.dump() << (i + 1 < table.size() ? ",\n" : "\n");
        }
        out << "]\n";
    } else if (format == "csv") {
        out << "g,k0,ks,numerator,denominator\n";
        for (const auto& [key, value] : table) {
            out << key.g << ',' << key.k0 << ',' << ks_joined(key, ';') << ','
                << value.get_num().get_str() << ',' << value.get_den().get_str() << '\n';
        }
    } else {
        for (const auto& [key, value] : table) {
            out << print_correlator(key) << " = " << to_minimal_string(value) << '\n';
        }
    }
}

struct SuiteResult {
    int passed = 0;
    int failed = 0;
};

void report(SuiteResult& result, std::ostream& out, const std::string& suite,
            const std::string& what, bool ok, const std::string& detail = "") {
    if (ok) {
        ++result.passed;
        out << "PASS " << suite << ' ' << what << '\n';
    } else {
        ++result.failed;
        out << "FAIL " << suite << ' ' << what;
        if (!detail.empty()) {
            out << " (" << detail << ")";
        }
        out << '\n';
    }
}

SuiteResult run_dvv_suite(RecursionEngine& engine, std::ostream& out) {
    SuiteResult result;
    for (const CorrelatorKey& key : enumerate_keys(6, 2, 9)) {
        if (key.k0 != 0) {
            continue;
        }
        Rational lhs = engine.intersection_number(key);
        Rational rhs = dvv_intersection(key.g, key.ks);
        report(result, out, "dvv", print_correlator(key), lhs == rhs,
               "engine=" + to_minimal_string(lhs) + " oracle=" + to_minimal_string(rhs));
    }
    return result;
}

SuiteResult run_kappa_suite(RecursionEngine& engine, std::ostream& out) {
    SuiteResult result;
    for (const CorrelatorKey& key : enumerate_keys(5, 2, 8)) {
        if (key.k0 < 1 || key.k0 > 3) {
            continue;
        }
        Rational lhs = engine.intersection_number(key);
        Rational rhs = oracle_intersection(key);
        report(result, out, "kappa", print_correlator(key), lhs == rhs,
               "engine=" + to_minimal_string(lhs) + " oracle=" + to_minimal_string(rhs));
    }
    return result;
}

SuiteResult run_kernel_suite(double tol, std::ostream& out) {
    SuiteResult result;
    KernelEvalConfig cfg;
    cfg.tolerance = tol;

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-50.0, 50.0);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double x = dist(rng);
        worst = std::max(worst, std::abs(eval_h(x) + eval_h(-x) - 2.0));
    }
    {
        std::ostringstream detail;
        detail << "max deviation " << worst;
        report(result, out, "kernel", "h(x)+h(-x)=2", worst < 5e-15, detail.str());
    }

    double worst_rd = 0;
    for (int xi = 1; xi <= 10; ++xi) {
        for (int zi = 1; zi <= 10; ++zi) {
            double x = xi, z = zi;
            worst_rd = std::max(worst_rd, std::abs(eval_R(x, 0, z, cfg) - eval_D(x, 0, z, cfg)));
        }
    }
    {
        std::ostringstream detail;
        detail << "max |R-D| " << worst_rd;
        report(result, out, "kernel", "R(x,0,z)=D(x,0,z)", worst_rd < 1e-12, detail.str());
    }

    for (int n = 0; n <= 3; ++n) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            for (double x : {0.0, 1.0}) {
                std::ostringstream what;
                what << "P^" << n << " exp(-" << alpha << " x) at x=" << x;
                try {
                    VerifyPair pair = verify_p_exponential(n, alpha, x, cfg);
                    double diff = std::abs(pair.closed_form - pair.numeric);
                    bool ok = diff <= tol * std::max(1.0, std::abs(pair.closed_form));
                    std::ostringstream detail;
                    detail << "closed=" << pair.closed_form << " numeric=" << pair.numeric;
                    report(result, out, "kernel", what.str(), ok, detail.str());
                } catch (const NonConvergence& e) {
                    report(result, out, "kernel", what.str(), false, e.what());
                }
            }
        }
    }

    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            for (int k = 0; k <= n + m; ++k) {
                std::ostringstream what;
                what << "corollary n=" << n << " m=" << m << " k=" << k;
                try {
                    VerifyPair pair = verify_corollary(n, m, k, cfg);
                    double diff = std::abs(pair.closed_form - pair.numeric);
                    bool ok = diff <= tol * std::max(1.0, std::abs(pair.closed_form));
                    std::ostringstream detail;
                    detail << "closed=" << pair.closed_form << " series=" << pair.numeric;
                    report(result, out, "kernel", what.str(), ok, detail.str());
                } catch (const NonConvergence& e) {
                    report(result, out, "kernel", what.str(), false, e.what());
                }
            }
        }
    }
    return result;
}

SuiteResult run_string_dilaton_suite(std::ostream& out) {
    SuiteResult result;
    for (const CorrelatorKey& key : enumerate_keys(6, 2, 9)) {
        if (key.k0 != 0) {
            continue;
        }
        report(result, out, "string-dilaton", "string " + print_correlator(key),
               string_check(key.g, key.ks));
        report(result, out, "string-dilaton", "dilaton " + print_correlator(key),
               dilaton_check(key.g, key.ks));
    }
    return result;
}

} // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact mixed psi/kappa1 intersection numbers on moduli of curves,"
                 " with verification oracles and Weil-Petersson volume polynomials"};
    app.name("mgn");
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string cache_file;
    app.add_option("--cache-file", cache_file, "correlator cache persistence file")
        ->envname("MGN_CACHE");
    long long cache_cap = -1;
    app.add_option("--cache-cap", cache_cap, "maximum number of cached correlators (LRU)")
        ->check(CLI::NonNegativeNumber);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate one correlator expression");
    std::string expr;
    eval_cmd->add_option("expr", expr, "e.g. \"<kappa1^2 tau0 tau1^2>_g=1\"")->required();
    bool breakdown = false;
    eval_cmd->add_flag("--breakdown", breakdown, "also print the recursion terms");

    auto* table_cmd = app.add_subcommand("table", "tabulate all correlators up to a dimension");
    int max_dim = 0;
    table_cmd->add_option("--max-dim", max_dim, "maximum 3g-3+n")->required();
    int gmax = -1, nmax = -1;
    table_cmd->add_option("--gmax", gmax, "maximum genus");
    table_cmd->add_option("--nmax", nmax, "maximum number of points");
    std::string format = "text";
    table_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));

    auto* volume_cmd = app.add_subcommand("volume", "Weil-Petersson volume polynomial");
    int vol_g = 0, vol_n = 0;
    volume_cmd->add_option("--genus", vol_g, "genus")->required();
    volume_cmd->add_option("--npoints", vol_n, "number of boundary components")->required();
    std::string at_str;
    volume_cmd->add_option("--at", at_str, "evaluate at boundary lengths L1,...,Ln");

    auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify_cmd->add_option("--suite", suite, "which suite to run")
        ->check(CLI::IsMember({"dvv", "kappa", "kernel", "string-dilaton", "all"}));
    double tol = 1e-8;
    verify_cmd->add_option("--tol", tol, "numeric tolerance")->check(CLI::PositiveNumber);

    auto* gf_cmd = app.add_subcommand("gf", "generating-function coefficients");
    int gf_gmax = 0, gf_dim = 0;
    gf_cmd->add_option("--gmax", gf_gmax, "maximum genus")->required();
    gf_cmd->add_option("--dim-max", gf_dim, "maximum 3g-3+n")->required();

    std::vector<const char*> argv;
    argv.push_back("mgn");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    RecursionEngine engine(cache_cap >= 0 ? std::optional<std::size_t>(cache_cap)
                                          : std::nullopt);
    try {
        if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
            engine.load_cache_file(cache_file);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    int exit_code = 0;
    try {
        if (eval_cmd->parsed()) {
            CorrelatorKey key = parse_correlator(expr);
            out << to_minimal_string(engine.intersection_number(key)) << '\n';
            if (breakdown) {
                try {
                    TermBreakdown terms = engine.recursion_terms(key);
                    out << "breakdown: (2k1+1)!! = " << terms.lhs_factor.get_str() << '\n';
                    for (const auto& [label, value] : terms.boundary_terms) {
                        out << "  " << label << " = " << to_minimal_string(value) << '\n';
                    }
                } catch (const BaseCaseError&) {
                    err << "note: base case, no recursion breakdown\n";
                }
            }
        } else if (table_cmd->parsed()) {
            int g_bound = gmax >= 0 ? gmax : (max_dim + 2) / 3;
            int n_bound = nmax >= 0 ? nmax : max_dim + 3;
            auto t0 = std::chrono::steady_clock::now();
            auto table = engine.compute_table(max_dim, g_bound, n_bound);
            auto t1 = std::chrono::steady_clock::now();
            print_table(table, format, out);
            CacheStats stats = engine.cache_stats();
            err << "table: " << table.size() << " keys in " << std::fixed
                << std::setprecision(3)
                << std::chrono::duration<double>(t1 - t0).count() << " s; cache "
                << stats.hits << " hits, " << stats.misses << " misses, "
                << stats.entries << " entries\n";
        } else if (volume_cmd->parsed()) {
            if (at_str.empty()) {
                out << volume_polynomial(engine, vol_g, vol_n).pretty() << '\n';
            } else {
                std::vector<double> lengths;
                std::istringstream in(at_str);
                std::string tok;
                while (std::getline(in, tok, ',')) {
                    lengths.push_back(std::stod(tok));
                }
                out << std::setprecision(12) << volume_at(engine, vol_g, vol_n, lengths)
                    << '\n';
            }
        } else if (gf_cmd->parsed()) {
            auto coeffs = generating_function_coeffs(engine, gf_gmax, gf_dim);
            out << "[\n";
            for (std::size_t i = 0; i < coeffs.size(); ++i) {
                nlohmann::ordered_json row;
                row["g"] = coeffs[i].g;
                row["s_power"] = coeffs[i].s_power;
                row["t_degrees"] = coeffs[i].t_degrees;
                row["coeff"] = to_fraction_string(coeffs[i].coeff);
                out << "  " << row.dump() << (i + 1 < coeffs.size() ? ",\n" : "\n");
            }
            out << "]\n";
        } else if (verify_cmd->parsed()) {
            SuiteResult total;
            auto merge = [&total, &out](const char* name, SuiteResult r) {
                out << "suite " << name << ": " << r.passed << "/" << (r.passed + r.failed)
                    << " passed\n";
                total.passed += r.passed;
                total.failed += r.failed;
            };
            if (suite == "dvv" || suite == "all") {
                merge("dvv", run_dvv_suite(engine, out));
            }
            if (suite == "kappa" || suite == "all") {
                merge("kappa", run_kappa_suite(engine, out));
            }
            if (suite == "kernel" || suite == "all") {
                merge("kernel", run_kernel_suite(tol, out));
            }
            if (suite == "string-dilaton" || suite == "all") {
                merge("string-dilaton", run_string_dilaton_suite(out));
            }
            out << "total: " << total.passed << "/" << (total.passed + total.failed)
                << " passed\n";
            exit_code = total.failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (!cache_file.empty()) {
        try {
            engine.save_cache_file(cache_file);
        } catch (const std::exception& e) {
            err << "warning: " << e.what() << '\n';
        }
    }
    return exit_code;
}

} // namespace mgn
