#pragma once

// Command-line front end: identifiability checks, partition inspection,
// recovery from measurement files, Monte Carlo reproduction, the exact
// probability table, the (P, N) region grid, and cyclotomic polynomials.
//
// Exit codes: 0 success, 1 domain error (bad mathematical input), 2 usage
// error (unparseable flags / malformed files).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modfold/cyclotomic.hpp"
#include "modfold/harness.hpp"
#include "modfold/ident.hpp"
#include "modfold/recover.hpp"

namespace modfold::cli {

namespace detail {

inline IndexSet parse_index_list(const std::string& text) {
    IndexSet v;
    if (text.empty()) return v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        int val = std::stoi(tok, &pos);
        if (pos != tok.size()) throw CLI::ValidationError("--v", "malformed index list");
        v.insert(val);
    }
    return v;
}

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("MODFOLD_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

inline nlohmann::json verdict_json(const IdentVerdict& verdict) {
    nlohmann::json j;
    j["identifiable"] = verdict.identifiable;
    j["failing_classes"] = verdict.failing_classes;
    static const char* names[] = {"thm1_full",  "coro1_tail",          "thm3_roots",
                                  "thm4_HN",    "vandermonde_necessary", "oversampling_sufficient"};
    j["condition_used"] = names[static_cast<int>(verdict.condition_used)];
    if (!verdict.reason.empty()) j["reason"] = verdict.reason;
    return j;
}

inline std::string class_text(const std::vector<int>& cls) {
    std::string s = "{";
    for (size_t i = 0; i < cls.size(); ++i) s += (i ? "," : "") + std::to_string(cls[i]);
    return s + "}";
}

inline void print_verdict(const IdentVerdict& verdict, bool json, std::ostream& out) {
    if (json) {
        out << verdict_json(verdict).dump(2) << '\n';
        return;
    }
    if (verdict.identifiable) {
        out << "identifiable\n";
    } else {
        out << "not identifiable";
        if (!verdict.failing_classes.empty()) {
            out << ";";
            for (const auto& cls : verdict.failing_classes) out << " class " << class_text(cls) << " unhit";
        }
        if (!verdict.reason.empty()) out << " (" << verdict.reason << ")";
        out << '\n';
    }
}

inline void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw CLI::ValidationError("output", "cannot open " + path);
    f << content;
}

}  // namespace detail

inline int run(std::vector<std::string> args) {
    CLI::App app{"modulo-DFT identifiability and fold recovery toolkit"};
    app.require_subcommand(1);

    // ---- check ----
    auto* check = app.add_subcommand("check", "decide identifiability of (N, V) or (N, P)");
    int ck_n = 0, ck_pbl = 0;
    std::string ck_v;
    bool ck_tail = false, ck_json = false;
    check->add_option("--n", ck_n, "model size N")->required();
    check->add_option("--v", ck_v, "comma-separated zero-row index set V");
    check->add_option("--pbl", ck_pbl, "check the PBL model with P harmonics instead of V");
    check->add_flag("--tail", ck_tail, "require recovery of s_1..s_{N-1} only");
    check->add_flag("--json", ck_json, "JSON output");

    // ---- partition ----
    auto* part = app.add_subcommand("partition", "print the root classes of x^N - 1");
    int pt_n = 0;
    std::string pt_field = "gaussian";
    bool pt_json = false;
    part->add_option("--n", pt_n, "N")->required();
    part->add_option("--field", pt_field, "rational | gaussian (default gaussian)");
    part->add_flag("--json", pt_json, "JSON output");

    // ---- recover ----
    auto* rec = app.add_subcommand("recover", "solve for the fold vector and the signal");
    std::string rc_zfile, rc_v;
    int rc_box = 1, rc_pbl = 0;
    bool rc_enum = false, rc_json = false;
    rec->add_option("--z", rc_zfile, "JSON file: array of [re, im] pairs (reals for --pbl)")
        ->required();
    rec->add_option("--v", rc_v, "zero-row index set V");
    rec->add_option("--pbl", rc_pbl, "treat input as PBL samples with P harmonics");
    rec->add_option("--box", rc_box, "fold search box bound (default 1)");
    rec->add_flag("--enumerate", rc_enum, "enumerate all box solutions");
    rec->add_flag("--json", rc_json, "JSON output");

    // ---- montecarlo ----
    auto* mc = app.add_subcommand("montecarlo", "folded-recovery Monte Carlo experiment");
    std::string mc_nlist = "5,6,7,8,10,11,14,16", mc_csv, mc_json_path;
    int mc_trials = 300, mc_scenario = 1, mc_box = 1;
    std::uint64_t mc_seed = detail::default_seed();
    mc->add_option("--n-list", mc_nlist, "comma-separated N values");
    mc->add_option("--trials", mc_trials, "trials per N (default 300)");
    mc->add_option("--scenario", mc_scenario, "1 = hitting set, 2 = uniform random V");
    mc->add_option("--box", mc_box, "solver box bound (default 1)");
    mc->add_option("--seed", mc_seed, "seed (default $MODFOLD_SEED or 1)");
    mc->add_option("--csv", mc_csv, "write CSV report here ('-' = stdout)");
    mc->add_option("--json", mc_json_path, "write JSON report here ('-' = stdout)");

    // ---- table1 ----
    auto* tab = app.add_subcommand("table1", "exact identifiability probabilities");
    bool tab_json = false;
    tab->add_flag("--json", tab_json, "JSON output");

    // ---- region ----
    auto* reg = app.add_subcommand("region", "PBL identifiability region grid");
    int rg_pmax = 6, rg_nmax = 40, rg_trials = 100, rg_box = 7;
    std::uint64_t rg_seed = detail::default_seed();
    std::string rg_svg, rg_csv, rg_json_path;
    reg->add_option("--pmax", rg_pmax, "max P (default 6)");
    reg->add_option("--nmax", rg_nmax, "max N (default 40)");
    reg->add_option("--trials", rg_trials, "trials per cell (default 100)");
    reg->add_option("--box", rg_box, "solver box bound (default 7)");
    reg->add_option("--seed", rg_seed, "seed (default $MODFOLD_SEED or 1)");
    reg->add_option("--svg", rg_svg, "write SVG heatmap here");
    reg->add_option("--csv", rg_csv, "write CSV report here ('-' = stdout)");
    reg->add_option("--json", rg_json_path, "write JSON report here ('-' = stdout)");

    // ---- cyclo ----
    auto* cyc = app.add_subcommand("cyclo", "print a cyclotomic polynomial");
    int cy_d = 0;
    bool cy_json = false;
    cyc->add_option("--d", cy_d, "index d")->required();
    cyc->add_flag("--json", cy_json, "JSON output");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check) {
            IdentVerdict verdict;
            if (check->count("--pbl")) {
                verdict = pbl_identifiable_HN(ck_n, ck_pbl);
            } else {
                IndexSet v = detail::parse_index_list(ck_v);
                verdict = ck_tail ? identifiable_tail(ck_n, v) : identifiable_full(ck_n, v);
            }
            detail::print_verdict(verdict, ck_json, std::cout);
            return 0;
        }
        if (*part) {
            FactorPartition p = pt_field == "rational" ? partition_rational(pt_n)
                                                       : partition_gaussian(pt_n);
            if (pt_field != "rational" && pt_field != "gaussian")
                throw CLI::ValidationError("--field", "must be rational or gaussian");
            if (pt_json) {
                nlohmann::json j;
                j["n"] = p.n;
                j["field"] = pt_field;
                j["classes"] = p.classes;
                j["class_divisors"] = p.class_divisor;
                std::cout << j.dump(2) << '\n';
            } else {
                for (int c = 0; c < p.K(); ++c)
                    std::cout << "d=" << p.class_divisor[c] << "  "
                              << detail::class_text(p.classes[c]) << '\n';
            }
            return 0;
        }
        if (*rec) {
            std::ifstream zf(rc_zfile);
            if (!zf) throw CLI::ValidationError("--z", "cannot open " + rc_zfile);
            nlohmann::json jz;
            try {
                zf >> jz;
            } catch (const nlohmann::json::exception&) {
                throw CLI::ValidationError("--z", "malformed JSON in " + rc_zfile);
            }
            SolverConfig sc;
            sc.box_bound = rc_box;
            sc.mode = rc_enum ? SolverConfig::Mode::enumerate_all
                              : SolverConfig::Mode::first_feasible;
            RecoveryResult r;
            if (rec->count("--pbl")) {
                RealVector z;
                for (const auto& e : jz) z.push_back(e.is_array() ? e[0].get<double>() : e.get<double>());
                r = pbl_recover(z, rc_pbl, sc);
            } else {
                ComplexVector z;
                for (const auto& e : jz) z.emplace_back(e[0].get<double>(), e[1].get<double>());
                r = solve_integer_equations(z, detail::parse_index_list(rc_v), sc);
            }
            static const char* st[] = {"unique_in_box", "multiple", "infeasible",
                                       "budget_exhausted"};
            if (rc_json) {
                nlohmann::json j;
                j["status"] = st[static_cast<int>(r.status)];
                j["residual"] = r.residual;
                j["nodes"] = r.nodes;
                j["eps_solutions"] = nlohmann::json::array();
                for (const auto& sol : r.eps_solutions) {
                    nlohmann::json a = nlohmann::json::array();
                    for (const GaussInt& e : sol) a.push_back({e.re, e.im});
                    j["eps_solutions"].push_back(a);
                }
                nlohmann::json sh = nlohmann::json::array();
                for (Complex c : r.s_hat) sh.push_back({c.real(), c.imag()});
                j["s_hat"] = sh;
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "status: " << st[static_cast<int>(r.status)] << '\n';
                std::cout << "solutions: " << r.eps_solutions.size() << '\n';
                if (!r.s_hat.empty()) {
                    std::cout << "s_hat:\n";
                    for (Complex c : r.s_hat)
                        std::cout << "  " << c.real() << (c.imag() < 0 ? " - " : " + ")
                                  << std::abs(c.imag()) << "j\n";
                }
            }
            return r.status == SolveStatus::infeasible ? 1 : 0;
        }
        if (*mc) {
            ExperimentConfig cfg;
            for (int n : detail::parse_index_list(mc_nlist)) cfg.n_list.push_back(n);
            cfg.trials = mc_trials;
            cfg.scenario = mc_scenario == 1 ? ExperimentConfig::Scenario::s1_hitting
                                            : ExperimentConfig::Scenario::s2_uniform_random;
            if (mc_scenario != 1 && mc_scenario != 2)
                throw CLI::ValidationError("--scenario", "must be 1 or 2");
            cfg.seed = mc_seed;
            cfg.solver.box_bound = mc_box;
            ExperimentReport rep = monte_carlo(cfg);
            if (!mc_csv.empty()) detail::write_or_print(mc_csv, to_csv(rep));
            if (!mc_json_path.empty()) detail::write_or_print(mc_json_path, to_json(rep).dump(2) + "\n");
            if (mc_csv.empty() && mc_json_path.empty()) std::cout << to_csv(rep);
            return 0;
        }
        if (*tab) {
            const int ns[] = {5, 6, 7, 8, 10, 11, 14, 16};
            nlohmann::json rows = nlohmann::json::array();
            for (int n : ns) {
                Rational p = theoretical_prob(n);
                double dec = p.get_d();
                if (tab_json)
                    rows.push_back({{"n", n}, {"fraction", p.get_str()}, {"decimal", dec}});
                else
                    std::cout << "N=" << n << "  " << p.get_str() << "  = " << dec << '\n';
            }
            if (tab_json) std::cout << rows.dump(2) << '\n';
            return 0;
        }
        if (*reg) {
            ExperimentConfig cfg;
            cfg.trials = rg_trials;
            cfg.seed = rg_seed;
            cfg.solver.box_bound = rg_box;
            ExperimentReport rep = region_map(rg_pmax, rg_nmax, cfg);
            if (!rg_svg.empty()) detail::write_or_print(rg_svg, region_svg(rep, rg_pmax, rg_nmax));
            if (!rg_csv.empty()) detail::write_or_print(rg_csv, to_csv(rep));
            if (!rg_json_path.empty())
                detail::write_or_print(rg_json_path, to_json(rep).dump(2) + "\n");
            if (rg_svg.empty() && rg_csv.empty() && rg_json_path.empty()) std::cout << to_csv(rep);
            return 0;
        }
        if (*cyc) {
            const IntPoly& phi = cyclotomic_poly(cy_d);
            if (cy_json) {
                nlohmann::json j = nlohmann::json::array();
                for (const BigInt& c : phi) j.push_back(c.get_str());
                std::cout << j.dump() << '\n';
            } else {
                std::cout << "Phi_" << cy_d << " coefficients (ascending):";
                for (const BigInt& c : phi) std::cout << ' ' << c.get_str();
                std::cout << '\n';
            }
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace modfold::cli
