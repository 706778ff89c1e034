#include "rbmo/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rbmo/io.hpp"

namespace rbmo {

namespace {

constexpr int kScaleCap = 20;

struct RunConfig {
    std::string space_path;
    std::optional<json> inline_space;
    std::string generate_spec;
    std::string lambda_spec = "fit:1";
    std::string f_spec;
    double rho = 2.0;
    double sigma = 0.0;  // 0: unset
    double alpha = 0.0;  // 0: use default params
    double beta = 0.0;
    std::string t_grid = "0:0:0";  // 0:0:0: derived from the data
    std::string out_dir = "out";
    bool force = false;
    std::uint64_t seed = 0;
    std::string config_path;
};

std::vector<double> parse_t_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    int steps = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3)
        throw ConfigError("bad --t-grid, expected min:max:steps");
    if (steps <= 0) return {};
    if (!(hi > lo) || !(lo >= 0.0)) throw ConfigError("bad --t-grid range");
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) grid.push_back(lo + (hi - lo) * double(i) / double(steps));
    if (grid.front() == 0.0) grid.erase(grid.begin());
    return grid;
}

void apply_config_file(RunConfig& cfg) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw ConfigError("cannot open config file: " + cfg.config_path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    // file values fill only what flags left at defaults
    if (cfg.space_path.empty() && doc.contains("space")) {
        if (doc.at("space").is_string())
            cfg.space_path = doc.at("space").get<std::string>();
        else
            cfg.inline_space = doc.at("space");  // inline space document
    }
    if (cfg.generate_spec.empty() && doc.contains("generate"))
        cfg.generate_spec = doc.at("generate").get<std::string>();
    if (cfg.f_spec.empty() && doc.contains("f") && doc.at("f").is_string())
        cfg.f_spec = doc.at("f").get<std::string>();
    if (doc.contains("lambda") && doc.at("lambda").is_string() && cfg.lambda_spec == "fit:1")
        cfg.lambda_spec = doc.at("lambda").get<std::string>();
    if (cfg.rho == 2.0 && doc.contains("rho")) cfg.rho = doc.at("rho").get<double>();
    if (cfg.sigma == 0.0 && doc.contains("sigma")) cfg.sigma = doc.at("sigma").get<double>();
    if (cfg.alpha == 0.0 && doc.contains("alpha")) cfg.alpha = doc.at("alpha").get<double>();
    if (cfg.beta == 0.0 && doc.contains("beta")) cfg.beta = doc.at("beta").get<double>();
    if (cfg.out_dir == "out" && doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
    if (cfg.t_grid == "0:0:0" && doc.contains("t_grid"))
        cfg.t_grid = doc.at("t_grid").get<std::string>();
}

Space make_space(const RunConfig& cfg) {
    if (!cfg.space_path.empty()) return load_space_file(cfg.space_path);
    if (cfg.inline_space) return load_space(*cfg.inline_space);
    if (!cfg.generate_spec.empty()) return generate_space(cfg.generate_spec);
    throw ConfigError("need --space FILE or --generate SPEC");
}

std::vector<double> make_f(const RunConfig& cfg, const Space& space) {
    if (cfg.f_spec.empty()) throw ConfigError("need --f SPEC (constant:c|spike:i|sawtooth:m|random:seed)");
    std::string spec = cfg.f_spec;
    if (spec == "random") spec += ":" + std::to_string(cfg.seed);
    return make_function(space, spec);
}

DoublingParams make_params(const RunConfig& cfg, const DoublingDiagnostics& diag,
                           const DominatingFunction& lambda) {
    DoublingParams p = default_params(diag, lambda.C_lambda(), cfg.rho);
    if (cfg.alpha > 0.0) p.alpha = cfg.alpha;
    if (cfg.beta > 0.0) p.beta = cfg.beta;
    return p;
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

void rbmo_scale_gate(const RunConfig& cfg, const Space& space) {
    if (space.size() > kScaleCap && !cfg.force)
        throw ConfigError("space has " + std::to_string(space.size()) +
                          " points; full pair enumeration is documented as feasible for <= " +
                          std::to_string(kScaleCap) + " — pass --force to override");
}

int cmd_generate(const RunConfig& cfg) {
    const Space space = make_space(cfg);
    write_text_file(out_path(cfg, "space.json"), dump_json(space_to_json(space)));
    write_text_file(out_path(cfg, "canonical_balls.csv"),
                    canonical_table_csv(space, canonical_balls(space)));
    std::cout << "generated " << space.size() << " points -> " << cfg.out_dir << "/space.json\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg) {
    const Space space = make_space(cfg);
    const DominatingFunction lambda = lambda_from_spec(space, cfg.lambda_spec);
    const DoublingDiagnostics diag = doubling_diagnostics(space);
    write_text_file(out_path(cfg, "diagnostics.json"), dump_json(diagnostics_to_json(space, diag)));
    write_text_file(out_path(cfg, "canonical_balls.csv"),
                    canonical_table_csv(space, canonical_balls(space)));

    const UpperDoublingReport lam = verify_upper_doubling(space, lambda);
    write_text_file(out_path(cfg, "lambda_check.json"), dump_json(upper_doubling_to_json(lam)));
    if (!lam.pass) {
        std::cerr << "FAIL lambda verification: " << lam.witness << "\n";
        return 1;
    }

    bool sweep_ok = true;
    if (space.size() <= kScaleCap || cfg.force) {
        const RBMOProblem problem =
            build_problem(space, lambda, std::vector<double>(space.size(), 0.0), cfg.rho);
        std::ostringstream csv;
        csv << "B_center,B_radius,B1_center,B1_radius,lhs,rhs,pass\n";
        std::string witness;
        for (const InclusionPair& p : problem.pairs) {
            const Ball& b = problem.family.ball(p.small);
            const Ball& b1 = problem.family.ball(p.big);
            const KernelBoundCheck chk = kernel_log_bound_check(space, lambda, b, b1);
            csv << space.name(b.center) << "," << b.radius << "," << space.name(b1.center) << ","
                << b1.radius << "," << chk.lhs << "," << chk.rhs << "," << chk.pass << "\n";
            if (!chk.pass && witness.empty()) {
                sweep_ok = false;
                witness = "kernel log bound at (" + space.name(b.center) + "," +
                          space.name(b1.center) + ")";
            }
        }
        write_text_file(out_path(cfg, "kernel_bounds.csv"), csv.str());
        if (!sweep_ok) {
            std::cerr << "FAIL " << witness << "\n";
            return 1;
        }
    } else {
        std::cout << "note: kernel sweep skipped (" << space.size()
                  << " points > " << kScaleCap << "; pass --force to run it)\n";
    }
    std::cout << "analyze: all checks passed (N=" << diag.N_bound << ", C_mu=" << diag.C_mu
              << ", C_mu_sup=" << diag.C_mu_sup << ")\n";
    return 0;
}

int cmd_maximal(const RunConfig& cfg) {
    const Space space = make_space(cfg);
    const std::vector<double> f = make_f(cfg, space);
    const MaximalProfile prof = maximal_function(space, f);
    write_text_file(out_path(cfg, "maximal_profile.csv"), maximal_profile_csv(space, prof));

    std::vector<double> grid = parse_t_grid(cfg.t_grid);
    if (grid.empty()) {
        double norm1 = 0.0;
        for (int i = 0; i < space.size(); ++i) norm1 += space.weight(i) * std::abs(f[i]);
        if (norm1 == 0.0) norm1 = 1.0;
        for (int i = 1; i <= 20; ++i) grid.push_back(norm1 * double(i) / (20.0 * space.total_mass()));
    }
    const WeakTypeReport rep = weak_type_check(space, f, grid);
    write_text_file(out_path(cfg, "weak_type.json"), dump_json(weak_type_to_json(rep)));
    if (!rep.pass) {
        std::cerr << "FAIL weak (1,1) at t=" << rep.witness_t << "\n";
        return 1;
    }
    std::cout << "maximal: weak (1,1) holds, worst ratio " << rep.worst_ratio << "\n";
    return 0;
}

int cmd_rbmo(const RunConfig& cfg) {
    const Space space = make_space(cfg);
    rbmo_scale_gate(cfg, space);
    const DominatingFunction lambda = lambda_from_spec(space, cfg.lambda_spec);
    const std::vector<double> f = make_f(cfg, space);
    const DoublingDiagnostics diag = doubling_diagnostics(space);

    const RBMOProblem problem = build_problem(space, lambda, f, cfg.rho);
    const AdmissibleFamily family = solve_rbmo(problem);
    {
        json pj;
        pj["rho"] = problem.rho;
        pj["lambda"] = lambda_to_json(lambda);
        pj["f"] = problem.f;
        pj["balls"] = problem.ball_count();
        pj["pairs"] = problem.pairs.size();
        pj["space"] = space_to_json(space);
        write_text_file(out_path(cfg, "problem.json"), dump_json(pj));
    }
    write_text_file(out_path(cfg, "family.json"), dump_json(family_to_json(problem, family)));
    write_text_file(out_path(cfg, "slack.csv"), slack_table_csv(problem, family));
    write_text_file(out_path(cfg, "kernels.csv"), kernel_table_csv(problem));
    {
        std::ofstream lp(out_path(cfg, "problem.triplets"));
        export_lp_triplets(problem, lp);
    }

    const SlackReport slack = admissibility_slack(problem, family);
    if (!slack.pass) {
        std::cerr << "FAIL admissibility: " << slack.worst << " slack " << slack.min_slack << "\n";
        return 1;
    }

    const DoublingParams params = make_params(cfg, diag, lambda);
    const RBMOProblem alpha_problem = build_problem(space, lambda, f, params.alpha);
    const AdmissibleFamily alpha_family = solve_rbmo(alpha_problem);
    const Section5Report s5 = check_section5(alpha_problem, alpha_family, params);
    write_text_file(out_path(cfg, "section5.json"), dump_json(section5_to_json(s5)));

    if (cfg.sigma > 1.0) {
        const CompareRhoReport cmp = compare_rho(space, lambda, f, cfg.rho, cfg.sigma, diag);
        write_text_file(out_path(cfg, "compare_rho.json"), dump_json(compare_rho_to_json(cmp)));
        if (!cmp.pass) {
            std::cerr << "FAIL rho-independence\n";
            return 1;
        }
    }
    if (!s5.pass) {
        std::cerr << "FAIL section-5 checks\n";
        return 1;
    }
    std::cout << "rbmo: A = " << family.A << " (" << problem.pairs.size() << " pairs)\n";
    return 0;
}

int cmd_jn(const RunConfig& cfg) {
    const Space space = make_space(cfg);
    rbmo_scale_gate(cfg, space);
    const DominatingFunction lambda = lambda_from_spec(space, cfg.lambda_spec);
    const std::vector<double> f = make_f(cfg, space);
    const DoublingDiagnostics diag = doubling_diagnostics(space);

    const RBMOProblem problem = build_problem(space, lambda, f, cfg.rho);
    const AdmissibleFamily family = solve_rbmo(problem);
    DoublingParams params = make_params(cfg, diag, lambda);
    params.alpha = 5.0 * cfg.rho;  // the proof fixes alpha; --alpha does not apply here

    // B0: the full-space canonical ball around the first point
    const CanonicalFamily& fam = problem.family;
    const Ball b0 = fam.ball(fam.index(0, fam.count(0) - 1));

    std::vector<double> grid = parse_t_grid(cfg.t_grid);
    const JNReport pre = verify_jn(problem, family, b0, params, {});
    if (grid.empty() && pre.L > 0.0) {
        for (int n = 1; n <= 12; ++n) grid.push_back(2.0 * double(n) * pre.L);
        for (int n = 0; n < 12; ++n) grid.push_back((2.0 * double(n) + 1.0) * pre.L);
        std::sort(grid.begin(), grid.end());
    }
    const JNReport rep = verify_jn(problem, family, b0, params, grid);
    write_text_file(out_path(cfg, "jn_report.json"), dump_json(jn_report_to_json(space, rep)));
    write_text_file(out_path(cfg, "tail.csv"), tail_curve_csv(rep));
    write_text_file(out_path(cfg, "tail.gnuplot"), tail_gnuplot_script("tail.csv", "tail.png"));
    if (!rep.pass) {
        const JNRecursion rec = jn_recursion(problem, family, b0, params, rep.L);
        std::cerr << "FAIL john-nirenberg";
        if (!rec.failures.empty() && rec.failures.front().witness)
            std::cerr << " (witness point " << space.name(*rec.failures.front().witness) << ")";
        std::cerr << "\n";
        return 1;
    }
    std::cout << "jn: L/A = " << rep.L_over_A << ", c_fit = "
              << (rep.c_fit_infinite ? std::string("inf") : std::to_string(rep.c_fit)) << ", "
              << rep.levels.size() << " levels\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"finite metric measure spaces: doubling diagnostics, RBMO norms, John-Nirenberg"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--config", cfg.config_path, "JSON config file (flags override it)");
    app.add_option("--space", cfg.space_path, "space document (JSON)");
    app.add_option("--generate", cfg.generate_spec, "generator spec, e.g. uniform_grid(16,1)");
    app.add_option("--lambda", cfg.lambda_spec, "power:C:d | ballmeasure | envelope:CL | fit:d");
    app.add_option("--f", cfg.f_spec, "function spec: constant:c|spike:i|sawtooth:m|random:seed");
    app.add_option("--rho", cfg.rho, "RBMO parameter rho > 1");
    app.add_option("--sigma", cfg.sigma, "second parameter for the rho-independence check");
    app.add_option("--alpha", cfg.alpha, "doubling parameter alpha (default 5 rho)");
    app.add_option("--beta", cfg.beta, "doubling parameter beta (default from diagnostics)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--t-grid", cfg.t_grid, "tail grid min:max:steps");
    app.add_option("--seed", cfg.seed, "seed for 'random' function specs");
    app.add_flag("--force", cfg.force, "override the pair-enumeration scale cap");

    auto* generate = app.add_subcommand("generate", "write a generated space document");
    auto* analyze = app.add_subcommand("analyze", "doubling diagnostics and lambda verification");
    auto* maximal = app.add_subcommand("maximal", "maximal function profile and weak (1,1) check");
    auto* rbmo_cmd = app.add_subcommand("rbmo", "solve the RBMO norm problem");
    auto* jn = app.add_subcommand("jn", "John-Nirenberg decomposition and tail verification");

    std::vector<const char*> argv;
    argv.push_back("rbmo");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        apply_config_file(cfg);
        if (cfg.rho <= 1.0) throw ConfigError("rho must be > 1");
        if (cfg.sigma != 0.0 && !(cfg.sigma > 1.0 && cfg.sigma < cfg.rho))
            throw ConfigError("need rho > sigma > 1");
        if (generate->parsed()) return cmd_generate(cfg);
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (maximal->parsed()) return cmd_maximal(cfg);
        if (rbmo_cmd->parsed()) return cmd_rbmo(cfg);
        if (jn->parsed()) return cmd_jn(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid space: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rbmo
