#include "uncover/harness.hpp"
#include "uncover/instances.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>

using namespace uncover;

namespace {

std::uint64_t effective_seed(std::uint64_t cli_seed) {
    if (const char* env = std::getenv("UNCOVER_SEED")) return std::strtoull(env, nullptr, 10);
    return cli_seed;
}

int cmd_generate(const std::string& family, const std::string& out_path,
                 const std::string& realization_path, int n, int m, int max_set_size, double tau_num,
                 std::uint64_t seed, const std::string& source_path) {
    const Rat tau(static_cast<long long>(tau_num * 1000), 1000);
    const Rat eps(1, 100);
    Instance inst;
    std::optional<Realization> real;
    if (family == "demo") {
        auto [i, r] = gen_demo();
        inst = std::move(i);
        real = std::move(r);
    } else if (family == "lb21") {
        inst = gen_lb21(n, tau, eps);
    } else if (family == "lb22") {
        inst = gen_lb22(n, tau, eps);
    } else if (family == "setcover") {
        if (source_path.empty()) throw schema_error("setcover family needs --source file");
        const auto j = load_json(source_path);
        SetCoverSource src;
        src.universe = j.at("universe").get<int>();
        src.families = j.at("families").get<std::vector<std::vector<int>>>();
        auto [i, r] = gen_setcover_reduction(src, Rat(1), Rat(1, 10), eps);
        inst = std::move(i);
        real = std::move(r);
    } else if (family == "random-minset" || family == "random-detrhs") {
        RandomMinSetParams params;
        params.n = n;
        params.m = m;
        params.max_set_size = max_set_size;
        params.deterministic_rhs = family == "random-detrhs";
        inst = gen_random_minset(params, seed);
    } else if (family == "random-disjoint") {
        RandomDisjointParams params;
        params.n = n;
        params.m = m;
        inst = gen_random_disjoint(params, seed);
    } else if (family == "random-mincover") {
        RandomMinCoverParams params;
        params.elements = n;
        params.multisets = m;
        inst = gen_random_mincover(params, seed);
    } else {
        throw schema_error("unknown family '" + family + "'");
    }
    save_json(instance_to_json(inst), out_path);
    std::cout << "wrote " << out_path << "\n";
    if (!realization_path.empty()) {
        if (!real) real = sample_realization(inst, seed);
        save_json(realization_to_json(*real), realization_path);
        std::cout << "wrote " << realization_path << "\n";
    }
    return 0;
}

int cmd_run(const std::string& instance_path, const std::string& algs_csv, long trials,
            std::uint64_t seed, bool with_opt, double verify_alpha, const std::string& out_path,
            bool serial) {
    const Instance inst = instance_from_json(load_json(instance_path));
    RunOptions opts;
    opts.trials = trials;
    opts.base_seed = effective_seed(seed);
    opts.with_opt = with_opt;
    opts.with_verify = verify_alpha > 0;
    opts.parallel = !serial;
    if (opts.with_verify && verify_alpha != 2.0)
        throw contract_error("only --verify-alpha 2 is supported");

    if (inst.kind == Kind::MinCover) {
        const auto tp = mincover_tau_prime(inst);
        std::cout << "multicover balancing parameter: "
                  << (tp ? rat_to_string(*tp) : std::string("unknown")) << "\n";
    }
    Report report;
    std::stringstream algs(algs_csv);
    std::string alg;
    while (std::getline(algs, alg, ',')) {
        if (alg.empty()) continue;
        report.rows.push_back(run_trials(inst, alg, opts).aggregate);
    }
    const bool csv = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".csv";
    if (csv) {
        emit_csv(report, out_path);
    } else {
        save_json(report_to_json(report), out_path);
    }
    std::cout << "wrote " << out_path << "\n";
    for (const auto& r : report.rows) {
        std::cout << r.algorithm << ": mean " << r.mean_alg << " over " << r.trials << " trials";
        if (r.ratio) std::cout << ", ratio " << *r.ratio;
        if (r.verify_pass_rate) std::cout << ", verify pass rate " << *r.verify_pass_rate;
        std::cout << "\n";
    }
    return 0;
}

int cmd_opt(const std::string& instance_path, const std::string& realization_path) {
    const Instance inst = instance_from_json(load_json(instance_path));
    const Realization real = realization_from_json(load_json(realization_path), inst);
    const OptResult res = exact_opt(inst, real);
    nlohmann::json j{{"opt_size", res.opt_size}, {"opt_set", res.opt_set}, {"node_count", res.node_count}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite) {
    const SuiteResult res = run_suite(suite);
    std::cout << (res.pass ? "PASS" : "FAIL") << " " << res.name << ": " << res.details << "\n";
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Query strategies for set selection and multiset multicover under uncertainty"};
    app.require_subcommand(1);

    // generate
    std::string family, out_path, realization_path, source_path;
    int n = 8, m = 4, max_set_size = 4;
    double tau = 0.5;
    std::uint64_t seed = 1;
    auto* gen = app.add_subcommand("generate", "Generate an instance file");
    gen->add_option("--family", family,
                    "demo | lb21 | lb22 | setcover | random-minset | random-detrhs | "
                    "random-disjoint | random-mincover")
        ->required();
    gen->add_option("--out", out_path, "Instance JSON path")->required();
    gen->add_option("--realization", realization_path, "Also write a realization JSON");
    gen->add_option("--n", n, "Interval count (elements for random-mincover)");
    gen->add_option("--m", m, "Set count (multisets for random-mincover)");
    gen->add_option("--max-set-size", max_set_size, "Largest random set");
    gen->add_option("--tau", tau, "Balancing parameter of the lb families");
    gen->add_option("--seed", seed, "Generator seed");
    gen->add_option("--source", source_path, "Set-cover source JSON {universe, families}");

    // run
    std::string instance_path, algs = "minset", run_out = "report.json";
    long trials = 1000;
    std::uint64_t run_seed = 1;
    bool with_opt = false, serial = false;
    double verify_alpha = 0;
    auto* run = app.add_subcommand("run", "Monte Carlo trials of one or more strategies");
    run->add_option("--instance", instance_path, "Instance JSON")->required();
    run->add_option("--alg", algs, "Comma list: disjoint|detrhs|mincover|minset|baseline:<p>");
    run->add_option("--trials", trials, "Trial count");
    run->add_option("--seed", run_seed, "Base seed (UNCOVER_SEED overrides)");
    run->add_flag("--opt", with_opt, "Also compute the exact optimum per trial");
    run->add_option("--verify-alpha", verify_alpha, "Verify each trace against the factor (must be 2)");
    run->add_option("--out", run_out, "Report path (.csv or .json)");
    run->add_flag("--serial", serial, "Force the serial reference runner");

    // opt
    std::string opt_instance, opt_realization;
    auto* opt = app.add_subcommand("opt", "Exact optimal query set for a realization");
    opt->add_option("--instance", opt_instance, "Instance JSON")->required();
    opt->add_option("--realization", opt_realization, "Realization JSON")->required();

    // verify
    std::string suite;
    auto* verify = app.add_subcommand("verify", "Self-checking acceptance suites");
    verify->add_option("--suite", suite, "lb21 | lb22 | equivalence | greedy-bound | alpha")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (gen->parsed())
            return cmd_generate(family, out_path, realization_path, n, m, max_set_size, tau, seed,
                                source_path);
        if (run->parsed())
            return cmd_run(instance_path, algs, trials, run_seed, with_opt, verify_alpha, run_out,
                           serial);
        if (opt->parsed()) return cmd_opt(opt_instance, opt_realization);
        if (verify->parsed()) return cmd_verify(suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
