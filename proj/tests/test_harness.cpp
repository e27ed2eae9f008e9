#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uncover/harness.hpp"
#include "uncover/instances.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace uncover;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/uncover_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("trial runs are reproducible and order-independent") {
    const Instance inst = gen_lb22(12, Rat(1, 2), Rat(1, 100));
    RunOptions opts;
    opts.trials = 400;
    opts.base_seed = 7;
    opts.with_opt = true;
    const RunOutcome a = run_trials(inst, "disjoint", opts);
    const RunOutcome b = run_trials(inst, "disjoint", opts);
    CHECK(a.aggregate == b.aggregate);
    const RunOutcome c = run_trials_serial(inst, "disjoint", opts);
    CHECK(a.aggregate == c.aggregate);
    for (size_t i = 0; i < a.records.size(); ++i) {
        REQUIRE(a.records[i].alg_queries == c.records[i].alg_queries);
        REQUIRE(a.records[i].opt_queries == c.records[i].opt_queries);
        REQUIRE(a.records[i].seed == c.records[i].seed);
    }
}

TEST_CASE("zero trials produce an empty aggregate without errors") {
    const Instance inst = gen_lb21(5, Rat(1, 2), Rat(1, 100));
    RunOptions opts;
    opts.trials = 0;
    const RunOutcome out = run_trials(inst, "disjoint", opts);
    CHECK(out.aggregate.trials == 0);
    CHECK(out.records.empty());
}

TEST_CASE("closed forms") {
    CHECK(closed_form_expectations("lb21", 4, Rat(1, 2)).expected_opt == Rat(19, 16));
    CHECK(closed_form_expectations("lb21", 4, Rat(1)).expected_opt == Rat(1));
    CHECK(closed_form_expectations("lb21", 4, Rat(1)).expected_alg == Rat(1));
    CHECK(closed_form_expectations("lb22", 9, Rat(1)).expected_alg == Rat(2));
    CHECK(closed_form_expectations("lb22", 2, Rat(1)).expected_alg == Rat(2));
    // capped geometric: sum of (1-tau)^k
    CHECK(closed_form_expectations("lb21", 3, Rat(1, 2)).expected_alg == Rat(7, 4));
    CHECK_THROWS_AS(closed_form_expectations("nope", 3, Rat(1, 2)), contract_error);
}

TEST_CASE("lb22 trials land near the closed form") {
    const Instance inst = gen_lb22(50, Rat(1, 2), Rat(1, 100));
    RunOptions opts;
    opts.trials = 800;
    opts.base_seed = 11;
    const RunOutcome out = run_trials(inst, "disjoint", opts);
    CHECK(out.aggregate.mean_alg > 3.2);
    CHECK(out.aggregate.mean_alg < 4.8);
}

TEST_CASE("report emission") {
    const Instance inst = gen_lb22(10, Rat(1, 2), Rat(1, 100));
    RunOptions opts;
    opts.trials = 50;
    opts.with_opt = true;
    Report report;
    report.rows.push_back(run_trials(inst, "disjoint", opts).aggregate);
    report.rows.push_back(run_trials(inst, "baseline:width", opts).aggregate);

    SUBCASE("csv has the fixed header and one row per algorithm") {
        TempFile f("report.csv");
        emit_csv(report, f.path);
        const std::string text = slurp(f.path);
        std::stringstream ss(text);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(ss, line)) lines.push_back(line);
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "algorithm,trials,mean_alg,ci_lo,ci_hi,mean_opt,ratio,grsetu,verify_pass_rate");
        CHECK(lines[1].rfind("disjoint,50,", 0) == 0);
        CHECK(lines[2].rfind("baseline:width,50,", 0) == 0);
    }
    SUBCASE("empty report emits only the header") {
        TempFile f("empty.csv");
        emit_csv(Report{}, f.path);
        CHECK(slurp(f.path) == "algorithm,trials,mean_alg,ci_lo,ci_hi,mean_opt,ratio,grsetu,verify_pass_rate\n");
    }
    SUBCASE("json round-trips to an equal report") {
        const Report back = report_from_json(report_to_json(report));
        CHECK(back == report);
    }
}

TEST_CASE("confidence interval width shrinks like the square root of the trial count") {
    const Instance inst = gen_lb22(30, Rat(1, 2), Rat(1, 100));
    RunOptions small;
    small.trials = 400;
    small.base_seed = 3;
    RunOptions large = small;
    large.trials = 6400;
    const double w_small = run_trials(inst, "disjoint", small).aggregate.ci_hi -
                           run_trials(inst, "disjoint", small).aggregate.ci_lo;
    const double w_large = run_trials(inst, "disjoint", large).aggregate.ci_hi -
                           run_trials(inst, "disjoint", large).aggregate.ci_lo;
    const double shrink = w_large / w_small;  // ideally 1/4
    CHECK(shrink > 0.125);
    CHECK(shrink < 0.5);
}

TEST_CASE("per-trial verification rates surface in the aggregate") {
    const auto [inst, canon] = gen_demo();
    RunOptions opts;
    opts.trials = 25;
    opts.with_opt = true;
    opts.with_verify = true;
    const RunOutcome out = run_trials(inst, "minset", opts);
    REQUIRE(out.aggregate.verify_pass_rate.has_value());
    CHECK(*out.aggregate.verify_pass_rate == 1.0);
    REQUIRE(out.aggregate.ratio.has_value());
    CHECK(*out.aggregate.ratio >= 1.0);
}

TEST_CASE("unknown algorithm ids are rejected") {
    const auto [inst, canon] = gen_demo();
    RunOptions opts;
    opts.trials = 1;
    CHECK_THROWS_AS(run_trials(inst, "nope", opts), contract_error);
}
