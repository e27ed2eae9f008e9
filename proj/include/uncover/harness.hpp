#pragma once

#include "uncover/algorithms.hpp"
#include "uncover/model.hpp"
#include "uncover/offline.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace uncover {

struct TrialRecord {
    int index = 0;
    std::uint64_t seed = 0;
    int alg_queries = 0;
    int outer_iterations = 0;
    std::optional<int> opt_queries;
    bool opt_budget_exhausted = false;
    std::optional<bool> verify_pass;
};

// Per-algorithm aggregate. The empirical ratio is mean(ALG)/mean(OPT), a
// ratio of means, not a mean of per-trial ratios.
struct AlgAggregate {
    std::string algorithm;
    long trials = 0;
    double mean_alg = 0;
    double var_alg = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    std::optional<double> mean_opt;
    std::optional<double> ratio;
    std::optional<int> offline_bound;  // grsetu (minset kinds) or the multicover analogue
    std::optional<double> verify_pass_rate;
    long flagged = 0;  // trials whose exact search ran out of budget

    bool operator==(const AlgAggregate& o) const;
};

struct Report {
    std::vector<AlgAggregate> rows;
    bool operator==(const Report& o) const { return rows == o.rows; }
};

struct RunOptions {
    long trials = 1000;
    std::uint64_t base_seed = 1;
    bool with_opt = false;
    bool with_verify = false;  // per-trial alpha=2 verification of the trace
    long opt_budget = kDefaultOptBudget;
    bool parallel = true;
};

struct RunOutcome {
    AlgAggregate aggregate;
    std::vector<TrialRecord> records;
};

// Runs `trials` seeded trials of one algorithm on one instance. Trial i uses
// seed base_seed + i; records and aggregates are independent of execution
// order, so the parallel and serial runners agree bit for bit.
RunOutcome run_trials(const Instance& inst, const std::string& alg, const RunOptions& opts);
RunOutcome run_trials_serial(const Instance& inst, const std::string& alg, RunOptions opts);

// One algorithm dispatch: runs `alg` ("disjoint", "detrhs", "mincover",
// "minset", "baseline:<policy>") on a realization.
RunTrace dispatch_algorithm(const Instance& inst, const Realization& real, const std::string& alg,
                            std::uint64_t seed);

struct ClosedForm {
    Rat expected_opt;
    Rat expected_alg;  // index-ordered querying cost of the width strategy
};

// Exact expectations for the adversarial lower-bound families: "lb21"
// (capped geometric) and "lb22" (capped second-success index).
ClosedForm closed_form_expectations(const std::string& family, int n, const Rat& tau);

void emit_csv(const Report& report, const std::string& path);
nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// Self-checking statistical/property suites behind `verify --suite <name>`.
struct SuiteResult {
    std::string name;
    bool pass = false;
    std::string details;
};
SuiteResult run_suite(const std::string& name);  // lb21 | lb22 | equivalence | greedy-bound | alpha
std::vector<std::string> suite_names();

}  // namespace uncover
