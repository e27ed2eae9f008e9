#pragma once

#include "uncover/covering.hpp"
#include "uncover/model.hpp"

#include <nlohmann/json_fwd.hpp>

namespace uncover {

// Per-phase instrumentation inside one outer iteration (the strategies that
// alternate between bulk-reduction and constraint-count greedy values).
struct PhaseTrace {
    GreedyKind g;
    std::vector<int> queries;
    std::vector<Rat> w_selected;             // hypothesized optimum per query (doubling search only)
    std::vector<Rat> d_values;               // d after each recomputation
    std::vector<std::vector<int>> q_half;    // Q_{1/2} snapshot after each query
    std::vector<Rat> inner_d_end;            // d at the end of each inner-while iteration
    int inner_iterations = 0;
};

struct IterationTrace {
    int outer_index = 0;
    int prefix_size = 0;
    std::vector<int> queries;
    int target_set = -1;  // disjoint strategy: the set driving the iteration
    std::vector<PhaseTrace> phases;
};

// Ordered record of one strategy execution: which units were queried, and
// how the queries partition into outer iterations.
struct RunTrace {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::vector<int> queries;
    std::vector<IterationTrace> iterations;
    bool solved = false;
    // Deterministic-rhs / multicover runs that ran out of useful queries
    // with requirements left over.
    bool exhausted_infeasible = false;

    int total() const { return static_cast<int>(queries.size()); }
    nlohmann::json to_json() const;
};

// Width-ordered strategy for pairwise disjoint set families.
RunTrace run_disjoint(const Instance& inst, const Realization& real);

// Optimistic greedy for known covering requirements (kind minset_detrhs).
RunTrace run_detrhs(const Instance& inst, const Realization& real);

// Optimistic greedy for multiset multicover in the query-commit model.
RunTrace run_mincover(const Instance& inst, const Realization& real);

// Doubling search over hypothesized optimum values for general instances.
RunTrace run_minset(const Instance& inst, const Realization& real);

struct BaselinePolicy {
    enum class Type { QueryAll, RandomOrder, WidthOrder };
    Type type = Type::QueryAll;
    std::uint64_t seed = 0;

    static BaselinePolicy parse(const std::string& text);  // "queryall" | "random" | "width"
    std::string name() const;
};

RunTrace run_baseline(const Instance& inst, const Realization& real, const BaselinePolicy& policy);

}  // namespace uncover
