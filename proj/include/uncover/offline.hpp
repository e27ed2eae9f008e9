#pragma once

#include "uncover/algorithms.hpp"
#include "uncover/covering.hpp"
#include "uncover/model.hpp"

#include <optional>
#include <span>

namespace uncover {

struct OptResult {
    int opt_size = 0;
    std::vector<int> opt_set;
    long node_count = 0;
};

// Raised when the search exceeds its node budget; carries the best bounds
// proven so far.
struct OptBudgetExhausted : std::runtime_error {
    OptBudgetExhausted(int lo, int hi, std::vector<int> best)
        : std::runtime_error("exact search budget exhausted"),
          lower_bound(lo),
          upper_bound(hi),
          best_set(std::move(best)) {}
    int lower_bound;
    int upper_bound;  // INT_MAX when no solution was found yet
    std::vector<int> best_set;
};

inline constexpr long kDefaultOptBudget = 4'000'000;

// Minimum-cardinality query set certifying the minimum-value set (kind
// minset), or meeting the covering requirements as far as they can be met
// (minset_detrhs, mincover).
OptResult exact_opt(const Instance& inst, const Realization& real, long node_budget = kDefaultOptBudget);

// Closed-form optimum for pairwise disjoint set families: the sum over sets
// of the shortest coefficient-descending prefix covering that set's
// requirement.
OptResult exact_opt_disjoint(const Instance& inst, const Realization& real);
// The per-set prefix sizes |P*_S| behind exact_opt_disjoint.
std::vector<int> disjoint_prefix_sizes(const Instance& inst, const Realization& real);

// Feasibility of a query set, checked both structurally and through the
// covering-ILP constraints; throws contract_error if the two ever disagree.
bool check_feasible(const Instance& inst, const Realization& real, std::span<const int> q);
// Both verdicts separately (test hook).
std::pair<bool, bool> check_feasible_routes(const Instance& inst, const Realization& real,
                                            std::span<const int> q);

// Two-phase offline greedy: bulk residual reduction while some scaled
// requirement is at least 1, then constraint-count reduction.
std::vector<int> offline_greedy(const Instance& inst, const Realization& real);

struct BoundReport {
    std::optional<int> grset;      // offline greedy factor, needs a realization
    std::optional<int> grsetu;     // realization-free upper bound (minset kinds)
    std::optional<int> rho_prime;  // multicover analogue
};
BoundReport bounds(const Instance& inst, const Realization* real = nullptr);

struct AlphaVerdict {
    int outer_index = 0;
    bool active_drop = false;    // A(Q ∪ G) <= (1 - 1/(alpha OPT)) A(Q)
    bool residual_drop = false;  // b'(Q) >= 1 and b'(Q ∪ G) <= (1 - 1/(alpha OPT)) b'(Q)
    bool pass = false;
};

// Checks, per outer iteration of the trace, that the queried group reduced
// the (scaled, requirement-capped) residuals or the active-constraint count
// by the factor required of an alpha-approximate greedy choice.
std::vector<AlphaVerdict> verify_alpha_approx(const Instance& inst, const Realization& real,
                                              const RunTrace& trace, const Rat& alpha,
                                              long opt_budget = kDefaultOptBudget);

}  // namespace uncover
