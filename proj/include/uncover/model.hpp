#pragma once

#include "uncover/distribution.hpp"
#include "uncover/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uncover {

// An uncertain value w in (lower, upper); trivial iff lower == upper.
struct UncertaintyInterval {
    int id = 0;
    Rat lower;
    Rat upper;
    DistributionSpec dist;

    bool trivial() const { return lower == upper; }
    Rat width() const { return upper - lower; }
    Rat center() const { return (lower + upper) / 2; }
    Rat tau() const { return trivial() ? Rat(1) : dist.tau(lower, upper); }
};

enum class Kind { MinSet, MinSetDetRhs, MinCover };

std::string kind_name(Kind k);

// One problem instance.
//
// MinSet / MinSetDetRhs: `intervals` are the uncertain values, `sets` index
// into them; the queryable units are the intervals. MinSetDetRhs carries a
// fixed covering requirement per set in `rhs`.
//
// MinCover: the roles flip. The queryable units are the rows of `sets`
// (one per multiset); `intervals` holds one coefficient interval per
// (multiset, element) pair, `elem_of[i]` names the element of entry i, and
// `rhs` is the per-element covering requirement.
struct Instance {
    Kind kind = Kind::MinSet;
    std::vector<UncertaintyInterval> intervals;
    std::vector<std::vector<int>> sets;
    std::vector<Rat> rhs;
    std::vector<int> elem_of;
    int num_elements = 0;

    int num_units() const {
        return kind == Kind::MinCover ? static_cast<int>(sets.size())
                                      : static_cast<int>(intervals.size());
    }
    int num_constraints() const {
        return kind == Kind::MinCover ? num_elements : static_cast<int>(sets.size());
    }

    // Initial set limits (MinSet kinds): sums of member bounds.
    Rat set_lower(int s) const;
    Rat set_upper(int s) const;

    void validate() const;  // throws schema_error

    bool operator==(const Instance& o) const;
};

// One drawn assignment of precise values (coefficients for MinCover),
// indexed like Instance::intervals.
struct Realization {
    std::vector<Rat> values;
    std::optional<Rat> wstar;  // min set value; MinSet kinds only

    Rat set_value(const Instance& inst, int s) const;
    void validate(const Instance& inst) const;
};

// Draws every value independently per its distribution; deterministic for a
// fixed seed. Populates wstar for MinSet kinds.
Realization sample_realization(const Instance& inst, std::uint64_t seed);

// Mutable per-run view of what has been revealed (MinSet kinds): the query
// set Q, revealed values, and the derived limits L_S(Q) / U_S(Q).
class QueryState {
public:
    QueryState(const Instance& inst, const Realization& real);

    // Reveals the value of interval `id`. Throws contract_error on a
    // duplicate query.
    const Rat& query(int id);

    bool queried(int id) const { return queried_[static_cast<size_t>(id)] != 0; }
    const std::vector<int>& order() const { return order_; }

    const Rat& lower_limit(int s) const { return lo_[static_cast<size_t>(s)]; }
    const Rat& upper_limit(int s) const { return hi_[static_cast<size_t>(s)]; }
    // Unqueried non-trivial members left in set s.
    int open_members(int s) const { return open_count_[static_cast<size_t>(s)]; }
    bool set_complete(int s) const { return open_members(s) == 0; }

    Rat min_lower_limit() const;  // min over sets of L_S(Q)
    Rat min_upper_limit() const;  // min over sets of U_S(Q)

    const Instance& instance() const { return *inst_; }
    const Realization& realization() const { return *real_; }

private:
    const Instance* inst_;
    const Realization* real_;
    std::vector<int> order_;
    std::vector<char> queried_;
    std::vector<Rat> lo_, hi_;
    std::vector<int> open_count_;
};

// True iff some set is structurally certified as the minimum: all its
// non-trivial members are queried and every set's lower limit is at least
// its (fully revealed) value. Throws contract_error on non-MinSet kinds.
bool is_solved_minset(const QueryState& state);

// min over intervals of Pr[w_i >= center]; trivial intervals count as 1.
Rat balancing_tau(const Instance& inst);

// Multicover balancing parameter: 1/2 when every coefficient distribution
// is symmetric about its interval center, unknown otherwise.
std::optional<Rat> mincover_tau_prime(const Instance& inst);

// Maps a MinSet instance to its value-negated twin: a query set certifies a
// maximum-value set of the input iff it certifies a minimum-value set of
// the output.
std::pair<Instance, Realization> reflect_maxset(const Instance& inst, const Realization& real);

// Feasibility of Q for the maximisation reading of a MinSet instance: all
// non-trivial members of some maximum-value set queried and every upper
// limit at most that value. Used by tests and the reflection oracle.
bool maxset_feasible(const Instance& inst, const Realization& real, std::span<const int> q);

}  // namespace uncover
