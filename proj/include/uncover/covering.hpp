#pragma once

#include "uncover/model.hpp"

#include <optional>
#include <span>

namespace uncover {

enum class GreedyKind { Gc, Gs };

// Scaled covering-ILP view shared by MinSet and MinCover. A unit is a
// queryable thing (an interval, or a whole multiset); a constraint is a set
// (MinSet) or an element (MinCover). Every quantity is pre-multiplied by
// gamma.
//
// Right-hand sides come in two modes: fixed per-constraint values, or the
// parametric form gamma * (w - base_S) for a hypothesized optimum w.
struct CoveringProblem {
    struct Term {
        int cons;
        Rat cap;    // gamma * largest possible coefficient
        Rat coeff;  // gamma * realized coefficient (meaningful iff has_coeffs)
    };

    Rat gamma;
    int num_units = 0;
    int num_cons = 0;
    std::vector<std::vector<Term>> unit_terms;
    std::vector<std::vector<int>> cons_members;
    bool parametric = false;
    std::vector<Rat> rhs0;  // scaled, fixed mode
    std::vector<Rat> base;  // L_S, parametric mode
    bool has_coeffs = false;

    bool unit_useful(int u) const {
        for (const auto& t : unit_terms[static_cast<size_t>(u)])
            if (t.cap > 0) return true;
        return false;
    }

    // MinSet with rhs parametric in the hypothesized optimum value.
    static CoveringProblem minset_parametric(const Instance& inst, const Realization* real, Rat gamma);
    // MinSet with fixed (unscaled) rhs.
    static CoveringProblem minset_fixed(const Instance& inst, const Realization* real, Rat gamma,
                                        std::span<const Rat> rhs_unscaled);
    // Multicover with fixed per-element rhs.
    static CoveringProblem mincover(const Instance& inst, const Realization* real, Rat gamma);
};

// Query-set state over a CoveringProblem: which units are in Q, which values
// may be consulted, and the per-constraint sum of scaled coefficients.
class CoverEval {
public:
    CoverEval(const CoveringProblem& p, bool all_revealed);

    void add(int unit);  // query unit: joins Q and becomes revealed

    bool in_q(int unit) const { return inq_[static_cast<size_t>(unit)] != 0; }
    bool revealed(int unit) const { return all_revealed_ || inq_[static_cast<size_t>(unit)] != 0; }
    const std::vector<int>& order() const { return order_; }
    const CoveringProblem& problem() const { return *p_; }
    const Rat& coeff_sum(int cons) const { return csum_[static_cast<size_t>(cons)]; }

    // b'_S(Q) / b'_S(Q, w)
    Rat residual(int cons) const;
    Rat residual(int cons, const Rat& w) const;
    Rat residual_total() const;
    Rat residual_total(const Rat& w) const;
    int active_count() const;
    int active_count(const Rat& w) const;

private:
    const CoveringProblem* p_;
    bool all_revealed_;
    std::vector<char> inq_;
    std::vector<int> order_;
    std::vector<Rat> csum_;
};

// gc(Q, G) = b'(Q) - b'(Q ∪ G); the prefix Q is given explicitly so callers
// can evaluate against an earlier snapshot than eval's current query set.
// Group members must be revealed in `eval`'s knowledge.
Rat greedy_gc(const CoverEval& eval, std::span<const int> q, std::span<const int> group,
              const std::optional<Rat>& w);
// gs(Q, G) = A(Q) - A(Q ∪ G)
long greedy_gs(const CoverEval& eval, std::span<const int> q, std::span<const int> group,
               const std::optional<Rat>& w);

// Optimistic values: the greedy values under the assumption that the unit's
// coefficients equal their caps. Computable from public information only.
Rat optimistic_gc(const CoverEval& eval, int unit, const std::optional<Rat>& w);
long optimistic_gs(const CoverEval& eval, int unit, const std::optional<Rat>& w);

// The smallest w in [w_lo, w_hi] (half-open when hi_open) at which some
// candidate unit's optimistic value reaches d, together with the argmax unit
// at that w (ties by lowest unit index). gc is piecewise linear in w, so the
// true minimum is solved per linear piece; gs is a step function whose
// pieces are open on the left, so the representative just inside the first
// satisfying piece is returned (within 2^-21 of the infimum).
struct WReach {
    Rat w;
    int unit;
};
std::optional<WReach> min_w_reaching(const CoverEval& eval, GreedyKind kind, const Rat& d,
                                     const Rat& w_lo, const Rat& w_hi, bool hi_open);

// Online scale factor 2/s_min: s_min is the least positive interval width
// (MinSet kinds) or the least positive coefficient upper limit (MinCover).
Rat scale_factor_online(const Instance& inst);
// Offline scale factor 1/s_min over the realized positive coefficients.
Rat scale_factor_offline(const Instance& inst, const Realization& real);

}  // namespace uncover
