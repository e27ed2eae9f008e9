#include "uncover/offline.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace uncover {

namespace {

// Min-cardinality cover: pick units so that every constraint's coefficient
// sum reaches its target. Targets are pre-capped at what querying everything
// achieves, so a solution always exists.
struct CoverSearch {
    int num_cons;
    std::vector<std::vector<std::pair<int, Rat>>> unit_terms;  // unit -> (cons, coeff > 0)
    std::vector<std::vector<std::pair<Rat, int>>> cons_coeffs;  // cons -> (coeff, unit) desc
    std::vector<int> units;                                     // branch order
    long budget = kDefaultOptBudget;
    long nodes = 0;
    int best = INT_MAX;
    std::vector<int> best_set;
    std::vector<int> chosen;
    std::vector<char> out;  // units branched out

    // Fewest units, drawn from the still-undecided ones in a constraint,
    // that can close the given gap; INT_MAX when impossible.
    int prefix_need(int cons, const Rat& gap) const {
        if (gap <= 0) return 0;
        Rat left = gap;
        int used = 0;
        for (const auto& [coeff, unit] : cons_coeffs[static_cast<size_t>(cons)]) {
            if (out[static_cast<size_t>(unit)]) continue;
            left -= coeff;
            ++used;
            if (left <= 0) return used;
        }
        return INT_MAX;
    }

    int lower_bound(const std::vector<Rat>& need) const {
        int lb = 0;
        for (int s = 0; s < num_cons; ++s) {
            const int k = prefix_need(s, need[static_cast<size_t>(s)]);
            lb = std::max(lb, k);
            if (lb == INT_MAX) break;
        }
        return lb;
    }

    void dfs(size_t idx, std::vector<Rat>& need) {
        if (++nodes > budget)
            throw OptBudgetExhausted(static_cast<int>(chosen.size()), best, best_set);
        bool open = false;
        for (const Rat& r : need) open = open || r > 0;
        if (!open) {
            if (static_cast<int>(chosen.size()) < best) {
                best = static_cast<int>(chosen.size());
                best_set = chosen;
            }
            return;
        }
        const int lb = lower_bound(need);
        if (lb == INT_MAX || static_cast<int>(chosen.size()) + lb >= best) return;
        if (idx >= units.size()) return;
        const int u = units[idx];

        // include u (decided either way, so drop it from the bound's pool)
        out[static_cast<size_t>(u)] = 1;
        chosen.push_back(u);
        std::vector<std::pair<int, Rat>> undo;
        for (const auto& [cons, coeff] : unit_terms[static_cast<size_t>(u)]) {
            if (need[static_cast<size_t>(cons)] <= 0) continue;
            undo.emplace_back(cons, need[static_cast<size_t>(cons)]);
            need[static_cast<size_t>(cons)] -= coeff;
        }
        dfs(idx + 1, need);
        for (auto& [cons, old] : undo) need[static_cast<size_t>(cons)] = old;
        chosen.pop_back();

        // exclude u
        dfs(idx + 1, need);
        out[static_cast<size_t>(u)] = 0;
    }

    // returns nodes used
    long run(std::vector<Rat> need) {
        dfs(0, need);
        return nodes;
    }
};

// Builds the cover-search over the instance's queryable units with realized
// coefficients, restricted to `allowed` units (empty = all useful units).
CoverSearch make_search(const Instance& inst, const Realization& real,
                        const std::vector<char>* excluded) {
    CoverSearch cs;
    cs.num_cons = inst.num_constraints();
    const int n_units = inst.num_units();
    cs.unit_terms.assign(static_cast<size_t>(n_units), {});
    cs.cons_coeffs.assign(static_cast<size_t>(cs.num_cons), {});
    std::vector<std::pair<Rat, int>> order;  // (max coeff, unit)
    for (int u = 0; u < n_units; ++u) {
        if (excluded && (*excluded)[static_cast<size_t>(u)]) continue;
        Rat total = 0;
        if (inst.kind == Kind::MinCover) {
            for (int entry : inst.sets[static_cast<size_t>(u)]) {
                const Rat a = real.values[static_cast<size_t>(entry)];
                if (a <= 0) continue;
                const int e = inst.elem_of[static_cast<size_t>(entry)];
                cs.unit_terms[static_cast<size_t>(u)].emplace_back(e, a);
                total += a;
            }
        } else {
            const Rat a = real.values[static_cast<size_t>(u)] - inst.intervals[static_cast<size_t>(u)].lower;
            if (a > 0)
                for (size_t s = 0; s < inst.sets.size(); ++s) {
                    const auto& mem = inst.sets[s];
                    if (std::find(mem.begin(), mem.end(), u) != mem.end()) {
                        cs.unit_terms[static_cast<size_t>(u)].emplace_back(static_cast<int>(s), a);
                        total += a;
                    }
                }
        }
        if (!cs.unit_terms[static_cast<size_t>(u)].empty()) order.emplace_back(std::move(total), u);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (auto& [coeff, u] : order) cs.units.push_back(u);
    for (int u : cs.units)
        for (const auto& [cons, coeff] : cs.unit_terms[static_cast<size_t>(u)])
            cs.cons_coeffs[static_cast<size_t>(cons)].emplace_back(coeff, u);
    for (auto& v : cs.cons_coeffs)
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
    cs.out.assign(static_cast<size_t>(n_units), 0);
    return cs;
}

// Per-constraint requirement capped at what all units together can supply.
std::vector<Rat> capped_targets(const Instance& inst, const Realization& real) {
    const int m = inst.num_constraints();
    std::vector<Rat> reach(static_cast<size_t>(m), Rat(0));
    if (inst.kind == Kind::MinCover) {
        for (size_t entry = 0; entry < inst.intervals.size(); ++entry)
            reach[static_cast<size_t>(inst.elem_of[entry])] += real.values[entry];
    } else {
        for (size_t s = 0; s < inst.sets.size(); ++s)
            for (int i : inst.sets[s])
                reach[s] += real.values[static_cast<size_t>(i)] - inst.intervals[static_cast<size_t>(i)].lower;
    }
    std::vector<Rat> target(static_cast<size_t>(m));
    for (int s = 0; s < m; ++s) {
        Rat b;
        if (inst.kind == Kind::MinSet) {
            b = *real.wstar - inst.set_lower(s);
        } else {
            b = inst.rhs[static_cast<size_t>(s)];
        }
        target[static_cast<size_t>(s)] = std::min(std::max(b, Rat(0)), reach[static_cast<size_t>(s)]);
    }
    return target;
}

}  // namespace

OptResult exact_opt(const Instance& inst, const Realization& real, long node_budget) {
    OptResult out;
    if (inst.kind != Kind::MinSet) {
        CoverSearch cs = make_search(inst, real, nullptr);
        cs.budget = node_budget;
        out.node_count = cs.run(capped_targets(inst, real));
        if (cs.best == INT_MAX) throw contract_error("exact_opt: capped covering had no solution");
        out.opt_size = cs.best;
        out.opt_set = cs.best_set;
        std::sort(out.opt_set.begin(), out.opt_set.end());
        return out;
    }

    // A feasible query set must contain every non-trivial member of some
    // minimum-value set; branch over which set plays that role.
    const Rat& wstar = *real.wstar;
    int best = INT_MAX;
    std::vector<int> best_set;
    long nodes = 0;
    for (size_t s = 0; s < inst.sets.size(); ++s) {
        if (real.set_value(inst, static_cast<int>(s)) != wstar) continue;
        std::vector<int> forced;
        std::vector<char> excluded(inst.intervals.size(), 0);
        for (int i : inst.sets[s])
            if (!inst.intervals[static_cast<size_t>(i)].trivial()) {
                forced.push_back(i);
                excluded[static_cast<size_t>(i)] = 1;
            }
        std::vector<Rat> need = capped_targets(inst, real);
        for (size_t t = 0; t < inst.sets.size(); ++t)
            for (int i : inst.sets[t])
                if (excluded[static_cast<size_t>(i)])
                    need[t] -= real.values[static_cast<size_t>(i)] -
                               inst.intervals[static_cast<size_t>(i)].lower;
        CoverSearch cs = make_search(inst, real, &excluded);
        cs.budget = node_budget - nodes;
        try {
            nodes += cs.run(std::move(need));
        } catch (OptBudgetExhausted& e) {
            int hi = best;
            if (e.upper_bound != INT_MAX)
                hi = std::min(hi, e.upper_bound + static_cast<int>(forced.size()));
            throw OptBudgetExhausted(0, hi, best_set);
        }
        if (cs.best != INT_MAX && static_cast<int>(forced.size()) + cs.best < best) {
            best = static_cast<int>(forced.size()) + cs.best;
            best_set = forced;
            best_set.insert(best_set.end(), cs.best_set.begin(), cs.best_set.end());
        }
    }
    if (best == INT_MAX) throw contract_error("exact_opt: no certifying query set found");
    out.node_count = nodes;
    out.opt_size = best;
    out.opt_set = std::move(best_set);
    std::sort(out.opt_set.begin(), out.opt_set.end());
    return out;
}

std::vector<int> disjoint_prefix_sizes(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinSet) throw contract_error("disjoint optimum needs a plain minset instance");
    std::vector<char> used(inst.intervals.size(), 0);
    for (const auto& s : inst.sets)
        for (int i : s) {
            if (used[static_cast<size_t>(i)]) throw contract_error("sets are not pairwise disjoint");
            used[static_cast<size_t>(i)] = 1;
        }
    const Rat& wstar = *real.wstar;
    std::vector<int> sizes;
    for (size_t s = 0; s < inst.sets.size(); ++s) {
        Rat gap = wstar - inst.set_lower(static_cast<int>(s));
        if (gap <= 0) {
            sizes.push_back(0);
            continue;
        }
        std::vector<Rat> coeffs;
        for (int i : inst.sets[s])
            coeffs.push_back(real.values[static_cast<size_t>(i)] - inst.intervals[static_cast<size_t>(i)].lower);
        std::sort(coeffs.begin(), coeffs.end(), std::greater<>());
        int k = 0;
        for (const Rat& c : coeffs) {
            gap -= c;
            ++k;
            if (gap <= 0) break;
        }
        if (gap > 0) throw contract_error("disjoint optimum: requirement unreachable");
        sizes.push_back(k);
    }
    return sizes;
}

OptResult exact_opt_disjoint(const Instance& inst, const Realization& real) {
    const auto sizes = disjoint_prefix_sizes(inst, real);
    OptResult out;
    for (size_t s = 0; s < inst.sets.size(); ++s) {
        const int k = sizes[s];
        std::vector<std::pair<Rat, int>> coeffs;
        for (int i : inst.sets[s])
            coeffs.emplace_back(
                real.values[static_cast<size_t>(i)] - inst.intervals[static_cast<size_t>(i)].lower, i);
        std::sort(coeffs.begin(), coeffs.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (int j = 0; j < k; ++j) out.opt_set.push_back(coeffs[static_cast<size_t>(j)].second);
    }
    out.opt_size = static_cast<int>(out.opt_set.size());
    std::sort(out.opt_set.begin(), out.opt_set.end());
    return out;
}

std::pair<bool, bool> check_feasible_routes(const Instance& inst, const Realization& real,
                                            std::span<const int> q) {
    if (inst.kind != Kind::MinSet) throw contract_error("check_feasible: needs a plain minset instance");
    QueryState qs(inst, real);
    for (int i : q) qs.query(i);
    const bool structural = is_solved_minset(qs);

    std::vector<char> in_q(inst.intervals.size(), 0);
    for (int i : q) in_q[static_cast<size_t>(i)] = 1;
    bool ilp = true;
    for (size_t s = 0; s < inst.sets.size() && ilp; ++s) {
        Rat covered = 0;
        for (int i : inst.sets[s])
            if (in_q[static_cast<size_t>(i)])
                covered += real.values[static_cast<size_t>(i)] - inst.intervals[static_cast<size_t>(i)].lower;
        ilp = covered >= *real.wstar - inst.set_lower(static_cast<int>(s));
    }
    return {structural, ilp};
}

bool check_feasible(const Instance& inst, const Realization& real, std::span<const int> q) {
    const auto [structural, ilp] = check_feasible_routes(inst, real, q);
    if (structural != ilp)
        throw contract_error("feasibility routes disagree: structural=" + std::to_string(structural) +
                             " ilp=" + std::to_string(ilp));
    return structural;
}

std::vector<int> offline_greedy(const Instance& inst, const Realization& real) {
    const std::vector<Rat> targets = capped_targets(inst, real);
    bool open = false;
    for (const Rat& t : targets) open = open || t > 0;
    if (!open) return {};
    const Rat gamma = scale_factor_offline(inst, real);
    CoveringProblem p = inst.kind == Kind::MinCover
                            ? CoveringProblem::mincover(inst, &real, gamma)
                            : CoveringProblem::minset_fixed(inst, &real, gamma, targets);
    if (inst.kind == Kind::MinCover) {
        p.rhs0.clear();
        for (const Rat& b : targets) p.rhs0.push_back(std::max(Rat(0), gamma * b));
    }
    CoverEval eval(p, true);
    std::vector<int> result;
    auto candidates = [&] {
        std::vector<int> cands;
        for (int u = 0; u < p.num_units; ++u)
            if (!eval.in_q(u) && p.unit_useful(u)) cands.push_back(u);
        return cands;
    };
    // Phase 1: greedy bulk reduction while some scaled requirement is >= 1.
    for (;;) {
        bool big = false;
        for (int s = 0; s < p.num_cons && !big; ++s) big = eval.residual(s) >= 1;
        if (!big) break;
        int pick = -1;
        Rat best;
        for (int u : candidates()) {
            Rat v = greedy_gc(eval, eval.order(), std::vector<int>{u}, std::nullopt);
            if (pick < 0 || v > best) {
                pick = u;
                best = std::move(v);
            }
        }
        if (pick < 0 || best == 0) throw contract_error("offline greedy stalled in phase 1");
        eval.add(pick);
        result.push_back(pick);
    }
    // Phase 2: set-cover greedy on the remaining constraints.
    while (eval.active_count() > 0) {
        int pick = -1;
        long best = -1;
        for (int u : candidates()) {
            long v = greedy_gs(eval, eval.order(), std::vector<int>{u}, std::nullopt);
            if (pick < 0 || v > best) {
                pick = u;
                best = v;
            }
        }
        if (pick < 0 || best <= 0) throw contract_error("offline greedy stalled in phase 2");
        eval.add(pick);
        result.push_back(pick);
    }
    return result;
}

namespace {

int ceil_ln_clamped(const Rat& x) {
    if (x <= 0) return 0;
    const double lx = std::log(rat_to_double(x));
    const int c = static_cast<int>(std::ceil(lx - 1e-12));
    return std::max(0, c);
}

}  // namespace

BoundReport bounds(const Instance& inst, const Realization* real) {
    BoundReport rep;
    if (inst.kind == Kind::MinCover) {
        if (real) {
            const Rat gamma = scale_factor_offline(inst, *real);
            Rat maxb = 0;
            for (const Rat& b : inst.rhs) maxb = std::max(maxb, b);
            const Rat n(inst.num_elements);
            rep.rho_prime = ceil_ln_clamped(gamma * n * maxb) + ceil_ln_clamped(n);
        }
        return rep;
    }
    const Rat m(static_cast<long long>(inst.sets.size()));
    if (real) {
        const Rat gamma = scale_factor_offline(inst, *real);
        Rat maxb = 0;
        for (size_t s = 0; s < inst.sets.size(); ++s) {
            const Rat b = inst.kind == Kind::MinSet ? *real->wstar - inst.set_lower(static_cast<int>(s))
                                                    : inst.rhs[s];
            maxb = std::max(maxb, b);
        }
        rep.grset = ceil_ln_clamped(gamma * m * maxb) + ceil_ln_clamped(m);
    }
    bool any_width = false;
    for (const auto& iv : inst.intervals) any_width = any_width || iv.width() > 0;
    if (any_width || real) {
        // With a realization, evaluate at the same scale factor as grset so
        // the two are comparable; otherwise at the online factor the
        // strategies use.
        const Rat gamma = real ? scale_factor_offline(inst, *real) : scale_factor_online(inst);
        Rat max_gap;
        bool first = true;
        for (size_t s = 0; s < inst.sets.size(); ++s)
            for (size_t t = 0; t < inst.sets.size(); ++t) {
                const Rat gap = inst.set_upper(static_cast<int>(s)) - inst.set_lower(static_cast<int>(t));
                if (first || gap > max_gap) {
                    max_gap = gap;
                    first = false;
                }
            }
        rep.grsetu = ceil_ln_clamped(gamma * m * max_gap) + ceil_ln_clamped(m);
    }
    return rep;
}

std::vector<AlphaVerdict> verify_alpha_approx(const Instance& inst, const Realization& real,
                                              const RunTrace& trace, const Rat& alpha,
                                              long opt_budget) {
    if (alpha < 1) throw contract_error("verify_alpha_approx: alpha must be >= 1");
    const int opt = exact_opt(inst, real, opt_budget).opt_size;
    std::vector<AlphaVerdict> verdicts;
    if (trace.iterations.empty()) return verdicts;
    if (opt == 0) throw contract_error("verify_alpha_approx: iterations on a solved instance");

    const Rat gamma = scale_factor_online(inst);
    const std::vector<Rat> targets = capped_targets(inst, real);
    CoveringProblem p = inst.kind == Kind::MinCover
                            ? CoveringProblem::mincover(inst, &real, gamma)
                            : CoveringProblem::minset_fixed(inst, &real, gamma, targets);
    if (inst.kind == Kind::MinCover) {
        p.rhs0.clear();
        for (const Rat& b : targets) p.rhs0.push_back(std::max(Rat(0), gamma * b));
    }
    // factor (1 - 1/(alpha OPT))
    const Rat keep = 1 - 1 / (alpha * opt);

    CoverEval eval(p, true);
    for (const auto& it : trace.iterations) {
        const Rat b_before = eval.residual_total();
        const int a_before = eval.active_count();
        for (int u : it.queries) eval.add(u);
        const Rat b_after = eval.residual_total();
        const int a_after = eval.active_count();
        AlphaVerdict v;
        v.outer_index = it.outer_index;
        v.active_drop = Rat(a_after) <= keep * a_before;
        v.residual_drop = b_before >= 1 && b_after <= keep * b_before;
        v.pass = v.active_drop || v.residual_drop;
        verdicts.push_back(v);
    }
    return verdicts;
}

}  // namespace uncover
