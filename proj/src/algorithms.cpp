#include "uncover/algorithms.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>

namespace uncover {

namespace {

bool half_width_cleared(const Instance& inst, const Realization& real, int id) {
    const auto& iv = inst.intervals[static_cast<size_t>(id)];
    return real.values[static_cast<size_t>(id)] - iv.lower >= iv.width() / 2;
}

void require_disjoint(const Instance& inst) {
    std::vector<char> used(inst.intervals.size(), 0);
    for (const auto& s : inst.sets)
        for (int i : s) {
            if (used[static_cast<size_t>(i)])
                throw contract_error("run_disjoint: sets are not pairwise disjoint");
            used[static_cast<size_t>(i)] = 1;
        }
}

std::vector<int> q_half_of(const Instance& inst, const Realization& real,
                           std::span<const int> order, size_t phase_start) {
    std::vector<int> out;
    for (size_t k = phase_start; k < order.size(); ++k)
        if (half_width_cleared(inst, real, order[k])) out.push_back(order[k]);
    return out;
}

}  // namespace

RunTrace run_disjoint(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinSet) throw contract_error("run_disjoint: needs a plain minset instance");
    require_disjoint(inst);
    RunTrace trace;
    trace.algorithm = "disjoint";
    QueryState qs(inst, real);
    const int m = static_cast<int>(inst.sets.size());
    int outer = 0;
    while (!is_solved_minset(qs)) {
        int smin = 0;
        for (int s = 1; s < m; ++s)
            if (qs.lower_limit(s) < qs.lower_limit(smin)) smin = s;
        IterationTrace it;
        it.outer_index = outer++;
        it.prefix_size = static_cast<int>(trace.queries.size());
        it.target_set = smin;
        bool solved = false;
        for (;;) {
            int pick = -1;
            for (int i : inst.sets[static_cast<size_t>(smin)]) {
                if (qs.queried(i) || inst.intervals[static_cast<size_t>(i)].trivial()) continue;
                if (pick < 0 || inst.intervals[static_cast<size_t>(i)].width() >
                                    inst.intervals[static_cast<size_t>(pick)].width())
                    pick = i;
            }
            if (pick < 0) break;  // target set completely queried
            qs.query(pick);
            it.queries.push_back(pick);
            trace.queries.push_back(pick);
            if (is_solved_minset(qs)) {
                solved = true;
                break;
            }
            if (half_width_cleared(inst, real, pick)) break;
        }
        trace.iterations.push_back(std::move(it));
        if (solved) break;
    }
    trace.solved = true;
    return trace;
}

namespace {

// Shared body of the optimistic-greedy strategies with known right-hand
// sides (per-set requirements, and multicover). `stop_on_value_ratio`
// selects the multicover termination rule (true greedy value at least half
// the optimistic one) over the half-width rule.
RunTrace run_known_rhs(const Instance& inst, const Realization& real, const CoveringProblem& problem,
                       bool stop_on_value_ratio, const std::string& name) {
    RunTrace trace;
    trace.algorithm = name;
    CoverEval eval(problem, false);

    auto solved = [&] { return eval.active_count() == 0; };
    int outer = 0;
    while (!solved()) {
        std::vector<int> cands;
        for (int u = 0; u < problem.num_units; ++u)
            if (!eval.in_q(u) && problem.unit_useful(u)) cands.push_back(u);
        if (cands.empty()) {
            trace.exhausted_infeasible = true;
            break;
        }
        const GreedyKind g = eval.residual_total() >= 1 ? GreedyKind::Gc : GreedyKind::Gs;
        IterationTrace it;
        it.outer_index = outer++;
        it.prefix_size = static_cast<int>(trace.queries.size());
        PhaseTrace phase;
        phase.g = g;
        bool done = false;
        for (;;) {
            int pick = -1;
            Rat best;
            for (int u : cands) {
                if (eval.in_q(u)) continue;
                Rat v = g == GreedyKind::Gc ? optimistic_gc(eval, u, std::nullopt)
                                            : Rat(optimistic_gs(eval, u, std::nullopt));
                if (pick < 0 || v > best) {
                    pick = u;
                    best = std::move(v);
                }
            }
            if (pick < 0) break;  // every useful unit committed
            std::vector<int> prev = eval.order();
            eval.add(pick);
            phase.queries.push_back(pick);
            it.queries.push_back(pick);
            trace.queries.push_back(pick);
            if (solved()) {
                done = true;
                break;
            }
            bool stop;
            if (stop_on_value_ratio) {
                const std::vector<int> group{pick};
                if (g == GreedyKind::Gc)
                    stop = greedy_gc(eval, prev, group, std::nullopt) * 2 >= best;
                else
                    stop = Rat(greedy_gs(eval, prev, group, std::nullopt)) * 2 >= best;
            } else {
                stop = half_width_cleared(inst, real, pick);
            }
            if (stop) break;
        }
        const bool progressed = !it.queries.empty();
        it.phases.push_back(std::move(phase));
        trace.iterations.push_back(std::move(it));
        if (done) break;
        if (!progressed) break;
    }
    trace.solved = eval.active_count() == 0;
    trace.exhausted_infeasible = !trace.solved;
    return trace;
}

}  // namespace

RunTrace run_detrhs(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinSetDetRhs)
        throw contract_error("run_detrhs: needs a minset_detrhs instance");
    bool any_width = false;
    for (const auto& iv : inst.intervals) any_width = any_width || iv.width() > 0;
    if (!any_width) {
        RunTrace trace;
        trace.algorithm = "detrhs";
        trace.solved = true;
        CoveringProblem p = CoveringProblem::minset_fixed(inst, &real, Rat(1), inst.rhs);
        CoverEval eval(p, false);
        trace.solved = eval.active_count() == 0;
        trace.exhausted_infeasible = !trace.solved;
        return trace;
    }
    const Rat gamma = scale_factor_online(inst);
    CoveringProblem p = CoveringProblem::minset_fixed(inst, &real, gamma, inst.rhs);
    return run_known_rhs(inst, real, p, false, "detrhs");
}

RunTrace run_mincover(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinCover) throw contract_error("run_mincover: needs a mincover instance");
    bool any_cap = false;
    for (const auto& iv : inst.intervals) any_cap = any_cap || iv.upper > 0;
    Rat gamma = any_cap ? scale_factor_online(inst) : Rat(1);
    CoveringProblem p = CoveringProblem::mincover(inst, &real, gamma);
    return run_known_rhs(inst, real, p, true, "mincover");
}

RunTrace run_minset(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinSet) throw contract_error("run_minset: needs a plain minset instance");
    RunTrace trace;
    trace.algorithm = "minset";
    QueryState qs(inst, real);
    if (is_solved_minset(qs)) {
        trace.solved = true;
        return trace;
    }
    const Rat gamma = scale_factor_online(inst);
    CoveringProblem problem = CoveringProblem::minset_parametric(inst, &real, gamma);
    CoverEval eval(problem, false);

    int outer = 0;
    bool solved = false;
    while (!solved) {
        IterationTrace it;
        it.outer_index = outer++;
        it.prefix_size = static_cast<int>(trace.queries.size());
        for (GreedyKind g : {GreedyKind::Gc, GreedyKind::Gs}) {
            if (solved) break;
            PhaseTrace phase;
            phase.g = g;
            const std::vector<int> q_prefix = eval.order();
            const size_t phase_start = q_prefix.size();
            Rat d(1);
            auto bounds = [&]() -> std::pair<Rat, Rat> {
                Rat lo = qs.min_lower_limit();
                Rat hi = g == GreedyKind::Gc ? qs.min_upper_limit() : lo + 1 / gamma;
                return {std::move(lo), std::move(hi)};
            };
            const bool open_hi = g == GreedyKind::Gs;
            for (;;) {  // inner while
                auto [wlo, whi] = bounds();
                const Rat thr = d > 0 ? d : Rat(1);
                auto sel = min_w_reaching(eval, g, thr, wlo, whi, open_hi);
                if (!sel) break;
                ++phase.inner_iterations;
                bool phase_over = false;
                for (;;) {  // repeat
                    const int unit = sel->unit;
                    phase.w_selected.push_back(sel->w);
                    qs.query(unit);
                    eval.add(unit);
                    phase.queries.push_back(unit);
                    it.queries.push_back(unit);
                    trace.queries.push_back(unit);
                    if (is_solved_minset(qs)) {
                        solved = true;
                        break;
                    }
                    std::vector<int> qh = q_half_of(inst, real, eval.order(), phase_start);
                    d = g == GreedyKind::Gc
                            ? greedy_gc(eval, q_prefix, qh, sel->w)
                            : Rat(greedy_gs(eval, q_prefix, qh, sel->w));
                    phase.d_values.push_back(d);
                    phase.q_half.push_back(std::move(qh));
                    if (half_width_cleared(inst, real, unit)) {
                        phase.inner_d_end.push_back(d);
                        break;
                    }
                    auto [wlo2, whi2] = bounds();
                    const Rat thr2 = d > 0 ? d : Rat(1);
                    sel = min_w_reaching(eval, g, thr2, wlo2, whi2, open_hi);
                    if (!sel) {
                        phase.inner_d_end.push_back(d);
                        phase_over = true;
                        break;
                    }
                }
                if (solved || phase_over) break;
            }
            it.phases.push_back(std::move(phase));
        }
        if (it.queries.empty() && !solved)
            throw contract_error("run_minset: no progress on an unsolved instance");
        trace.iterations.push_back(std::move(it));
    }
    trace.solved = true;
    return trace;
}

BaselinePolicy BaselinePolicy::parse(const std::string& text) {
    BaselinePolicy p;
    if (text == "queryall") {
        p.type = Type::QueryAll;
    } else if (text == "random") {
        p.type = Type::RandomOrder;
    } else if (text == "width") {
        p.type = Type::WidthOrder;
    } else {
        throw contract_error("unknown baseline policy '" + text + "'");
    }
    return p;
}

std::string BaselinePolicy::name() const {
    switch (type) {
        case Type::QueryAll: return "baseline:queryall";
        case Type::RandomOrder: return "baseline:random";
        case Type::WidthOrder: return "baseline:width";
    }
    return "baseline:?";
}

RunTrace run_baseline(const Instance& inst, const Realization& real, const BaselinePolicy& policy) {
    if (inst.kind != Kind::MinSet) throw contract_error("run_baseline: needs a plain minset instance");
    RunTrace trace;
    trace.algorithm = policy.name();
    trace.seed = policy.seed;
    QueryState qs(inst, real);
    std::vector<int> order;
    for (size_t i = 0; i < inst.intervals.size(); ++i)
        if (!inst.intervals[i].trivial()) order.push_back(static_cast<int>(i));
    switch (policy.type) {
        case BaselinePolicy::Type::QueryAll:
            break;
        case BaselinePolicy::Type::RandomOrder: {
            std::mt19937_64 rng(policy.seed);
            std::shuffle(order.begin(), order.end(), rng);
            break;
        }
        case BaselinePolicy::Type::WidthOrder:
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return inst.intervals[static_cast<size_t>(a)].width() >
                       inst.intervals[static_cast<size_t>(b)].width();
            });
            break;
    }
    for (int id : order) {
        if (is_solved_minset(qs)) break;
        qs.query(id);
        trace.queries.push_back(id);
    }
    trace.solved = true;
    return trace;
}

namespace {

nlohmann::json rat_vec_json(const std::vector<Rat>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(rat_to_string(r));
    return a;
}

}  // namespace

nlohmann::json RunTrace::to_json() const {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    j["seed"] = seed;
    j["queries"] = queries;
    j["solved"] = solved;
    j["exhausted_infeasible"] = exhausted_infeasible;
    nlohmann::json its = nlohmann::json::array();
    for (const auto& it : iterations) {
        nlohmann::json ij;
        ij["outer"] = it.outer_index;
        ij["prefix_size"] = it.prefix_size;
        ij["queries"] = it.queries;
        if (it.target_set >= 0) ij["target_set"] = it.target_set;
        nlohmann::json phases = nlohmann::json::array();
        for (const auto& ph : it.phases) {
            nlohmann::json pj;
            pj["g"] = ph.g == GreedyKind::Gc ? "gc" : "gs";
            pj["queries"] = ph.queries;
            pj["w_selected"] = rat_vec_json(ph.w_selected);
            pj["d_values"] = rat_vec_json(ph.d_values);
            pj["q_half"] = ph.q_half;
            pj["inner_d_end"] = rat_vec_json(ph.inner_d_end);
            pj["inner_iterations"] = ph.inner_iterations;
            phases.push_back(std::move(pj));
        }
        if (!phases.empty()) ij["phases"] = std::move(phases);
        its.push_back(std::move(ij));
    }
    j["iterations"] = std::move(its);
    return j;
}

}  // namespace uncover
