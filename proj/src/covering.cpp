#include "uncover/covering.hpp"

#include <algorithm>

namespace uncover {

namespace {

void push_minset_terms(CoveringProblem& p, const Instance& inst, const Realization* real) {
    p.num_units = static_cast<int>(inst.intervals.size());
    p.num_cons = static_cast<int>(inst.sets.size());
    p.unit_terms.assign(static_cast<size_t>(p.num_units), {});
    p.cons_members.assign(static_cast<size_t>(p.num_cons), {});
    p.has_coeffs = real != nullptr;
    for (int s = 0; s < p.num_cons; ++s) {
        for (int i : inst.sets[static_cast<size_t>(s)]) {
            const auto& iv = inst.intervals[static_cast<size_t>(i)];
            CoveringProblem::Term t;
            t.cons = s;
            t.cap = p.gamma * iv.width();
            t.coeff = real ? p.gamma * (real->values[static_cast<size_t>(i)] - iv.lower) : Rat(0);
            p.unit_terms[static_cast<size_t>(i)].push_back(std::move(t));
            p.cons_members[static_cast<size_t>(s)].push_back(i);
        }
    }
}

}  // namespace

CoveringProblem CoveringProblem::minset_parametric(const Instance& inst, const Realization* real,
                                                   Rat gamma) {
    if (inst.kind == Kind::MinCover) throw contract_error("parametric view is for MinSet kinds");
    CoveringProblem p;
    p.gamma = std::move(gamma);
    push_minset_terms(p, inst, real);
    p.parametric = true;
    p.base.reserve(static_cast<size_t>(p.num_cons));
    for (int s = 0; s < p.num_cons; ++s) p.base.push_back(inst.set_lower(s));
    return p;
}

CoveringProblem CoveringProblem::minset_fixed(const Instance& inst, const Realization* real, Rat gamma,
                                              std::span<const Rat> rhs_unscaled) {
    if (inst.kind == Kind::MinCover) throw contract_error("minset_fixed is for MinSet kinds");
    if (rhs_unscaled.size() != inst.sets.size()) throw contract_error("rhs size mismatch");
    CoveringProblem p;
    p.gamma = std::move(gamma);
    push_minset_terms(p, inst, real);
    p.rhs0.reserve(rhs_unscaled.size());
    for (const Rat& b : rhs_unscaled) p.rhs0.push_back(std::max(Rat(0), p.gamma * b));
    return p;
}

CoveringProblem CoveringProblem::mincover(const Instance& inst, const Realization* real, Rat gamma) {
    if (inst.kind != Kind::MinCover) throw contract_error("mincover view needs a mincover instance");
    CoveringProblem p;
    p.gamma = std::move(gamma);
    p.num_units = static_cast<int>(inst.sets.size());
    p.num_cons = inst.num_elements;
    p.unit_terms.assign(static_cast<size_t>(p.num_units), {});
    p.cons_members.assign(static_cast<size_t>(p.num_cons), {});
    p.has_coeffs = real != nullptr;
    for (int m = 0; m < p.num_units; ++m) {
        for (int entry : inst.sets[static_cast<size_t>(m)]) {
            const auto& iv = inst.intervals[static_cast<size_t>(entry)];
            CoveringProblem::Term t;
            t.cons = inst.elem_of[static_cast<size_t>(entry)];
            // Optimistic coefficient for multicover is the full upper limit.
            t.cap = p.gamma * iv.upper;
            t.coeff = real ? p.gamma * real->values[static_cast<size_t>(entry)] : Rat(0);
            p.cons_members[static_cast<size_t>(t.cons)].push_back(m);
            p.unit_terms[static_cast<size_t>(m)].push_back(std::move(t));
        }
    }
    p.rhs0.reserve(inst.rhs.size());
    for (const Rat& b : inst.rhs) p.rhs0.push_back(std::max(Rat(0), p.gamma * b));
    return p;
}

CoverEval::CoverEval(const CoveringProblem& p, bool all_revealed)
    : p_(&p),
      all_revealed_(all_revealed),
      inq_(static_cast<size_t>(p.num_units), 0),
      csum_(static_cast<size_t>(p.num_cons), Rat(0)) {
    if (all_revealed && !p.has_coeffs)
        throw contract_error("CoverEval: offline mode without realized coefficients");
}

void CoverEval::add(int unit) {
    if (inq_[static_cast<size_t>(unit)]) throw contract_error("CoverEval::add: unit already in Q");
    if (!p_->has_coeffs) throw contract_error("CoverEval::add: no realized coefficients to reveal");
    inq_[static_cast<size_t>(unit)] = 1;
    order_.push_back(unit);
    for (const auto& t : p_->unit_terms[static_cast<size_t>(unit)])
        csum_[static_cast<size_t>(t.cons)] += t.coeff;
}

Rat CoverEval::residual(int cons) const {
    if (p_->parametric) throw contract_error("residual needs a hypothesized w on parametric views");
    Rat r = p_->rhs0[static_cast<size_t>(cons)] - csum_[static_cast<size_t>(cons)];
    return r > 0 ? r : Rat(0);
}

Rat CoverEval::residual(int cons, const Rat& w) const {
    if (!p_->parametric) return residual(cons);
    Rat r = p_->gamma * (w - p_->base[static_cast<size_t>(cons)]) - csum_[static_cast<size_t>(cons)];
    return r > 0 ? r : Rat(0);
}

Rat CoverEval::residual_total() const {
    Rat total = 0;
    for (int s = 0; s < p_->num_cons; ++s) total += residual(s);
    return total;
}

Rat CoverEval::residual_total(const Rat& w) const {
    Rat total = 0;
    for (int s = 0; s < p_->num_cons; ++s) total += residual(s, w);
    return total;
}

int CoverEval::active_count() const {
    int n = 0;
    for (int s = 0; s < p_->num_cons; ++s)
        if (residual(s) > 0) ++n;
    return n;
}

int CoverEval::active_count(const Rat& w) const {
    int n = 0;
    for (int s = 0; s < p_->num_cons; ++s)
        if (residual(s, w) > 0) ++n;
    return n;
}

namespace {

// Per-constraint residual for an arbitrary query set, computed from scratch.
std::vector<Rat> residuals_of(const CoveringProblem& p, const CoverEval& knowledge,
                              std::span<const int> q1, std::span<const int> q2,
                              const std::optional<Rat>& w) {
    std::vector<Rat> csum(static_cast<size_t>(p.num_cons), Rat(0));
    std::vector<char> seen(static_cast<size_t>(p.num_units), 0);
    auto fold = [&](int u) {
        if (seen[static_cast<size_t>(u)]) return;
        seen[static_cast<size_t>(u)] = 1;
        if (!knowledge.revealed(u))
            throw contract_error("greedy value over an unrevealed unit");
        for (const auto& t : p.unit_terms[static_cast<size_t>(u)])
            csum[static_cast<size_t>(t.cons)] += t.coeff;
    };
    for (int u : q1) fold(u);
    for (int u : q2) fold(u);
    std::vector<Rat> res(static_cast<size_t>(p.num_cons));
    for (int s = 0; s < p.num_cons; ++s) {
        Rat b = p.parametric ? p.gamma * (*w - p.base[static_cast<size_t>(s)])
                             : p.rhs0[static_cast<size_t>(s)];
        b -= csum[static_cast<size_t>(s)];
        res[static_cast<size_t>(s)] = b > 0 ? b : Rat(0);
    }
    return res;
}

}  // namespace

Rat greedy_gc(const CoverEval& eval, std::span<const int> q, std::span<const int> group,
              const std::optional<Rat>& w) {
    const auto& p = eval.problem();
    if (p.parametric && !w) throw contract_error("parametric view needs w");
    auto before = residuals_of(p, eval, q, {}, w);
    auto after = residuals_of(p, eval, q, group, w);
    Rat drop = 0;
    for (int s = 0; s < p.num_cons; ++s)
        drop += before[static_cast<size_t>(s)] - after[static_cast<size_t>(s)];
    return drop;
}

long greedy_gs(const CoverEval& eval, std::span<const int> q, std::span<const int> group,
               const std::optional<Rat>& w) {
    const auto& p = eval.problem();
    if (p.parametric && !w) throw contract_error("parametric view needs w");
    auto before = residuals_of(p, eval, q, {}, w);
    auto after = residuals_of(p, eval, q, group, w);
    long drop = 0;
    for (int s = 0; s < p.num_cons; ++s)
        drop += (before[static_cast<size_t>(s)] > 0 ? 1 : 0) - (after[static_cast<size_t>(s)] > 0 ? 1 : 0);
    return drop;
}

Rat optimistic_gc(const CoverEval& eval, int unit, const std::optional<Rat>& w) {
    const auto& p = eval.problem();
    if (p.parametric && !w) throw contract_error("parametric view needs w");
    if (eval.in_q(unit)) throw contract_error("optimistic value of a unit already in Q");
    Rat total = 0;
    for (const auto& t : p.unit_terms[static_cast<size_t>(unit)]) {
        const Rat r = p.parametric ? eval.residual(t.cons, *w) : eval.residual(t.cons);
        total += std::min(r, t.cap);
    }
    return total;
}

long optimistic_gs(const CoverEval& eval, int unit, const std::optional<Rat>& w) {
    const auto& p = eval.problem();
    if (p.parametric && !w) throw contract_error("parametric view needs w");
    if (eval.in_q(unit)) throw contract_error("optimistic value of a unit already in Q");
    long n = 0;
    for (const auto& t : p.unit_terms[static_cast<size_t>(unit)]) {
        const Rat r = p.parametric ? eval.residual(t.cons, *w) : eval.residual(t.cons);
        if (r > 0 && r <= t.cap) ++n;
    }
    return n;
}

namespace {

Rat eval_kind(const CoverEval& eval, GreedyKind kind, int unit, const Rat& w) {
    if (kind == GreedyKind::Gc) return optimistic_gc(eval, unit, w);
    return Rat(optimistic_gs(eval, unit, w));
}

}  // namespace

std::optional<WReach> min_w_reaching(const CoverEval& eval, GreedyKind kind, const Rat& d,
                                     const Rat& w_lo, const Rat& w_hi, bool hi_open) {
    const auto& p = eval.problem();
    if (!p.parametric) throw contract_error("min_w_reaching needs a parametric view");
    if (d <= 0) throw contract_error("min_w_reaching needs d > 0");
    if (w_lo > w_hi || (hi_open && w_lo == w_hi)) return std::nullopt;

    std::vector<int> cands;
    for (int u = 0; u < p.num_units; ++u)
        if (!eval.in_q(u) && p.unit_useful(u)) cands.push_back(u);
    if (cands.empty()) return std::nullopt;

    // Breakpoints: residual activation of each constraint, plus each
    // unit-cap crossing w = t_S + cap/gamma.
    std::vector<Rat> points;
    points.push_back(w_lo);
    if (!hi_open) points.push_back(w_hi);
    std::vector<Rat> activation(static_cast<size_t>(p.num_cons));
    for (int s = 0; s < p.num_cons; ++s) {
        activation[static_cast<size_t>(s)] =
            p.base[static_cast<size_t>(s)] + eval.coeff_sum(s) / p.gamma;
        points.push_back(activation[static_cast<size_t>(s)]);
    }
    for (int u : cands)
        for (const auto& t : p.unit_terms[static_cast<size_t>(u)])
            points.push_back(activation[static_cast<size_t>(t.cons)] + t.cap / p.gamma);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto lo_it = std::lower_bound(points.begin(), points.end(), w_lo);
    auto hi_it = std::upper_bound(points.begin(), points.end(), w_hi);
    std::vector<Rat> grid(lo_it, hi_it);
    if (grid.empty() || grid.front() != w_lo) grid.insert(grid.begin(), w_lo);
    while (!grid.empty() && (grid.back() > w_hi || (hi_open && grid.back() == w_hi))) grid.pop_back();
    if (!hi_open && (grid.empty() || grid.back() != w_hi)) grid.push_back(w_hi);

    auto argmax_at = [&](const Rat& w) -> std::optional<WReach> {
        int best_unit = -1;
        Rat best_val;
        for (int u : cands) {
            Rat v = eval_kind(eval, kind, u, w);
            if (best_unit < 0 || v > best_val) {
                best_unit = u;
                best_val = std::move(v);
            }
        }
        if (best_unit >= 0 && best_val >= d) return WReach{w, best_unit};
        return std::nullopt;
    };

    if (kind == GreedyKind::Gs) {
        // Step function; pieces are (p_j, p_{j+1}]. Probe each grid point and
        // a representative just inside each piece.
        const Rat tick(1, BigInt(1) << 21);
        for (size_t j = 0; j < grid.size(); ++j) {
            if (auto hit = argmax_at(grid[j])) return hit;
            Rat next = j + 1 < grid.size() ? grid[j + 1] : w_hi;
            if (next > grid[j]) {
                Rat step = std::min(tick, (next - grid[j]) / 2);
                if (auto hit = argmax_at(grid[j] + step)) return hit;
            }
        }
        return std::nullopt;
    }

    // gc: continuous piecewise linear and nondecreasing in w; solve each
    // linear segment exactly.
    if (auto hit = argmax_at(grid.front())) return hit;
    auto solve_segment = [&](const Rat& a, const Rat& b) -> std::optional<Rat> {
        bool reachable = false;
        Rat best_w;
        for (int u : cands) {
            const Rat va = optimistic_gc(eval, u, a);
            const Rat vb = optimistic_gc(eval, u, b);
            if (vb < d) continue;
            Rat wu = va >= d ? a : a + (d - va) * (b - a) / (vb - va);
            if (!reachable || wu < best_w) {
                reachable = true;
                best_w = std::move(wu);
            }
        }
        if (!reachable) return std::nullopt;
        return best_w;
    };
    for (size_t j = 0; j + 1 < grid.size(); ++j) {
        if (grid[j] == grid[j + 1]) continue;
        if (auto w = solve_segment(grid[j], grid[j + 1])) return argmax_at(*w);
    }
    if (hi_open && grid.back() < w_hi) {
        // All breakpoints lie at or below grid.back(), so gc is linear on the
        // final half-open sliver.
        if (auto w = solve_segment(grid.back(), w_hi); w && *w < w_hi) return argmax_at(*w);
    }
    return std::nullopt;
}

Rat scale_factor_online(const Instance& inst) {
    std::optional<Rat> smin;
    if (inst.kind == Kind::MinCover) {
        for (const auto& iv : inst.intervals)
            if (iv.upper > 0 && (!smin || iv.upper < *smin)) smin = iv.upper;
    } else {
        for (const auto& iv : inst.intervals)
            if (iv.width() > 0 && (!smin || iv.width() < *smin)) smin = iv.width();
    }
    if (!smin) throw contract_error("degenerate instance: no positive widths");
    return Rat(2) / *smin;
}

Rat scale_factor_offline(const Instance& inst, const Realization& real) {
    std::optional<Rat> smin;
    if (inst.kind == Kind::MinCover) {
        for (const Rat& a : real.values)
            if (a > 0 && (!smin || a < *smin)) smin = a;
    } else {
        for (size_t i = 0; i < inst.intervals.size(); ++i) {
            const Rat a = real.values[i] - inst.intervals[i].lower;
            if (a > 0 && (!smin || a < *smin)) smin = a;
        }
    }
    if (!smin) throw contract_error("degenerate instance: no positive coefficients");
    return Rat(1) / *smin;
}

}  // namespace uncover
