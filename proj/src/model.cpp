#include "uncover/model.hpp"

#include <algorithm>
#include <limits>

namespace uncover {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::MinSet: return "minset";
        case Kind::MinSetDetRhs: return "minset_detrhs";
        case Kind::MinCover: return "mincover";
    }
    return "?";
}

Rat Instance::set_lower(int s) const {
    Rat sum = 0;
    for (int i : sets[static_cast<size_t>(s)]) sum += intervals[static_cast<size_t>(i)].lower;
    return sum;
}

Rat Instance::set_upper(int s) const {
    Rat sum = 0;
    for (int i : sets[static_cast<size_t>(s)]) sum += intervals[static_cast<size_t>(i)].upper;
    return sum;
}

void Instance::validate() const {
    const int n = static_cast<int>(intervals.size());
    for (int i = 0; i < n; ++i) {
        const auto& iv = intervals[static_cast<size_t>(i)];
        if (iv.lower > iv.upper) throw schema_error("interval " + std::to_string(i) + ": lower > upper");
        iv.dist.validate(iv.lower, iv.upper);
    }
    if (sets.empty()) throw schema_error("instance has no sets");
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (size_t s = 0; s < sets.size(); ++s) {
        if (sets[s].empty()) throw schema_error("sets[" + std::to_string(s) + "] is empty");
        for (int i : sets[s]) {
            if (i < 0 || i >= n)
                throw schema_error("sets[" + std::to_string(s) + "] has invalid interval index");
            if (kind == Kind::MinCover) {
                if (seen[static_cast<size_t>(i)])
                    throw schema_error("coefficient entry " + std::to_string(i) +
                                       " used by more than one multiset");
                seen[static_cast<size_t>(i)] = 1;
            }
        }
    }
    if (kind == Kind::MinSetDetRhs && rhs.size() != sets.size())
        throw schema_error("minset_detrhs needs one rhs per set");
    if (kind == Kind::MinSet && !rhs.empty())
        throw schema_error("plain minset takes no rhs");
    if (kind == Kind::MinCover) {
        if (num_elements <= 0) throw schema_error("mincover needs a positive element count");
        if (static_cast<int>(rhs.size()) != num_elements)
            throw schema_error("mincover needs one rhs per element");
        if (elem_of.size() != intervals.size())
            throw schema_error("mincover needs an element index per coefficient entry");
        for (int e : elem_of)
            if (e < 0 || e >= num_elements) throw schema_error("coefficient entry names invalid element");
        for (const auto& iv : intervals)
            if (iv.lower < 0) throw schema_error("mincover coefficients must be nonnegative");
    }
}

bool Instance::operator==(const Instance& o) const {
    if (kind != o.kind || sets != o.sets || rhs != o.rhs || elem_of != o.elem_of ||
        num_elements != o.num_elements || intervals.size() != o.intervals.size())
        return false;
    for (size_t i = 0; i < intervals.size(); ++i) {
        const auto &a = intervals[i], &b = o.intervals[i];
        if (a.lower != b.lower || a.upper != b.upper || !(a.dist == b.dist)) return false;
    }
    return true;
}

Rat Realization::set_value(const Instance& inst, int s) const {
    Rat sum = 0;
    for (int i : inst.sets[static_cast<size_t>(s)]) sum += values[static_cast<size_t>(i)];
    return sum;
}

void Realization::validate(const Instance& inst) const {
    if (values.size() != inst.intervals.size())
        throw schema_error("realization size does not match instance");
    for (size_t i = 0; i < values.size(); ++i) {
        const auto& iv = inst.intervals[i];
        if (iv.trivial() ? values[i] != iv.lower : !(iv.lower < values[i] && values[i] < iv.upper))
            throw schema_error("realized value " + std::to_string(i) + " outside its interval");
    }
    if (inst.kind != Kind::MinCover) {
        Rat best = set_value(inst, 0);
        for (size_t s = 1; s < inst.sets.size(); ++s) best = std::min(best, set_value(inst, static_cast<int>(s)));
        if (!wstar || *wstar != best) throw schema_error("wstar does not match set values");
    }
}

Realization sample_realization(const Instance& inst, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Realization real;
    real.values.reserve(inst.intervals.size());
    for (const auto& iv : inst.intervals)
        real.values.push_back(iv.trivial() ? iv.lower : iv.dist.sample(iv.lower, iv.upper, rng));
    if (inst.kind != Kind::MinCover) {
        Rat best = real.set_value(inst, 0);
        for (size_t s = 1; s < inst.sets.size(); ++s)
            best = std::min(best, real.set_value(inst, static_cast<int>(s)));
        real.wstar = best;
    }
    return real;
}

QueryState::QueryState(const Instance& inst, const Realization& real)
    : inst_(&inst), real_(&real), queried_(inst.intervals.size(), 0) {
    if (inst.kind == Kind::MinCover) throw contract_error("QueryState is for MinSet kinds");
    const int m = static_cast<int>(inst.sets.size());
    lo_.reserve(static_cast<size_t>(m));
    hi_.reserve(static_cast<size_t>(m));
    open_count_.reserve(static_cast<size_t>(m));
    for (int s = 0; s < m; ++s) {
        lo_.push_back(inst.set_lower(s));
        hi_.push_back(inst.set_upper(s));
        int open = 0;
        for (int i : inst.sets[static_cast<size_t>(s)])
            if (!inst.intervals[static_cast<size_t>(i)].trivial()) ++open;
        open_count_.push_back(open);
    }
}

const Rat& QueryState::query(int id) {
    if (id < 0 || id >= static_cast<int>(queried_.size())) throw contract_error("query: bad unit id");
    if (queried_[static_cast<size_t>(id)]) throw contract_error("query: unit already queried");
    queried_[static_cast<size_t>(id)] = 1;
    order_.push_back(id);
    const auto& iv = inst_->intervals[static_cast<size_t>(id)];
    const Rat& w = real_->values[static_cast<size_t>(id)];
    if (!iv.trivial()) {
        for (size_t s = 0; s < inst_->sets.size(); ++s) {
            const auto& members = inst_->sets[s];
            if (std::find(members.begin(), members.end(), id) == members.end()) continue;
            lo_[s] += w - iv.lower;
            hi_[s] -= iv.upper - w;
            --open_count_[s];
        }
    }
    return w;
}

Rat QueryState::min_lower_limit() const {
    Rat best = lo_[0];
    for (const auto& v : lo_) best = std::min(best, v);
    return best;
}

Rat QueryState::min_upper_limit() const {
    Rat best = hi_[0];
    for (const auto& v : hi_) best = std::min(best, v);
    return best;
}

bool is_solved_minset(const QueryState& state) {
    const Instance& inst = state.instance();
    if (inst.kind != Kind::MinSet) throw contract_error("is_solved_minset: wrong instance kind");
    const Rat vmin = state.min_lower_limit();
    for (size_t s = 0; s < inst.sets.size(); ++s)
        if (state.set_complete(static_cast<int>(s)) && state.lower_limit(static_cast<int>(s)) == vmin)
            return true;
    return false;
}

Rat balancing_tau(const Instance& inst) {
    Rat best = 1;
    for (const auto& iv : inst.intervals) best = std::min(best, iv.tau());
    return best;
}

std::optional<Rat> mincover_tau_prime(const Instance& inst) {
    if (inst.kind != Kind::MinCover) throw contract_error("mincover_tau_prime: wrong instance kind");
    for (const auto& iv : inst.intervals)
        if (!iv.trivial() && !iv.dist.symmetric_about_center(iv.lower, iv.upper)) return std::nullopt;
    return Rat(1, 2);
}

std::pair<Instance, Realization> reflect_maxset(const Instance& inst, const Realization& real) {
    if (inst.kind != Kind::MinSet) throw contract_error("reflect_maxset: wrong instance kind");
    Instance out = inst;
    Realization rout;
    rout.values.reserve(real.values.size());
    for (size_t i = 0; i < inst.intervals.size(); ++i) {
        auto& iv = out.intervals[i];
        iv.lower = -inst.intervals[i].upper;
        iv.upper = -inst.intervals[i].lower;
        iv.dist = inst.intervals[i].dist.mirrored();
        rout.values.push_back(-real.values[i]);
    }
    Rat best = rout.set_value(out, 0);
    for (size_t s = 1; s < out.sets.size(); ++s)
        best = std::min(best, rout.set_value(out, static_cast<int>(s)));
    rout.wstar = best;
    return {std::move(out), std::move(rout)};
}

bool maxset_feasible(const Instance& inst, const Realization& real, std::span<const int> q) {
    std::vector<char> in_q(inst.intervals.size(), 0);
    for (int i : q) in_q[static_cast<size_t>(i)] = 1;
    Rat wmax = real.set_value(inst, 0);
    for (size_t s = 1; s < inst.sets.size(); ++s)
        wmax = std::max(wmax, real.set_value(inst, static_cast<int>(s)));

    bool witness = false;
    for (size_t s = 0; s < inst.sets.size() && !witness; ++s) {
        if (real.set_value(inst, static_cast<int>(s)) != wmax) continue;
        bool complete = true;
        for (int i : inst.sets[s])
            if (!inst.intervals[static_cast<size_t>(i)].trivial() && !in_q[static_cast<size_t>(i)])
                complete = false;
        witness = complete;
    }
    if (!witness) return false;
    for (size_t s = 0; s < inst.sets.size(); ++s) {
        Rat hi = 0;
        for (int i : inst.sets[s]) {
            const auto& iv = inst.intervals[static_cast<size_t>(i)];
            hi += in_q[static_cast<size_t>(i)] || iv.trivial() ? real.values[static_cast<size_t>(i)]
                                                               : iv.upper;
        }
        if (hi > wmax) return false;
    }
    return true;
}

}  // namespace uncover
