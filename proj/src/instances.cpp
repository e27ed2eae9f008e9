#include "uncover/instances.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <random>

namespace uncover {

namespace {

UncertaintyInterval make_interval(int id, Rat lo, Rat hi, DistributionSpec dist) {
    UncertaintyInterval iv;
    iv.id = id;
    iv.lower = std::move(lo);
    iv.upper = std::move(hi);
    iv.dist = std::move(dist);
    return iv;
}

}  // namespace

std::pair<Instance, Realization> gen_demo() {
    Instance inst;
    inst.kind = Kind::MinSet;
    const std::pair<Rat, Rat> bounds[] = {{1, 3},          {Rat(1, 2), Rat(5, 2)}, {0, 3},
                                          {Rat(1, 2), 4},  {1, 5},                 {1, 3},
                                          {2, 5},          {1, 5}};
    for (int i = 0; i < 8; ++i)
        inst.intervals.push_back(
            make_interval(i, bounds[i].first, bounds[i].second, DistributionSpec::uniform()));
    inst.sets = {{0, 1}, {2, 3, 4}, {3, 4, 5}, {6, 7}};
    inst.validate();
    Realization real;
    real.values = {Rat(5, 2), Rat(7, 4), Rat(1, 4), Rat(3, 4), Rat(4), Rat(3, 2), Rat(9, 2), Rat(2)};
    real.wstar = Rat(17, 4);
    real.validate(inst);
    return {std::move(inst), std::move(real)};
}

namespace {

Instance lb_skeleton(int n, const Rat& tau, const Rat& eps) {
    if (!(tau > 0 && tau <= 1)) throw schema_error("lb family needs 0 < tau <= 1");
    if (!(eps > 0 && eps < Rat(1, 2))) throw schema_error("lb family needs 0 < eps < 1/2");
    if (n < 1) throw schema_error("lb family needs n >= 1");
    Instance inst;
    inst.kind = Kind::MinSet;
    inst.intervals.push_back(make_interval(0, Rat(13, 20), Rat(13, 20), DistributionSpec::point(Rat(13, 20))));
    inst.sets = {{0}, {}};
    for (int i = 1; i <= n; ++i) inst.sets[1].push_back(i);
    return inst;
}

}  // namespace

Instance gen_lb21(int n, const Rat& tau, const Rat& eps) {
    Instance inst = lb_skeleton(n, tau, eps);
    for (int i = 1; i <= n; ++i)
        inst.intervals.push_back(
            make_interval(i, 0, 1, DistributionSpec::two_point(eps, 1 - tau, Rat(7, 10), tau)));
    inst.validate();
    return inst;
}

Instance gen_lb22(int n, const Rat& tau, const Rat& eps) {
    Instance inst = lb_skeleton(n, tau, eps);
    for (int i = 1; i < n; ++i)
        inst.intervals.push_back(
            make_interval(i, 0, 1, DistributionSpec::two_point(eps, 1 - tau, Rat(51, 100), tau)));
    inst.intervals.push_back(make_interval(n, 0, 1, DistributionSpec::point(Rat(7, 10))));
    inst.validate();
    return inst;
}

std::pair<Instance, Realization> gen_setcover_reduction(const SetCoverSource& source, const Rat& w_r,
                                                        const Rat& delta, const Rat& eps) {
    if (source.universe < 1) throw schema_error("set-cover source needs a nonempty universe");
    if (!(eps > 0 && eps < delta)) throw schema_error("set-cover reduction needs 0 < eps < delta");
    if (w_r <= 0) throw schema_error("set-cover reduction needs w_r > 0");
    std::vector<char> covered(static_cast<size_t>(source.universe), 0);
    for (const auto& fam : source.families)
        for (int e : fam) {
            if (e < 0 || e >= source.universe) throw schema_error("set-cover source element out of range");
            covered[static_cast<size_t>(e)] = 1;
        }
    for (char c : covered)
        if (!c) throw schema_error("set-cover source leaves an element uncoverable");

    Instance inst;
    inst.kind = Kind::MinSet;
    Realization real;
    inst.intervals.push_back(make_interval(0, w_r, w_r, DistributionSpec::point(w_r)));
    real.values.push_back(w_r);
    for (size_t f = 0; f < source.families.size(); ++f) {
        inst.intervals.push_back(make_interval(static_cast<int>(f) + 1, 0, w_r + delta,
                                               DistributionSpec::point(w_r + eps)));
        real.values.push_back(w_r + eps);
    }
    inst.sets.push_back({0});
    for (int e = 0; e < source.universe; ++e) {
        std::vector<int> members;
        for (size_t f = 0; f < source.families.size(); ++f) {
            const auto& fam = source.families[f];
            if (std::find(fam.begin(), fam.end(), e) != fam.end())
                members.push_back(static_cast<int>(f) + 1);
        }
        inst.sets.push_back(std::move(members));
    }
    inst.validate();
    real.wstar = w_r;
    real.validate(inst);
    return {std::move(inst), std::move(real)};
}

namespace {

// Deterministic helpers over a seeded engine; quantities land on a 1/8 grid.
Rat grid_draw(std::mt19937_64& rng, const Rat& lo, const Rat& hi) {
    const Rat steps = (hi - lo) * 8;
    const auto max_step = static_cast<std::uint64_t>(numerator(steps) / denominator(steps));
    const std::uint64_t k = rng() % (max_step + 1);
    return lo + Rat(static_cast<long long>(k), 8);
}

DistributionSpec random_dist(std::mt19937_64& rng, const Rat& lo, const Rat& hi) {
    switch (rng() % 4) {
        case 0:
            return DistributionSpec::symmetric_triangular();
        case 1: {
            const Rat q = (hi - lo) / 4;
            const std::uint64_t p = rng() % 3;  // p_hi in {1/4, 1/2, 3/4}
            const Rat p_hi(static_cast<long long>(p + 1), 4);
            return DistributionSpec::two_point(lo + q, 1 - p_hi, hi - q, p_hi);
        }
        default:
            return DistributionSpec::uniform();
    }
}

}  // namespace

Instance gen_random_minset(const RandomMinSetParams& params, std::uint64_t seed) {
    if (params.n < 1 || params.m < 1 || params.max_set_size < 1)
        throw schema_error("random minset: n, m, max_set_size must be positive");
    if (!(params.width_lo > 0 && params.width_lo <= params.width_hi))
        throw schema_error("random minset: need 0 < width_lo <= width_hi");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.kind = params.deterministic_rhs ? Kind::MinSetDetRhs : Kind::MinSet;
    for (int i = 0; i < params.n; ++i) {
        const Rat lo = grid_draw(rng, 0, 2);
        const bool trivial = params.allow_trivial && i > 0 && rng() % 8 == 0;
        if (trivial) {
            inst.intervals.push_back(make_interval(i, lo, lo, DistributionSpec::point(lo)));
        } else {
            const Rat width = grid_draw(rng, params.width_lo, params.width_hi);
            const Rat hi = lo + width;
            inst.intervals.push_back(make_interval(i, lo, hi, random_dist(rng, lo, hi)));
        }
    }
    for (int s = 0; s < params.m; ++s) {
        const int size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                  std::min(params.max_set_size, params.n)));
        std::vector<int> members;
        while (static_cast<int>(members.size()) < size) {
            const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(params.n));
            if (std::find(members.begin(), members.end(), i) == members.end()) members.push_back(i);
        }
        std::sort(members.begin(), members.end());
        inst.sets.push_back(std::move(members));
    }
    if (params.deterministic_rhs) {
        for (int s = 0; s < params.m; ++s) {
            Rat total_width = 0;
            for (int i : inst.sets[static_cast<size_t>(s)])
                total_width += inst.intervals[static_cast<size_t>(i)].width();
            // Requirements sit well inside the typical reach so that most
            // realizations stay coverable.
            inst.rhs.push_back(total_width > 0 ? grid_draw(rng, Rat(1, 8), std::max(Rat(1, 4), total_width / 4))
                                               : Rat(0));
        }
    }
    inst.validate();
    return inst;
}

Instance gen_random_disjoint(const RandomDisjointParams& params, std::uint64_t seed) {
    if (params.n < params.m || params.m < 1)
        throw schema_error("random disjoint: need n >= m >= 1");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.kind = Kind::MinSet;
    for (int i = 0; i < params.n; ++i) {
        const Rat lo = grid_draw(rng, 0, 2);
        const Rat width = grid_draw(rng, params.width_lo, params.width_hi);
        const Rat hi = lo + width;
        inst.intervals.push_back(make_interval(i, lo, hi, random_dist(rng, lo, hi)));
    }
    std::vector<int> order(static_cast<size_t>(params.n));
    for (int i = 0; i < params.n; ++i) order[static_cast<size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    // m nonempty chunks
    std::vector<int> cuts{0, params.n};
    while (static_cast<int>(cuts.size()) < params.m + 1) {
        const int c = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.n - 1));
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    for (int s = 0; s < params.m; ++s) {
        std::vector<int> members(order.begin() + cuts[static_cast<size_t>(s)],
                                 order.begin() + cuts[static_cast<size_t>(s) + 1]);
        std::sort(members.begin(), members.end());
        inst.sets.push_back(std::move(members));
    }
    inst.validate();
    return inst;
}

Instance gen_random_mincover(const RandomMinCoverParams& params, std::uint64_t seed) {
    if (params.elements < 1 || params.multisets < 1)
        throw schema_error("random mincover: needs positive element and multiset counts");
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.kind = Kind::MinCover;
    inst.num_elements = params.elements;
    int next_entry = 0;
    for (int m = 0; m < params.multisets; ++m) {
        std::vector<int> entries;
        for (int e = 0; e < params.elements; ++e) {
            if (rng() % 2 != 0) continue;
            const Rat up = grid_draw(rng, Rat(1, 2), params.coeff_hi);
            DistributionSpec dist =
                rng() % 2 == 0 ? DistributionSpec::uniform() : DistributionSpec::symmetric_triangular();
            inst.intervals.push_back(make_interval(next_entry, 0, up, std::move(dist)));
            inst.elem_of.push_back(e);
            entries.push_back(next_entry++);
        }
        if (entries.empty()) {
            const int e = static_cast<int>(rng() % static_cast<std::uint64_t>(params.elements));
            const Rat up = grid_draw(rng, Rat(1, 2), params.coeff_hi);
            inst.intervals.push_back(make_interval(next_entry, 0, up, DistributionSpec::uniform()));
            inst.elem_of.push_back(e);
            entries.push_back(next_entry++);
        }
        inst.sets.push_back(std::move(entries));
    }
    // every element must be touched by some multiset, or its requirement
    // could never shrink
    for (int e = 0; e < params.elements; ++e) {
        bool covered = false;
        for (int x : inst.elem_of) covered = covered || x == e;
        if (covered) continue;
        const auto m = rng() % static_cast<std::uint64_t>(params.multisets);
        const Rat up = grid_draw(rng, Rat(1, 2), params.coeff_hi);
        inst.intervals.push_back(make_interval(next_entry, 0, up, DistributionSpec::uniform()));
        inst.elem_of.push_back(e);
        inst.sets[static_cast<size_t>(m)].push_back(next_entry++);
    }
    for (int e = 0; e < params.elements; ++e) inst.rhs.push_back(grid_draw(rng, Rat(1, 8), params.rhs_hi));
    inst.validate();
    return inst;
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json j;
    j["kind"] = kind_name(inst.kind);
    nlohmann::json ivs = nlohmann::json::array();
    for (size_t i = 0; i < inst.intervals.size(); ++i) {
        const auto& iv = inst.intervals[i];
        nlohmann::json e{{"lower", rat_to_string(iv.lower)},
                         {"upper", rat_to_string(iv.upper)},
                         {"dist", iv.dist.to_json()}};
        if (inst.kind == Kind::MinCover) e["elem"] = inst.elem_of[i];
        ivs.push_back(std::move(e));
    }
    j["intervals"] = std::move(ivs);
    j["sets"] = inst.sets;
    if (!inst.rhs.empty()) {
        nlohmann::json r = nlohmann::json::array();
        for (const Rat& b : inst.rhs) r.push_back(rat_to_string(b));
        j["rhs"] = std::move(r);
    }
    if (inst.kind == Kind::MinCover) j["elements"] = inst.num_elements;
    return j;
}

Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    if (!j.contains("kind")) throw schema_error("instance: missing field 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "minset") {
        inst.kind = Kind::MinSet;
    } else if (kind == "minset_detrhs") {
        inst.kind = Kind::MinSetDetRhs;
    } else if (kind == "mincover") {
        inst.kind = Kind::MinCover;
    } else {
        throw schema_error("instance: unknown kind '" + kind + "'");
    }
    if (!j.contains("intervals")) throw schema_error("instance: missing field 'intervals'");
    if (!j.contains("sets")) throw schema_error("instance: missing field 'sets'");
    int id = 0;
    for (const auto& e : j.at("intervals")) {
        const std::string where = "intervals[" + std::to_string(id) + "]";
        if (!e.contains("lower") || !e.contains("upper") || !e.contains("dist"))
            throw schema_error(where + ": needs lower, upper, dist");
        UncertaintyInterval iv;
        iv.id = id;
        iv.lower = rat_from_string(e.at("lower").get<std::string>());
        iv.upper = rat_from_string(e.at("upper").get<std::string>());
        iv.dist = DistributionSpec::from_json(e.at("dist"), where);
        inst.intervals.push_back(std::move(iv));
        if (inst.kind == Kind::MinCover) {
            if (!e.contains("elem")) throw schema_error(where + ": mincover entry needs 'elem'");
            inst.elem_of.push_back(e.at("elem").get<int>());
        }
        ++id;
    }
    inst.sets = j.at("sets").get<std::vector<std::vector<int>>>();
    if (j.contains("rhs"))
        for (const auto& b : j.at("rhs")) inst.rhs.push_back(rat_from_string(b.get<std::string>()));
    if (inst.kind == Kind::MinCover) {
        if (!j.contains("elements")) throw schema_error("instance: mincover needs 'elements'");
        inst.num_elements = j.at("elements").get<int>();
    }
    inst.validate();
    return inst;
}

nlohmann::json realization_to_json(const Realization& real) {
    nlohmann::json j;
    nlohmann::json vals = nlohmann::json::array();
    for (const Rat& v : real.values) vals.push_back(rat_to_string(v));
    j["values"] = std::move(vals);
    if (real.wstar) j["wstar"] = rat_to_string(*real.wstar);
    return j;
}

Realization realization_from_json(const nlohmann::json& j, const Instance& inst) {
    if (!j.contains("values")) throw schema_error("realization: missing field 'values'");
    Realization real;
    for (const auto& v : j.at("values")) real.values.push_back(rat_from_string(v.get<std::string>()));
    if (j.contains("wstar")) real.wstar = rat_from_string(j.at("wstar").get<std::string>());
    real.validate(inst);
    return real;
}

void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw schema_error(path + ": " + e.what());
    }
}

}  // namespace uncover
