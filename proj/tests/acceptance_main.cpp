// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include "oracles.hpp"
#include "uncover/harness.hpp"
#include "uncover/instances.hpp"
#include "uncover/offline.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace uncover;

namespace {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string details;
};

int ceil_log(double base, double x) {
    return static_cast<int>(std::ceil(std::log(x) / std::log(base) - 1e-12));
}

Criterion from_suite(const SuiteResult& s, const std::string& label) {
    return Criterion{label, s.pass, s.details};
}

// Criterion 6: inner-loop iteration counts and the growth of the doubling
// parameter on every traced doubling-search run.
Criterion criterion_iteration_bounds() {
    Criterion c{"6 iteration bounds (doubling search)", true, ""};
    std::mt19937_64 rng(616263);
    int runs = 0, count_violations = 0, growth_violations = 0;

    auto check_trace = [&](const Instance& inst, const RunTrace& trace) {
        ++runs;
        const Rat gamma = scale_factor_online(inst);
        Rat max_width = 0;
        for (const auto& iv : inst.intervals) max_width = std::max(max_width, iv.width());
        const double m = static_cast<double>(inst.sets.size());
        const int cap_gc = ceil_log(1.5, m * rat_to_double(gamma * max_width)) + 2;
        const int cap_gs = ceil_log(2.0, m) + 2;
        for (const auto& it : trace.iterations)
            for (const auto& ph : it.phases) {
                const int cap = ph.g == GreedyKind::Gc ? cap_gc : cap_gs;
                if (ph.inner_iterations > cap) ++count_violations;
                const auto& ds = ph.inner_d_end;
                for (size_t k = 0; k + 2 < ds.size(); ++k) {
                    const bool ok = ph.g == GreedyKind::Gc ? ds[k + 1] * 2 >= ds[k] * 3
                                                           : ds[k + 1] >= ds[k] * 2;
                    if (!ok) ++growth_violations;
                }
            }
    };

    const auto [demo, canon] = gen_demo();
    for (std::uint64_t seed = 1; seed <= 25; ++seed)
        check_trace(demo, run_minset(demo, sample_realization(demo, seed)));
    for (int t = 0; t < 200; ++t) {
        RandomMinSetParams params;
        params.n = 3 + static_cast<int>(rng() % 8);
        params.m = 2 + static_cast<int>(rng() % 4);
        const Instance inst = gen_random_minset(params, rng());
        check_trace(inst, run_minset(inst, sample_realization(inst, rng())));
    }
    c.pass = count_violations == 0 && growth_violations == 0;
    c.details = std::to_string(runs) + " traced runs; " + std::to_string(count_violations) +
                " count violations, " + std::to_string(growth_violations) + " growth violations";
    return c;
}

// Criterion 7: per-set iteration charges and the closed-form disjoint
// optimum.
Criterion criterion_disjoint_charges() {
    Criterion c{"7 disjoint charge bound", true, ""};
    std::mt19937_64 rng(717273);
    int charge_violations = 0, opt_mismatches = 0;
    for (int t = 0; t < 200; ++t) {
        RandomDisjointParams params;
        params.n = 4 + static_cast<int>(rng() % 9);
        params.m = 2 + static_cast<int>(rng() % 3);
        const Instance inst = gen_random_disjoint(params, rng());
        const Realization real = sample_realization(inst, rng());
        const RunTrace trace = run_disjoint(inst, real);
        const auto prefix = disjoint_prefix_sizes(inst, real);
        std::vector<int> charges(inst.sets.size(), 0);
        for (const auto& it : trace.iterations) ++charges[static_cast<size_t>(it.target_set)];
        for (size_t s = 0; s < inst.sets.size(); ++s)
            if (charges[s] > 2 * prefix[s]) ++charge_violations;
        if (exact_opt_disjoint(inst, real).opt_size != exact_opt(inst, real).opt_size) ++opt_mismatches;
    }
    c.pass = charge_violations == 0 && opt_mismatches == 0;
    c.details = "200 instances; " + std::to_string(charge_violations) + " charge violations, " +
                std::to_string(opt_mismatches) + " optimum mismatches";
    return c;
}

// Criterion 8: the encoded cover instances preserve the optimum exactly.
Criterion criterion_reduction_fidelity() {
    Criterion c{"8 cover-encoding fidelity", true, ""};
    std::mt19937_64 rng(818283);
    int done = 0, mismatches = 0;
    while (done < 100) {
        SetCoverSource src;
        src.universe = 2 + static_cast<int>(rng() % 5);  // <= 6
        const int fam = 2 + static_cast<int>(rng() % 4);  // <= 5
        src.families.clear();
        for (int f = 0; f < fam; ++f) {
            std::vector<int> members;
            for (int e = 0; e < src.universe; ++e)
                if (rng() % 2 == 0) members.push_back(e);
            if (members.empty()) members.push_back(static_cast<int>(rng() % src.universe));
            src.families.push_back(std::move(members));
        }
        std::vector<char> covered(static_cast<size_t>(src.universe), 0);
        for (const auto& f : src.families)
            for (int e : f) covered[static_cast<size_t>(e)] = 1;
        bool coverable = true;
        for (char cv : covered) coverable = coverable && cv;
        if (!coverable) continue;
        ++done;
        const auto [inst, real] = gen_setcover_reduction(src, Rat(1), Rat(1, 10), Rat(1, 100));
        if (exact_opt(inst, real).opt_size != oracle::setcover_opt(src.universe, src.families))
            ++mismatches;
    }
    c.pass = mismatches == 0;
    c.details = "100 sources; " + std::to_string(mismatches) + " optimum mismatches";
    return c;
}

// Criterion 9: maximisation feasibility equals minimisation feasibility of
// the reflection, over every query subset.
Criterion criterion_reflection() {
    Criterion c{"9 value-negation reflection", true, ""};
    std::mt19937_64 rng(919293);
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        RandomMinSetParams params;
        params.n = 3 + static_cast<int>(rng() % 6);  // <= 8
        params.m = 2 + static_cast<int>(rng() % 3);
        const Instance inst = gen_random_minset(params, rng());
        const Realization real = sample_realization(inst, rng());
        const auto [refl, vr] = reflect_maxset(inst, real);
        for (unsigned mask = 0; mask < (1u << params.n); ++mask) {
            std::vector<int> q;
            for (int i = 0; i < params.n; ++i)
                if (mask & (1u << i)) q.push_back(i);
            if (maxset_feasible(inst, real, q) != oracle::minset_feasible(refl, vr, q)) ++mismatches;
        }
    }
    c.pass = mismatches == 0;
    c.details = "100 instances, all query subsets; " + std::to_string(mismatches) + " mismatches";
    return c;
}

// Criterion 10: byte-identical reports for a fixed seed, parallel or not.
Criterion criterion_determinism() {
    Criterion c{"10 determinism", true, ""};
    const Instance inst = gen_lb22(30, Rat(1, 2), Rat(1, 100));
    RunOptions opts;
    opts.trials = 2000;
    opts.base_seed = 424242;
    opts.with_opt = true;

    Report r1{{run_trials(inst, "disjoint", opts).aggregate}};
    Report r2{{run_trials(inst, "disjoint", opts).aggregate}};
    RunOptions serial = opts;
    serial.parallel = false;
    Report r3{{run_trials(inst, "disjoint", serial).aggregate}};

    auto csv_of = [](const Report& r, const std::string& path) {
        emit_csv(r, path);
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        std::remove(path.c_str());
        return ss.str();
    };
    const std::string c1 = csv_of(r1, "/tmp/uncover_acc_1.csv");
    const std::string c2 = csv_of(r2, "/tmp/uncover_acc_2.csv");
    const std::string c3 = csv_of(r3, "/tmp/uncover_acc_3.csv");
    const std::string j1 = report_to_json(r1).dump();
    const std::string j3 = report_to_json(r3).dump();
    c.pass = c1 == c2 && c1 == c3 && j1 == j3;
    c.details = std::string("two runs + serial reference: csv ") +
                (c1 == c2 && c1 == c3 ? "identical" : "DIFFER") + ", json " +
                (j1 == j3 ? "identical" : "DIFFER");
    return c;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Criterion> criteria;
    criteria.push_back(from_suite(run_suite("lb22"), "1 lower-bound family lb22"));
    criteria.push_back(from_suite(run_suite("lb21"), "2 lower-bound family lb21"));
    criteria.push_back(from_suite(run_suite("equivalence"), "3 feasibility equivalence"));
    criteria.push_back(from_suite(run_suite("greedy-bound"), "4 offline greedy bound"));
    criteria.push_back(from_suite(run_suite("alpha"), "5 alpha-approximation"));
    criteria.push_back(criterion_iteration_bounds());
    criteria.push_back(criterion_disjoint_charges());
    criteria.push_back(criterion_reduction_fidelity());
    criteria.push_back(criterion_reflection());
    criteria.push_back(criterion_determinism());

    bool all = true;
    for (const auto& c : criteria) {
        all = all && c.pass;
        std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.name << " — " << c.details
                  << "\n";
    }
    const auto t1 = std::chrono::steady_clock::now();
    std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << " ("
              << std::chrono::duration<double>(t1 - t0).count() << " s)\n";
    return all ? 0 : 1;
}
