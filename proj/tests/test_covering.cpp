#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uncover/covering.hpp"
#include "uncover/instances.hpp"

#include <random>

using namespace uncover;

namespace {

// Realizations on a coarse grid (eighths of the width) keep every
// breakpoint of the piecewise-linear searches far apart, so the dense-scan
// oracle below cannot straddle a piece.
Realization coarse_realization(const Instance& inst, std::mt19937_64& rng) {
    Realization real;
    for (const auto& iv : inst.intervals) {
        if (iv.trivial()) {
            real.values.push_back(iv.lower);
        } else {
            const long long k = 1 + static_cast<long long>(rng() % 7);
            real.values.push_back(iv.lower + iv.width() * Rat(k, 8));
        }
    }
    if (inst.kind != Kind::MinCover) {
        Rat best = real.set_value(inst, 0);
        for (size_t s = 1; s < inst.sets.size(); ++s)
            best = std::min(best, real.set_value(inst, static_cast<int>(s)));
        real.wstar = best;
    }
    return real;
}

struct DemoView {
    Instance inst;
    Realization real;
    CoveringProblem problem;
    DemoView()
        : inst(gen_demo().first),
          real(gen_demo().second),
          problem(CoveringProblem::minset_parametric(inst, &real, Rat(1))) {}
};

}  // namespace

TEST_CASE("scale factors on the demo instance") {
    const auto [inst, real] = gen_demo();
    CHECK(scale_factor_online(inst) == Rat(1));       // 2 / min width 2
    CHECK(scale_factor_offline(inst, real) == Rat(4));  // 1 / min coefficient 1/4
}

TEST_CASE("scale factor with unit widths and degenerate input") {
    Instance inst;
    inst.kind = Kind::MinSet;
    for (int i = 0; i < 3; ++i) {
        UncertaintyInterval iv;
        iv.id = i;
        iv.lower = i;
        iv.upper = i + 1;
        iv.dist = DistributionSpec::uniform();
        inst.intervals.push_back(iv);
    }
    inst.sets = {{0, 1, 2}};
    CHECK(scale_factor_online(inst) == Rat(2));

    Instance trivial;
    trivial.kind = Kind::MinSet;
    UncertaintyInterval iv;
    iv.id = 0;
    iv.lower = iv.upper = 1;
    iv.dist = DistributionSpec::point(Rat(1));
    trivial.intervals = {iv};
    trivial.sets = {{0}};
    CHECK_THROWS_AS(scale_factor_online(trivial), contract_error);
}

TEST_CASE("residuals, totals and active counts on the demo view") {
    DemoView v;
    CoverEval eval(v.problem, false);
    const Rat w(17, 4);
    CHECK(eval.residual(0, w) == Rat(11, 4));
    CHECK(eval.residual(1, w) == Rat(11, 4));
    CHECK(eval.residual(2, w) == Rat(7, 4));
    CHECK(eval.residual(3, w) == Rat(5, 4));
    CHECK(eval.residual_total(w) == Rat(17, 2));
    CHECK(eval.active_count(w) == 4);

    SUBCASE("the minimum initial lower limit has residual zero") {
        CHECK(eval.residual(0, Rat(3, 2)) == 0);
        CHECK(eval.active_count(Rat(3, 2)) == 0);
    }
    SUBCASE("a certifying query set zeroes everything") {
        for (int i : {0, 1, 4, 6}) eval.add(i);
        CHECK(eval.residual_total(w) == 0);
        CHECK(eval.active_count(w) == 0);
    }
}

TEST_CASE("greedy and optimistic values on the demo view") {
    DemoView v;
    CoverEval eval(v.problem, true);
    const Rat w(17, 4);
    const std::vector<int> empty;
    CHECK(greedy_gc(eval, empty, std::vector<int>{4}, w) == Rat(9, 2));
    CHECK(greedy_gc(eval, empty, empty, w) == 0);
    CHECK(optimistic_gc(eval, 7, w) == Rat(5, 4));
    CHECK(greedy_gc(eval, empty, std::vector<int>{7}, w) == Rat(1));
}

TEST_CASE("optimistic values of trivial intervals vanish") {
    Instance inst;
    inst.kind = Kind::MinSet;
    UncertaintyInterval t;
    t.id = 0;
    t.lower = t.upper = 1;
    t.dist = DistributionSpec::point(Rat(1));
    UncertaintyInterval u;
    u.id = 1;
    u.lower = 0;
    u.upper = 2;
    u.dist = DistributionSpec::uniform();
    inst.intervals = {t, u};
    inst.sets = {{0, 1}};
    const Realization real = sample_realization(inst, 2);
    const CoveringProblem p = CoveringProblem::minset_parametric(inst, &real, scale_factor_online(inst));
    CoverEval eval(p, false);
    CHECK(optimistic_gc(eval, 0, Rat(2)) == 0);
    CHECK(optimistic_gs(eval, 0, Rat(2)) == 0);
    CHECK_FALSE(p.unit_useful(0));
    CHECK(p.unit_useful(1));
}

TEST_CASE("a dominating cap counts every unsatisfied constraint the unit touches") {
    // three constraints share unit 0; residuals all in (0,1) after scaling
    Instance inst;
    inst.kind = Kind::MinSetDetRhs;
    for (int i = 0; i < 2; ++i) {
        UncertaintyInterval iv;
        iv.id = i;
        iv.lower = 0;
        iv.upper = 1;
        iv.dist = DistributionSpec::uniform();
        inst.intervals.push_back(iv);
    }
    inst.sets = {{0}, {0, 1}, {0, 1}};
    inst.rhs = {Rat(1, 4), Rat(1, 4), Rat(1, 8)};
    inst.validate();
    const Realization real = sample_realization(inst, 6);
    const Rat gamma = scale_factor_online(inst);  // 2
    const CoveringProblem p = CoveringProblem::minset_fixed(inst, &real, gamma, inst.rhs);
    CoverEval eval(p, false);
    for (int s = 0; s < 3; ++s) {
        CHECK(eval.residual(s) > 0);
        CHECK(eval.residual(s) < 1);
    }
    CHECK(optimistic_gs(eval, 0, std::nullopt) == 3);
    CHECK(optimistic_gs(eval, 1, std::nullopt) == 2);
}

TEST_CASE("residual totals are non-increasing in the query set") {
    DemoView v;
    CoverEval eval(v.problem, false);
    const Rat w(17, 4);
    Rat prev = eval.residual_total(w);
    for (int u : {3, 0, 7, 1, 4}) {
        eval.add(u);
        const Rat cur = eval.residual_total(w);
        REQUIRE(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("greedy values over unrevealed units are rejected outside offline use") {
    DemoView v;
    CoverEval eval(v.problem, false);
    const std::vector<int> empty;
    CHECK_THROWS_AS(greedy_gc(eval, empty, std::vector<int>{4}, Rat(17, 4)), contract_error);
    eval.add(4);
    CHECK(greedy_gc(eval, empty, std::vector<int>{4}, Rat(17, 4)) == Rat(9, 2));
}

TEST_CASE("chain identity, optimism and the half-width property") {
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 60; ++t) {
        RandomMinSetParams params;
        params.n = 4 + static_cast<int>(rng() % 5);
        params.m = 2 + static_cast<int>(rng() % 4);
        const Instance inst = gen_random_minset(params, rng());
        const Realization real = coarse_realization(inst, rng);
        const Rat gamma = scale_factor_online(inst);
        const CoveringProblem p = CoveringProblem::minset_parametric(inst, &real, gamma);
        CoverEval eval(p, true);
        std::vector<int> q, rest;
        for (int i = 0; i < params.n; ++i)
            (rng() % 3 == 0 ? q : rest).push_back(i);
        for (int i : q) eval.add(i);
        if (rest.size() < 2) continue;
        const Rat w = *real.wstar + Rat(static_cast<long long>(rng() % 5) - 2, 4);

        // chain identity over a random split of a random group
        std::vector<int> g1(rest.begin(), rest.begin() + static_cast<long>(rest.size() / 2));
        std::vector<int> g2(rest.begin() + static_cast<long>(rest.size() / 2), rest.end());
        std::vector<int> whole = rest;
        std::vector<int> q_and_g1 = q;
        q_and_g1.insert(q_and_g1.end(), g1.begin(), g1.end());
        REQUIRE(greedy_gc(eval, q, whole, w) ==
                greedy_gc(eval, q, g1, w) + greedy_gc(eval, q_and_g1, g2, w));
        REQUIRE(greedy_gs(eval, q, whole, w) ==
                greedy_gs(eval, q, g1, w) + greedy_gs(eval, q_and_g1, g2, w));

        for (int u : rest) {
            const std::vector<int> single{u};
            // optimism
            REQUIRE(optimistic_gc(eval, u, w) >= greedy_gc(eval, q, single, w));
            REQUIRE(optimistic_gs(eval, u, w) >= greedy_gs(eval, q, single, w));
            // half-width: the real value recovers at least half the promise
            const auto& iv = inst.intervals[static_cast<size_t>(u)];
            if (!iv.trivial() && real.values[static_cast<size_t>(u)] - iv.lower >= iv.width() / 2) {
                REQUIRE(greedy_gc(eval, q, single, w) * 2 >= optimistic_gc(eval, u, w));
                bool all_small = true;
                for (int s = 0; s < p.num_cons; ++s) all_small = all_small && eval.residual(s, w) < 1;
                if (all_small)
                    REQUIRE(greedy_gs(eval, q, single, w) == optimistic_gs(eval, u, w));
            }
        }
    }
}

TEST_CASE("optimistic values and active counts are monotone in w") {
    std::mt19937_64 rng(777);
    RandomMinSetParams params;
    params.n = 6;
    params.m = 3;
    const Instance inst = gen_random_minset(params, 99);
    const Realization real = coarse_realization(inst, rng);
    const CoveringProblem p = CoveringProblem::minset_parametric(inst, &real, scale_factor_online(inst));
    CoverEval eval(p, false);
    eval.add(0);
    for (int u = 1; u < 6; ++u) {
        if (!p.unit_useful(u)) continue;
        Rat prev_gc(-1);
        int prev_a = -1;
        for (int k = 0; k <= 40; ++k) {
            const Rat w = Rat(k, 4);
            const Rat cur = optimistic_gc(eval, u, w);
            const int a = eval.active_count(w);
            if (k > 0) {
                REQUIRE(cur >= prev_gc);
                REQUIRE(a >= prev_a);
            }
            prev_gc = cur;
            prev_a = a;
        }
    }
}

TEST_CASE("gs equals a brute-force recount when all residuals are below one") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 30; ++t) {
        RandomMinSetParams params;
        params.n = 5;
        params.m = 3;
        params.deterministic_rhs = true;
        Instance inst = gen_random_minset(params, rng());
        // shrink requirements below one scaled unit
        const Rat gamma = scale_factor_online(inst);
        for (auto& b : inst.rhs) b = std::min(b, Rat(1, 2) / gamma);
        const Realization real = coarse_realization(inst, rng);
        const CoveringProblem p = CoveringProblem::minset_fixed(inst, &real, gamma, inst.rhs);
        CoverEval eval(p, true);
        const std::vector<int> empty;
        for (int u = 0; u < 5; ++u) {
            long recount = 0;
            for (int s = 0; s < p.num_cons; ++s) {
                if (eval.residual(s) <= 0) continue;
                Rat covered = 0;
                for (const auto& term : p.unit_terms[static_cast<size_t>(u)])
                    if (term.cons == s) covered += term.coeff;
                if (covered >= eval.residual(s)) ++recount;
            }
            REQUIRE(greedy_gs(eval, empty, std::vector<int>{u}, std::nullopt) == recount);
        }
    }
}

namespace {

// Dense scan reference for the minimum-w search.
std::optional<Rat> grid_scan(const CoverEval& eval, GreedyKind kind, const Rat& d, const Rat& lo,
                             const Rat& hi, bool hi_open) {
    const Rat step(1, 1024);
    for (Rat w = lo; hi_open ? w < hi : w <= hi; w += step) {
        Rat best(0);
        bool any = false;
        for (int u = 0; u < eval.problem().num_units; ++u) {
            if (eval.in_q(u) || !eval.problem().unit_useful(u)) continue;
            const Rat v = kind == GreedyKind::Gc ? optimistic_gc(eval, u, w)
                                                 : Rat(optimistic_gs(eval, u, w));
            if (!any || v > best) best = v;
            any = true;
        }
        if (any && best >= d) return w;
    }
    return std::nullopt;
}

bool reaches(const CoverEval& eval, GreedyKind kind, const Rat& d, const Rat& w) {
    for (int u = 0; u < eval.problem().num_units; ++u) {
        if (eval.in_q(u) || !eval.problem().unit_useful(u)) continue;
        const Rat v =
            kind == GreedyKind::Gc ? optimistic_gc(eval, u, w) : Rat(optimistic_gs(eval, u, w));
        if (v >= d) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("minimum-w search: degenerate bounds and unreachable thresholds") {
    DemoView v;
    CoverEval eval(v.problem, false);
    const Rat w(17, 4);
    SUBCASE("single-point range returns immediately when reachable") {
        const auto hit = min_w_reaching(eval, GreedyKind::Gc, Rat(1), w, w, false);
        REQUIRE(hit.has_value());
        CHECK(hit->w == w);
        // units 3 and 4 tie at optimistic value 9/2; lowest index wins
        CHECK(hit->unit == 3);
    }
    SUBCASE("thresholds above the global cap are unreachable") {
        // optimistic gc is at most m * gamma * max width = 4 * 1 * 4
        const auto hit = min_w_reaching(eval, GreedyKind::Gc, Rat(17), Rat(0), Rat(100), false);
        CHECK_FALSE(hit.has_value());
    }
    SUBCASE("empty candidate range") {
        CHECK_FALSE(min_w_reaching(eval, GreedyKind::Gs, Rat(1), w, w, true).has_value());
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(min_w_reaching(eval, GreedyKind::Gc, Rat(0), Rat(0), w, false),
                        contract_error);
        const auto [inst, real] = gen_demo();
        const CoveringProblem fixed =
            CoveringProblem::minset_fixed(inst, &real, Rat(1), std::vector<Rat>(4, Rat(1)));
        CoverEval feval(fixed, false);
        CHECK_THROWS_AS(min_w_reaching(feval, GreedyKind::Gc, Rat(1), Rat(0), w, false),
                        contract_error);
    }
}

TEST_CASE("minimum-w search agrees with a dense scan") {
    std::mt19937_64 rng(90210);
    const Rat tick20(1, 1 << 20);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        RandomMinSetParams params;
        params.n = 4 + static_cast<int>(rng() % 5);  // <= 8
        params.m = 2 + static_cast<int>(rng() % 4);
        const Instance inst = gen_random_minset(params, rng());
        const Realization real = coarse_realization(inst, rng);
        const Rat gamma = scale_factor_online(inst);
        const CoveringProblem p = CoveringProblem::minset_parametric(inst, &real, gamma);
        CoverEval eval(p, false);
        for (int i = 0; i < params.n; ++i)
            if (rng() % 3 == 0) eval.add(i);

        Rat lo = inst.set_lower(0), hi = inst.set_upper(0);
        for (int s = 1; s < params.m; ++s) {
            lo = std::min(lo, inst.set_lower(s));
            hi = std::min(hi, inst.set_upper(s));
        }
        for (GreedyKind kind : {GreedyKind::Gc, GreedyKind::Gs}) {
            const bool open = kind == GreedyKind::Gs;
            const Rat d = kind == GreedyKind::Gc ? Rat(1 + static_cast<long long>(rng() % 4), 2)
                                                 : Rat(1 + static_cast<long long>(rng() % 2));
            const auto mine = min_w_reaching(eval, kind, d, lo, hi, open);
            const auto grid = grid_scan(eval, kind, d, lo, hi, open);
            ++checked;
            if (grid.has_value()) {
                REQUIRE(mine.has_value());
                REQUIRE(mine->w <= *grid);
                REQUIRE(*grid - mine->w <= Rat(1, 1024));
            }
            if (mine.has_value()) {
                REQUIRE(reaches(eval, kind, d, mine->w));
                if (mine->w - tick20 >= lo) REQUIRE_FALSE(reaches(eval, kind, d, mine->w - tick20));
                // the reported unit is the argmax at the returned w
                Rat best(-1);
                int arg = -1;
                for (int u = 0; u < p.num_units; ++u) {
                    if (eval.in_q(u) || !p.unit_useful(u)) continue;
                    const Rat v = kind == GreedyKind::Gc ? optimistic_gc(eval, u, mine->w)
                                                         : Rat(optimistic_gs(eval, u, mine->w));
                    if (v > best) {
                        best = v;
                        arg = u;
                    }
                }
                REQUIRE(mine->unit == arg);
            }
        }
    }
    CHECK(checked == 100);
}
