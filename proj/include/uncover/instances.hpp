#pragma once

#include "uncover/model.hpp"

#include <nlohmann/json_fwd.hpp>

namespace uncover {

// The worked 8-interval, 4-set example used across the test suites, with
// its canonical realization (minimum set value 17/4).
std::pair<Instance, Realization> gen_demo();

// Adversarial two-set family "lb21": one trivial singleton at 13/20 versus
// n identically distributed (0,1) intervals drawing 7/10 with probability
// tau and eps otherwise.
Instance gen_lb21(int n, const Rat& tau, const Rat& eps);

// Adversarial two-set family "lb22": like lb21 but the first n-1 intervals
// draw 51/100 with probability tau, and the last interval always draws
// 7/10, so a single query to it settles the instance.
Instance gen_lb22(int n, const Rat& tau, const Rat& eps);

struct SetCoverSource {
    int universe = 0;
    std::vector<std::vector<int>> families;
};

// Encodes a set-cover instance as a selection instance: feasible query sets
// of size k correspond exactly to covers of size k. Returns the instance
// with its intended realization.
std::pair<Instance, Realization> gen_setcover_reduction(const SetCoverSource& source, const Rat& w_r,
                                                        const Rat& delta, const Rat& eps);

struct RandomMinSetParams {
    int n = 8;
    int m = 4;
    int max_set_size = 4;
    Rat width_lo = Rat(1, 2);
    Rat width_hi = Rat(3);
    bool allow_trivial = true;
    bool deterministic_rhs = false;  // emit kind minset_detrhs with random requirements
};
Instance gen_random_minset(const RandomMinSetParams& params, std::uint64_t seed);

struct RandomDisjointParams {
    int n = 8;
    int m = 3;
    Rat width_lo = Rat(1, 2);
    Rat width_hi = Rat(3);
};
Instance gen_random_disjoint(const RandomDisjointParams& params, std::uint64_t seed);

struct RandomMinCoverParams {
    int elements = 4;
    int multisets = 4;
    Rat coeff_hi = Rat(2);
    Rat rhs_hi = Rat(2);
};
Instance gen_random_mincover(const RandomMinCoverParams& params, std::uint64_t seed);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json realization_to_json(const Realization& real);
Realization realization_from_json(const nlohmann::json& j, const Instance& inst);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace uncover
