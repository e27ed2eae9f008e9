#pragma once

#include "uncover/rational.hpp"

#include <nlohmann/json_fwd.hpp>
#include <random>
#include <variant>

namespace uncover {

// Sampling law of a hidden value inside its interval. Support must lie
// strictly inside (lower, upper) for non-trivial intervals; a trivial
// interval carries the point mass at its single value.
struct UniformDist {};
struct PointMassDist {
    Rat value;
};
struct TwoPointDist {
    Rat lo_value;
    Rat lo_prob;
    Rat hi_value;
    Rat hi_prob;
};
struct SymmetricTriangularDist {};

class DistributionSpec {
public:
    using Variant = std::variant<UniformDist, PointMassDist, TwoPointDist, SymmetricTriangularDist>;

    DistributionSpec() : v_(UniformDist{}) {}
    explicit DistributionSpec(Variant v) : v_(std::move(v)) {}

    static DistributionSpec uniform() { return DistributionSpec(UniformDist{}); }
    static DistributionSpec point(Rat value) { return DistributionSpec(PointMassDist{std::move(value)}); }
    static DistributionSpec two_point(Rat lo, Rat p_lo, Rat hi, Rat p_hi);
    static DistributionSpec symmetric_triangular() { return DistributionSpec(SymmetricTriangularDist{}); }

    const Variant& variant() const { return v_; }

    // Pr[value >= (lower+upper)/2], in closed form.
    Rat tau(const Rat& lower, const Rat& upper) const;

    // Probability that the value does not exceed the interval center;
    // equals tau of the mirrored law on the reflected interval.
    Rat tau_inverse(const Rat& lower, const Rat& upper) const;

    // Law of -value on the interval (-upper, -lower).
    DistributionSpec mirrored() const;

    // Symmetric about the interval center (used for the multicover
    // balancing parameter).
    bool symmetric_about_center(const Rat& lower, const Rat& upper) const;

    // Deterministic draw; consumes a fixed number of engine words per call.
    Rat sample(const Rat& lower, const Rat& upper, std::mt19937_64& rng) const;

    // Checks support/probability invariants against the carrying interval.
    void validate(const Rat& lower, const Rat& upper) const;

    nlohmann::json to_json() const;
    static DistributionSpec from_json(const nlohmann::json& j, const std::string& where);

    bool operator==(const DistributionSpec& o) const;

private:
    Variant v_;
};

}  // namespace uncover
