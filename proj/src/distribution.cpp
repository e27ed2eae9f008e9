#include "uncover/distribution.hpp"

#include <nlohmann/json.hpp>

namespace uncover {

namespace {

constexpr std::uint64_t kDenomBits = 32;
const BigInt kDenom = BigInt(1) << kDenomBits;

// Uniform draw of k/2^32 with k in [1, 2^32-1]; strictly inside (0,1).
Rat unit_open_uniform(std::mt19937_64& rng) {
    for (;;) {
        const std::uint64_t k = rng() >> 32;
        if (k != 0) return Rat(BigInt(k), kDenom);
    }
}

}  // namespace

DistributionSpec DistributionSpec::two_point(Rat lo, Rat p_lo, Rat hi, Rat p_hi) {
    return DistributionSpec(TwoPointDist{std::move(lo), std::move(p_lo), std::move(hi), std::move(p_hi)});
}

Rat DistributionSpec::tau(const Rat& lower, const Rat& upper) const {
    const Rat center = (lower + upper) / 2;
    return std::visit(
        [&](const auto& d) -> Rat {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformDist>) {
                return Rat(1, 2);
            } else if constexpr (std::is_same_v<T, PointMassDist>) {
                return d.value >= center ? Rat(1) : Rat(0);
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                Rat p = 0;
                if (d.lo_value >= center) p += d.lo_prob;
                if (d.hi_value >= center) p += d.hi_prob;
                return p;
            } else {
                return Rat(1, 2);  // symmetric triangular
            }
        },
        v_);
}

Rat DistributionSpec::tau_inverse(const Rat& lower, const Rat& upper) const {
    const Rat center = (lower + upper) / 2;
    return std::visit(
        [&](const auto& d) -> Rat {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformDist>) {
                return Rat(1, 2);
            } else if constexpr (std::is_same_v<T, PointMassDist>) {
                return d.value <= center ? Rat(1) : Rat(0);
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                Rat p = 0;
                if (d.lo_value <= center) p += d.lo_prob;
                if (d.hi_value <= center) p += d.hi_prob;
                return p;
            } else {
                return Rat(1, 2);
            }
        },
        v_);
}

DistributionSpec DistributionSpec::mirrored() const {
    return std::visit(
        [&](const auto& d) -> DistributionSpec {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMassDist>) {
                return point(-d.value);
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                return two_point(-d.hi_value, d.hi_prob, -d.lo_value, d.lo_prob);
            } else {
                return DistributionSpec(T{});
            }
        },
        v_);
}

bool DistributionSpec::symmetric_about_center(const Rat& lower, const Rat& upper) const {
    const Rat center = (lower + upper) / 2;
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMassDist>) {
                return d.value == center;
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                return d.lo_prob == d.hi_prob && d.lo_value + d.hi_value == lower + upper;
            } else {
                return true;
            }
        },
        v_);
}

Rat DistributionSpec::sample(const Rat& lower, const Rat& upper, std::mt19937_64& rng) const {
    return std::visit(
        [&](const auto& d) -> Rat {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformDist>) {
                return lower + unit_open_uniform(rng) * (upper - lower);
            } else if constexpr (std::is_same_v<T, PointMassDist>) {
                return d.value;
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                const Rat u = Rat(BigInt(rng() >> 32), kDenom);
                return u < d.lo_prob ? d.lo_value : d.hi_value;
            } else {
                // Mean of two open-uniform draws: triangular, symmetric.
                const Rat u = (unit_open_uniform(rng) + unit_open_uniform(rng)) / 2;
                return lower + u * (upper - lower);
            }
        },
        v_);
}

void DistributionSpec::validate(const Rat& lower, const Rat& upper) const {
    const bool trivial = lower == upper;
    auto in_support = [&](const Rat& v) {
        if (trivial) return v == lower;
        return lower < v && v < upper;
    };
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMassDist>) {
                if (!in_support(d.value)) throw schema_error("point mass outside interval support");
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                if (d.lo_prob < 0 || d.hi_prob < 0 || d.lo_prob + d.hi_prob != 1)
                    throw schema_error("two-point probabilities must be nonnegative and sum to 1");
                if (!in_support(d.lo_value) || !in_support(d.hi_value))
                    throw schema_error("two-point support outside interval");
            } else {
                if (trivial) throw schema_error("continuous distribution on a trivial interval");
            }
        },
        v_);
}

nlohmann::json DistributionSpec::to_json() const {
    using nlohmann::json;
    return std::visit(
        [&](const auto& d) -> json {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UniformDist>) {
                return json{{"type", "uniform"}};
            } else if constexpr (std::is_same_v<T, PointMassDist>) {
                return json{{"type", "point"}, {"value", rat_to_string(d.value)}};
            } else if constexpr (std::is_same_v<T, TwoPointDist>) {
                return json{{"type", "two_point"},
                            {"lo", rat_to_string(d.lo_value)},
                            {"p_lo", rat_to_string(d.lo_prob)},
                            {"hi", rat_to_string(d.hi_value)},
                            {"p_hi", rat_to_string(d.hi_prob)}};
            } else {
                return json{{"type", "symtri"}};
            }
        },
        v_);
}

DistributionSpec DistributionSpec::from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type"))
        throw schema_error(where + ": distribution needs a 'type' field");
    const std::string type = j.at("type").get<std::string>();
    auto rat_field = [&](const char* name) {
        if (!j.contains(name)) throw schema_error(where + ": missing field '" + name + "'");
        return rat_from_string(j.at(name).get<std::string>());
    };
    if (type == "uniform") return uniform();
    if (type == "point") return point(rat_field("value"));
    if (type == "two_point")
        return two_point(rat_field("lo"), rat_field("p_lo"), rat_field("hi"), rat_field("p_hi"));
    if (type == "symtri") return symmetric_triangular();
    throw schema_error(where + ": unknown distribution type '" + type + "'");
}

bool DistributionSpec::operator==(const DistributionSpec& o) const {
    if (v_.index() != o.v_.index()) return false;
    if (const auto* p = std::get_if<PointMassDist>(&v_))
        return p->value == std::get<PointMassDist>(o.v_).value;
    if (const auto* t = std::get_if<TwoPointDist>(&v_)) {
        const auto& u = std::get<TwoPointDist>(o.v_);
        return t->lo_value == u.lo_value && t->lo_prob == u.lo_prob && t->hi_value == u.hi_value &&
               t->hi_prob == u.hi_prob;
    }
    return true;
}

}  // namespace uncover
