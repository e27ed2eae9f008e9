#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uncover {

// Exact rational arithmetic for all interval bounds, revealed values and
// derived quantities. Sampling snaps continuous draws to denominator 2^32,
// so every comparison made by the algorithms is exact and tolerance-free.
// Expression templates are off so values compose with std::min/std::max.
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

struct contract_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat make_rat(long long num, long long den = 1) {
    if (den == 0) throw schema_error("rational with zero denominator");
    return Rat(BigInt(num), BigInt(den));
}

// Serialized form is always "num/den" ("-3/4", "7/1").
inline std::string rat_to_string(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_from_string(const std::string& s);

inline double rat_to_double(const Rat& r) {
    return static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
}

}  // namespace uncover
