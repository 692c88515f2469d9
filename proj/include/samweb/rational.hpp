#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>

#include <string>

namespace samweb {

// Exact rational arithmetic for the symbolic layer. cpp_rational keeps values
// in lowest terms with positive denominator, which is exactly the invariant
// the expression core needs.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline std::size_t hash_value_of(const Rational& q) {
    std::size_t seed = boost::hash<Integer>()(numerator(q));
    boost::hash_combine(seed, boost::hash<Integer>()(denominator(q)));
    return seed;
}

// floor of p/q as an Integer (toward -inf).
inline Integer rational_floor(const Rational& q) {
    Integer n = numerator(q), d = denominator(q);
    Integer quot = n / d;
    if (n < 0 && quot * d != n) --quot;
    return quot;
}

// Exact q-th root of a nonnegative integer if it exists.
bool exact_root(const Integer& value, unsigned q, Integer& root);

} // namespace samweb
