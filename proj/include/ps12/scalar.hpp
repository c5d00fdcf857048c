#ifndef PS12_SCALAR_HPP
#define PS12_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>
#include <cstdint>
#include <string>
#include <stdexcept>

namespace ps12 {

/// Exact scalar used by the oracle paths. GMP-backed rational, always canonical.
using Rational = boost::multiprecision::mpq_rational;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double fraction(long long n, long long d) { return double(n) / double(d); }
    static double to_double(double x) { return x; }
    static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational fraction(long long n, long long d) { return Rational(n) / d; }
    static double to_double(const Rational& x) { return x.template convert_to<double>(); }
    static bool is_zero(const Rational& x) { return x == 0; }
};

/// Shorthand for building n/d in the active arithmetic mode.
template <class S>
S frac(long long n, long long d = 1) {
    return ScalarTraits<S>::fraction(n, d);
}

template <class S>
double to_double(const S& x) {
    return ScalarTraits<S>::to_double(x);
}

/// Parses "p/q" or plain integer/decimal strings into the scalar type.
inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return Rational(s.substr(0, slash)) / Rational(s.substr(slash + 1));
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(s);
    // decimal literal: scale out the fractional part
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    Rational den = 1;
    for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rational(digits) / den;
}

}  // namespace ps12

#endif
