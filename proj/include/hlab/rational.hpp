#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hlab {

using Rational = boost::multiprecision::cpp_rational;

// Best rational approximation with denominator <= max_den (continued
// fractions); nullopt unless it lies within tol of x.
std::optional<Rational> to_rational(double x, double tol = 1e-12, long long max_den = 65536);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline std::string to_text(const Rational& r) { return r.str(); }
Rational rational_from_text(const std::string& s);

}  // namespace hlab
