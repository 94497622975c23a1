#ifndef MATFREE_NUMERIC_HPP
#define MATFREE_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace matfree {

// Exact scalar used by the default numeric profile. All combinatorial
// identities in this library hold coefficient-by-coefficient over the
// rationals, so the exact profile needs no tolerances at all. Expression
// templates are disabled so arithmetic yields plain values, as the generic
// code expects of any scalar type.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

template <class T>
struct numeric_profile;

template <>
struct numeric_profile<Rational> {
  static constexpr bool exact = true;
  static Rational from_fraction(long long p, long long q) { return Rational(p, q); }
  static double to_double(const Rational& x) { return x.template convert_to<double>(); }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static const char* name() { return "rational"; }
};

template <>
struct numeric_profile<double> {
  static constexpr bool exact = false;
  static double from_fraction(long long p, long long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static double to_double(double x) { return x; }
  // Relative comparison at 1e-12, the float-profile contract.
  static bool equal(double a, double b) {
    double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-12 * scale;
  }
  static const char* name() { return "f64"; }
};

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

// Largest integer <= num/den for a nonnegative rational.
inline long long rational_floor(const Rational& x) {
  if (x < 0) throw std::invalid_argument("rational_floor: negative input");
  BigInt q = numerator(x) / denominator(x);
  return q.template convert_to<long long>();
}

// Parses "p/q", "p", or (for the float profile) a decimal literal.
template <class T>
T parse_scalar(const std::string& s);

template <>
inline Rational parse_scalar<Rational>(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      // Allow plain integers only; decimals would silently lose exactness.
      if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
          s.find('E') != std::string::npos)
        throw std::invalid_argument("decimal literal in rational profile: " + s);
      return Rational(BigInt(s));
    }
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rational(p, q);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("cannot parse rational: " + s);
  }
}

template <>
inline double parse_scalar<double>(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    double p = std::stod(s.substr(0, slash));
    double q = std::stod(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + s);
    return p / q;
  }
  return std::stod(s);
}

template <class T>
std::string scalar_to_string(const T& x);

template <>
inline std::string scalar_to_string<Rational>(const Rational& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

template <>
inline std::string scalar_to_string<double>(const double& x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace matfree

#endif  // MATFREE_NUMERIC_HPP
