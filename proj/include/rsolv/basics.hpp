#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace rsolv {

// All group exponents and matrix entries are arbitrary-precision integers;
// collection and lattice reductions overflow machine words even on small inputs.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Floor division / least nonnegative residue. cpp_int's operator/ truncates
// toward zero, which is the wrong convention for coset reduction.
inline Int fdiv(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int fmod(const Int& a, const Int& b) {
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

// xgcd(a, b) -> (g, s, t) with s*a + t*b = g, g >= 0.
struct Xgcd {
  Int g, s, t;
};
inline Xgcd xgcd(Int a, Int b) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b; b = r;
    Int s2 = s0 - q * s1; s0 = s1; s1 = s2;
    Int t2 = t0 - q * t1; t0 = t1; t1 = t2;
  }
  if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
  return {a, s0, t0};
}

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int iabs(const Int& a) { return a < 0 ? Int(-a) : a; }

// Input that does not parse or does not resolve.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

// A presentation failed its build-time checks (overlap tests, weights, ...).
struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& m) : std::runtime_error(m) {}
};

// An operation's stated precondition does not hold for the given arguments.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace rsolv
