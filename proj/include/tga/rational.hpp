#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace tga {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed documents / structurally invalid inputs.  CLI exit code 2.
struct SchemaError : Error {
  using Error::Error;
};

// Violated operation preconditions (wrong tier, size guard, ...).  CLI exit code 3.
struct PreconditionError : Error {
  using Error::Error;
};

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// Nearest integer below; exact floor for negatives.
inline Int rat_floor(const Rat& r) {
  Int q = rat_num(r) / rat_den(r);
  if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

// Fractional part in [0,1).
inline Rat frac_part(const Rat& r) { return r - Rat(rat_floor(r)); }

inline std::string to_string(const Int& n) { return n.str(); }

// Canonical "p/q" (or "p" when integral).
inline std::string to_string(const Rat& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

// Accepts "p", "-p", "p/q" with nonzero q; sign may sit on either component.
inline Rat parse_rational(const std::string& text) {
  auto bad = [&] { return SchemaError("not a rational: '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw bad();
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw bad();
  }
}

// Exact square root of a perfect-square nonnegative rational.
inline Rat exact_sqrt(const Rat& r) {
  if (r < 0) throw PreconditionError("exact_sqrt of a negative rational");
  const Int n = boost::multiprecision::sqrt(rat_num(r));
  const Int d = boost::multiprecision::sqrt(rat_den(r));
  if (n * n != rat_num(r) || d * d != rat_den(r))
    throw PreconditionError("exact_sqrt: " + to_string(r) + " is not a perfect square");
  return Rat(n, d);
}

}  // namespace tga
