#pragma once

#include "tga/rational.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace tga {

// Exact complex scalar with rational real/imaginary parts.  Enough for the
// exact-arithmetic correspondence mode: fourth roots of unity (and any
// unit-modulus Gaussian rational) are closed under the module operations.
struct GaussianRational {
  Rat re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rat r) : re(std::move(r)), im(0) {}
  GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int n) : re(n), im(0) {}

  bool operator==(const GaussianRational&) const = default;

  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
};

inline std::string to_string(const GaussianRational& z) {
  return to_string(z.re) + (z.im < 0 ? "-" : "+") + to_string(z.im < 0 ? Rat(-z.im) : z.im) + "i";
}

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
  static constexpr bool exact = false;
  using Real = double;
};

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool exact = true;
  using Real = Rat;
};

inline std::complex<double> scalar_conj(const std::complex<double>& z) { return std::conj(z); }
inline GaussianRational scalar_conj(const GaussianRational& z) { return {z.re, -z.im}; }

inline double scalar_abs_sq(const std::complex<double>& z) { return std::norm(z); }
inline Rat scalar_abs_sq(const GaussianRational& z) { return z.re * z.re + z.im * z.im; }

inline double scalar_re(const std::complex<double>& z) { return z.real(); }
inline Rat scalar_re(const GaussianRational& z) { return z.re; }

inline double scalar_im(const std::complex<double>& z) { return z.imag(); }
inline Rat scalar_im(const GaussianRational& z) { return z.im; }

template <class K>
K scalar_from_rat(const Rat& r) {
  if constexpr (ScalarTraits<K>::exact)
    return GaussianRational{r};
  else
    return std::complex<double>(static_cast<double>(r), 0.0);
}

// Distance used by the identity checks: exact scalars compare exactly.
template <class K>
bool scalar_close(const K& a, const K& b, double tol) {
  if constexpr (ScalarTraits<K>::exact)
    return a == b;
  else
    return std::abs(a - b) <= tol;
}

template <class K>
bool scalar_is_unit(const K& z, double tol) {
  if constexpr (ScalarTraits<K>::exact)
    return scalar_abs_sq(z) == 1;
  else
    return std::abs(std::abs(z) - 1.0) <= tol;
}

// sqrt of a nonnegative real scalar (imaginary part must vanish).
template <class K>
K scalar_sqrt(const K& z, double tol) {
  if constexpr (ScalarTraits<K>::exact) {
    if (z.im != 0 || z.re < 0)
      throw PreconditionError("scalar_sqrt: value is not a nonnegative rational");
    return GaussianRational{exact_sqrt(z.re)};
  } else {
    if (std::abs(z.imag()) > tol || z.real() < -tol)
      throw PreconditionError("scalar_sqrt: value is not nonnegative real");
    return std::complex<double>(std::sqrt(std::max(0.0, z.real())), 0.0);
  }
}

// exp(2*pi*i*turns).  Exact mode admits quarter turns only.
template <class K>
K unit_phase(const Rat& turns) {
  if constexpr (ScalarTraits<K>::exact) {
    Rat t = frac_part(turns);
    if (t == 0) return GaussianRational{Rat(1)};
    if (t == Rat(1, 4)) return GaussianRational{Rat(0), Rat(1)};
    if (t == Rat(1, 2)) return GaussianRational{Rat(-1)};
    if (t == Rat(3, 4)) return GaussianRational{Rat(0), Rat(-1)};
    throw PreconditionError("exact scalars support quarter turns only, got " + to_string(turns));
  } else {
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(turns));
  }
}

// Accepted spellings: "1", "-1", "i", "-i", "exp(2pi i * p/q)".
template <class K>
K parse_unit(const std::string& text) {
  if (text == "1") return unit_phase<K>(Rat(0));
  if (text == "-1") return unit_phase<K>(Rat(1, 2));
  if (text == "i") return unit_phase<K>(Rat(1, 4));
  if (text == "-i") return unit_phase<K>(Rat(3, 4));
  const std::string prefix = "exp(2pi i * ";
  if (text.size() > prefix.size() + 1 && text.compare(0, prefix.size(), prefix) == 0 &&
      text.back() == ')')
    return unit_phase<K>(parse_rational(text.substr(prefix.size(), text.size() - prefix.size() - 1)));
  throw SchemaError("not a unit complex value: '" + text + "'");
}

}  // namespace tga
