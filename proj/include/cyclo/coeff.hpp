#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdlib>
#include <string>

namespace cyclo {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;
using Real = boost::multiprecision::mpfr_float; // variable precision, set globally

// Single global working precision for all complex/floating computation.
// A few guard digits are kept on top of the requested decimal digits.
inline int& precision_digits_ref() {
  static int digits = [] {
    if (const char* env = std::getenv("CYCLO_PRECISION")) {
      int d = std::atoi(env);
      if (d >= 16) return d;
    }
    return 40;
  }();
  return digits;
}

inline void apply_precision() { Real::default_precision(precision_digits_ref() + 10); }

inline int precision_digits() {
  static bool applied = [] {
    apply_precision();
    return true;
  }();
  (void)applied;
  return precision_digits_ref();
}

inline void set_precision(int digits) {
  precision_digits(); // force first-time init ordering
  precision_digits_ref() = digits;
  apply_precision();
}

// Relative tolerance separating representational precision from acceptance
// thresholds: tau_rel = 10^-(digits-8).
inline Real rel_tol() {
  precision_digits();
  return pow(Real(10), -(precision_digits_ref() - 8));
}

struct BC { // complex value over Real
  Real re, im;
  BC() : re(0), im(0) {}
  BC(int v) : re(v), im(0) {}
  BC(const Real& r) : re(r), im(0) {}
  BC(const Real& r, const Real& i) : re(r), im(i) {}
  explicit BC(const Rat& q) : re(Real(q)), im(0) {}

  BC& operator+=(const BC& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  BC& operator-=(const BC& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  BC& operator*=(const BC& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  BC& operator/=(const BC& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
};

inline BC operator+(BC a, const BC& b) { return a += b; }
inline BC operator-(BC a, const BC& b) { return a -= b; }
inline BC operator*(BC a, const BC& b) { return a *= b; }
inline BC operator/(BC a, const BC& b) { return a /= b; }
inline BC operator-(const BC& a) { return BC(-a.re, -a.im); }
inline bool operator==(const BC& a, const BC& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const BC& a, const BC& b) { return !(a == b); }

inline Real abs2(const BC& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const BC& a) { return sqrt(abs2(a)); }
inline BC conj(const BC& a) { return BC(a.re, -a.im); }

// Coefficient kind adapters so series code works over Rat and BC uniformly.
template <class K>
K from_rat(const Rat& q);
template <>
inline Rat from_rat<Rat>(const Rat& q) {
  return q;
}
template <>
inline BC from_rat<BC>(const Rat& q) {
  precision_digits();
  return BC(q);
}

template <class K>
K coeff_zero() {
  return K(0);
}

inline bool is_exact_zero(const Rat& x) { return x.is_zero(); }
inline bool is_exact_zero(const BC& x) { return x.re.is_zero() && x.im.is_zero(); }

// Magnitude used for residual norms: |.| for BC, |p/q| as Real for Rat.
inline Real coeff_abs(const Rat& x) {
  precision_digits();
  return abs(Real(x));
}
inline Real coeff_abs(const BC& x) { return abs(x); }

template <class K>
struct CoeffTraits;
template <>
struct CoeffTraits<Rat> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
};
template <>
struct CoeffTraits<BC> {
  static constexpr bool exact = false;
  static constexpr const char* name = "complex";
};

} // namespace cyclo
