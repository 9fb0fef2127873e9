#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <functional>

#include "cyclo/coeff.hpp"

namespace cyclo {

inline Real pi_value() {
  precision_digits();
  return boost::math::constants::pi<Real>();
}

inline BC bc_exp(const BC& z) {
  Real e = exp(z.re);
  return BC(e * cos(z.im), e * sin(z.im));
}

// principal branch, imaginary part in (-pi, pi]
inline BC bc_log(const BC& z) { return BC(log(abs(z)), atan2(z.im, z.re)); }

inline BC bc_pow_int(BC z, long n) {
  if (n < 0) return BC(Real(1), Real(0)) / bc_pow_int(z, -n);
  BC r(Real(1), Real(0));
  while (n) {
    if (n & 1) r = r * z;
    z = z * z;
    n >>= 1;
  }
  return r;
}

// exp(2 pi i a / N)
inline BC root_of_unity(int N, long a) {
  a %= N;
  if (a < 0) a += N;
  Real t = Real(2) * pi_value() * Real(a) / Real(N);
  return BC(cos(t), sin(t));
}

inline Real zeta_int(int n) {
  precision_digits();
  return boost::math::zeta(Real(n));
}

inline Real digamma_real(const Real& x) { return boost::math::digamma(x); }

// Hurwitz zeta at integer s >= 2: zeta(s, x) = (-1)^s psi^(s-1)(x) / (s-1)!
inline Real hurwitz_zeta_int(int s, const Real& x) {
  if (s < 2) throw std::invalid_argument("hurwitz_zeta_int: s >= 2");
  Real p = boost::math::polygamma(s - 1, x);
  Real fact(1);
  for (int k = 2; k < s; ++k) fact *= k;
  return (s % 2 ? -p : p) / fact;
}

inline const Rat& bernoulli_rat(int n) {
  static std::vector<Rat> cache{Rat(1)};
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    // sum_{k=0}^{m} C(m+1,k) B_k = 0
    Rat acc(0), binom(1); // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      acc += binom * cache[k];
      binom = binom * Rat(m + 1 - k) / Rat(k + 1);
    }
    cache.push_back(-acc / binom);
  }
  return cache[n];
}

inline Real integrate_01(const std::function<Real(const Real&)>& f) {
  // Explicit min_complement: the default (min_value) overflows node-count
  // arithmetic for variable-precision mpfr.
  Real mc = pow(Real(10), -2 * precision_digits() - 20);
  boost::math::quadrature::tanh_sinh<Real> integrator(15, mc);
  return integrator.integrate(f, Real(0), Real(1));
}

inline BC integrate_01_bc(const std::function<BC(const Real&)>& f) {
  Real re = integrate_01([&](const Real& t) { return f(t).re; });
  Real im = integrate_01([&](const Real& t) { return f(t).im; });
  return BC(re, im);
}

} // namespace cyclo
