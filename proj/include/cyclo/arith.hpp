#pragma once

#include <numeric>

#include "cyclo/numerics.hpp"

namespace cyclo {

inline int euler_phi(int n) {
  int r = n;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

inline long long pow_mod(long long b, long long e, long long m) {
  long long r = 1 % m;
  b %= m;
  for (; e; e >>= 1, b = b * b % m)
    if (e & 1) r = r * b % m;
  return r;
}

inline int mul_order(long long g, long long m) {
  long long v = g % m;
  int k = 1;
  while (v != 1 % m) {
    v = v * g % m;
    if (++k > m) throw std::logic_error("mul_order: not a unit");
  }
  return k;
}

// Dirichlet character mod N with exact root-of-unity values: chi(k) =
// zeta_order^{e[k]} on units, e[k] = -1 off units.
struct DirichletCharacter {
  int N = 1;
  int order = 1;
  std::vector<int> e;
  int conductor = 1;
  int parity = 1; // chi(-1)

  bool is_trivial() const { return order == 1; }
  bool is_even() const { return parity == 1; }

  int exponent(long long k) const {
    int v = e[((k % N) + N) % N];
    return v;
  }
  BC value(long long k) const {
    int v = exponent(k);
    return v < 0 ? BC(0) : root_of_unity(order, v);
  }
  // value of the primitive character mod conductor inducing chi
  BC primitive_value(long long k) const {
    long long r = ((k % conductor) + conductor) % conductor;
    if (std::gcd(r, static_cast<long long>(conductor)) != 1) return BC(0);
    while (std::gcd(r, static_cast<long long>(N)) != 1) r += conductor;
    return value(r);
  }
  int primitive_exponent(long long k) const {
    long long r = ((k % conductor) + conductor) % conductor;
    if (std::gcd(r, static_cast<long long>(conductor)) != 1) return -1;
    while (std::gcd(r, static_cast<long long>(N)) != 1) r += conductor;
    return exponent(r);
  }
};

namespace detail {

// cyclic decomposition of (Z/NZ)^x: list of (generator, order)
inline std::vector<std::pair<long long, int>> unit_group_generators(int N) {
  std::vector<std::pair<long long, int>> gens;
  std::vector<std::pair<int, int>> pp; // prime power factors
  int n = N;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      int q = 1;
      while (n % p == 0) n /= p, q *= p;
      pp.push_back({p, q});
    }
  if (n > 1) pp.push_back({n, n});
  for (auto [p, q] : pp) {
    // lift a generator of (Z/q)^x to one that is 1 mod N/q
    auto lift = [&](long long g) {
      long long m = N / q;
      // CRT: x = g mod q, x = 1 mod m
      for (long long x = g; ; x += q)
        if (x % m == 1 % m) return x % N;
    };
    if (p == 2) {
      if (q == 2) continue;
      gens.push_back({lift(q - 1), 2});
      if (q >= 8) gens.push_back({lift(3), q / 4});
    } else {
      long long g = 2;
      int target = q / p * (p - 1);
      while (mul_order(g, q) != target) ++g;
      gens.push_back({lift(g), target});
    }
  }
  return gens;
}

} // namespace detail

inline std::vector<DirichletCharacter> characters(int N) {
  auto gens = detail::unit_group_generators(N);
  int ng = static_cast<int>(gens.size());
  // discrete logs of every unit with respect to the generator tuple
  std::vector<std::vector<int>> dlog(N, std::vector<int>(ng, 0));
  {
    std::vector<int> idx(ng, 0);
    for (;;) {
      long long v = 1 % N;
      for (int i = 0; i < ng; ++i) v = v * pow_mod(gens[i].first, idx[i], N) % N;
      dlog[v] = idx;
      int i = 0;
      while (i < ng && ++idx[i] == gens[i].second) idx[i++] = 0;
      if (i == ng) break;
    }
  }
  std::vector<DirichletCharacter> out;
  std::vector<int> t(ng, 0); // character exponents on the generators
  for (;;) {
    DirichletCharacter chi;
    chi.N = N;
    int ord = 1;
    for (int i = 0; i < ng; ++i)
      ord = std::lcm(ord, gens[i].second / std::gcd(gens[i].second, t[i]));
    chi.order = ord;
    chi.e.assign(N, -1);
    for (int k = 0; k < N; ++k) {
      if (std::gcd(k, N) != 1) continue;
      long long s = 0;
      for (int i = 0; i < ng; ++i)
        s += dlog[k][i] * (static_cast<long long>(t[i]) * ord / gens[i].second);
      chi.e[k] = static_cast<int>(s % ord);
    }
    chi.parity = N <= 2 ? 1 : (chi.e[N - 1] == 0 ? 1 : -1);
    // conductor: smallest f | N with chi trivial on units congruent to 1 mod f
    for (int f = 1; f <= N; ++f) {
      if (N % f != 0) continue;
      bool ok = true;
      for (int k = 1; k < N && ok; ++k)
        if (k % f == 1 % f && chi.e[k] > 0) ok = false;
      if (ok) {
        chi.conductor = f;
        break;
      }
    }
    out.push_back(std::move(chi));
    int i = 0;
    while (i < ng && ++t[i] == gens[i].second) t[i++] = 0;
    if (i == ng || ng == 0) break;
  }
  return out;
}

inline BC gauss_sum(const DirichletCharacter& chi) {
  BC s(0);
  int f = chi.conductor;
  for (int l = 1; l <= f; ++l)
    if (std::gcd(l, f) == 1) s += chi.primitive_value(l) * root_of_unity(f, l);
  return s;
}

// L(n, chi) of the primitive character inducing chi, for integer n >= 1.
// n = 1 needs chi nontrivial. Evaluated through Hurwitz zeta / digamma.
inline BC dirichlet_L(int n, const DirichletCharacter& chi) {
  if (n < 1) throw std::invalid_argument("dirichlet_L: n >= 1");
  if (n == 1 && chi.is_trivial()) throw std::invalid_argument("dirichlet_L: L(1, trivial) diverges");
  int f = chi.conductor;
  if (n == 1) {
    // L(1,chi) = -(1/f) sum_r chi(r) psi(r/f)
    BC s(0);
    for (int r = 1; r < f; ++r) {
      BC v = chi.primitive_value(r);
      if (v != BC(0)) s += v * BC(digamma_real(Real(r) / f));
    }
    return s / BC(-f);
  }
  // L(n,chi) = f^-n sum_r chi(r) zeta(n, r/f)
  BC s(0);
  for (int r = 1; r <= f; ++r) {
    BC v = chi.primitive_value(r);
    if (v != BC(0)) s += v * BC(hurwitz_zeta_int(n, Real(r) / f));
  }
  return s / BC(pow(Real(f), n));
}

// ---- the ring k(N): pairs (a, r) in Z/NZ x k with carry-twisted operations;
// (a, r) corresponds to the rational a~ + N r ----

struct RingN {
  int N = 1;
  int a = 0; // canonical representative in [0, N-1]
  Rat r;

  RingN() = default;
  RingN(int modulus, int a0, Rat r0) : N(modulus), a(((a0 % modulus) + modulus) % modulus), r(std::move(r0)) {}
};

inline bool operator==(const RingN& x, const RingN& y) {
  return x.N == y.N && x.a == y.a && x.r == y.r;
}

inline RingN ringn_zero(int N) { return {N, 0, Rat(0)}; }
inline RingN ringn_one(int N) { return {N, 1 % N, N == 1 ? Rat(1) : Rat(0)}; }

inline RingN ringn_add(const RingN& x, const RingN& y) {
  int s = x.a + y.a;
  return {x.N, s % x.N, x.r + y.r + Rat(s / x.N)};
}

inline RingN ringn_neg(const RingN& x) {
  // -(a, r): residue -a, rational part fixed by a~ + N r |-> -(a~ + N r)
  int na = (x.N - x.a) % x.N;
  return {x.N, na, -x.r - Rat(x.a + na) / x.N};
}

inline RingN ringn_mul(const RingN& x, const RingN& y) {
  long long p = static_cast<long long>(x.a) * y.a;
  return {x.N, static_cast<int>(p % x.N),
          x.r * y.a + Rat(x.a) * y.r + Rat(x.N) * x.r * y.r + Rat(p / x.N)};
}

// the ring morphism k(N) -> k, (a, r) |-> a~ + N r
inline Rat ringn_value(const RingN& x) { return Rat(x.a) + Rat(x.N) * x.r; }

// inverse of (residue, value) splitting: value v with v = a~ mod N
inline RingN ringn_from_value(int N, int a, const Rat& v) {
  RingN x(N, a, Rat(0));
  x.r = (v - Rat(x.a)) / N;
  return x;
}

// [[-]] : k(N) -> k(N') for N'|N, (a, r) |-> (a mod N', floor(a~/N') + d r)
inline RingN ringn_proj(const RingN& x, int Np) {
  if (Np <= 0 || x.N % Np != 0) throw std::invalid_argument("ringn_proj: need N'|N");
  int d = x.N / Np;
  return {Np, x.a % Np, Rat(x.a / Np) + Rat(d) * x.r};
}

} // namespace cyclo
