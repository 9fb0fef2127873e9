#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"
#include "series.hpp"
#include "word.hpp"

namespace cyclo {

// Multiple polylogarithm index: Li_{s_1..s_r}(z^{a_1},..,z^{a_r}) with
// z = e^{2 pi i/N}, summed over 1 <= n_1 < .. < n_r. Convergence requires
// (s_r, a_r) != (1, 0).
struct MPLIndex {
  int N = 1;
  std::vector<int> s;
  std::vector<int> a;
};

// Word of one-forms on [0,1]: letter -1 is dt/t, letter a in [0,N) is
// dt/(z^a - t). Convergent iff the first letter is not -1 and the last
// is not 0.
struct IntegralWord {
  int N = 1;
  std::vector<int> letters;
};

inline void validate(const MPLIndex& idx) {
  if (idx.N < 1) throw std::invalid_argument("mpl: N must be positive");
  if (idx.s.empty() || idx.s.size() != idx.a.size())
    throw std::invalid_argument("mpl: depth mismatch");
  for (int si : idx.s)
    if (si < 1) throw std::invalid_argument("mpl: exponents must be >= 1");
  if (idx.s.back() == 1 && ((idx.a.back() % idx.N) + idx.N) % idx.N == 0)
    throw std::invalid_argument("mpl: divergent index (s_r, zeta_r) = (1, 1)");
}

inline void validate(const IntegralWord& w) {
  if (w.N < 1) throw std::invalid_argument("iterint: N must be positive");
  if (w.letters.empty()) throw std::invalid_argument("iterint: empty word");
  for (int l : w.letters)
    if (l < -1 || l >= w.N) throw std::invalid_argument("iterint: bad letter");
  if (w.letters.front() == -1)
    throw std::invalid_argument("iterint: word starts with dt/t");
  if (w.letters.back() == 0)
    throw std::invalid_argument("iterint: word ends with dt/(1-t)");
}

// Li <-> iterated integral dictionary: the i-th block contributes the form
// with root (zeta_i .. zeta_r)^{-1} followed by s_i - 1 copies of dt/t.
inline IntegralWord mpl_word(const MPLIndex& idx) {
  validate(idx);
  int r = static_cast<int>(idx.s.size());
  IntegralWord w;
  w.N = idx.N;
  int suffix = 0; // a_i + .. + a_r mod N
  std::vector<int> heads(r);
  for (int i = r - 1; i >= 0; --i) {
    suffix = ((suffix + idx.a[i]) % idx.N + idx.N) % idx.N;
    heads[i] = (idx.N - suffix) % idx.N;
  }
  for (int i = 0; i < r; ++i) {
    w.letters.push_back(heads[i]);
    for (int k = 1; k < idx.s[i]; ++k) w.letters.push_back(-1);
  }
  return w;
}

inline MPLIndex word_mpl(const IntegralWord& w) {
  validate(w);
  MPLIndex idx;
  idx.N = w.N;
  std::vector<int> heads;
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (w.letters[i] == -1) {
      ++idx.s.back();
    } else {
      heads.push_back(w.letters[i]);
      idx.s.push_back(1);
    }
  }
  int r = static_cast<int>(heads.size());
  for (int i = 0; i < r; ++i) {
    int next = (i + 1 < r) ? heads[i + 1] : 0;
    idx.a.push_back(((next - heads[i]) % w.N + w.N) % w.N);
  }
  return idx;
}

namespace detail {

struct PathForm {
  bool dt_over_t = false;
  BC v; // dt/(v - t) when not dt_over_t
};

inline BC bc_scale(const BC& x, const Real& r) { return BC(x.re * r, x.im * r); }

// Taylor coefficients needed so the tail beyond n_max is below working
// precision when summing c_n q^n, q = 1/(2 min(1,|v|_min)).
inline int path_nmax(const std::vector<PathForm>& w) {
  Real minv(1);
  for (const auto& f : w)
    if (!f.dt_over_t) {
      Real m = abs(f.v);
      if (m < minv) minv = m;
    }
  double ratio = 2.0 * std::min(1.0, static_cast<double>(minv));
  if (ratio <= 1.0)
    throw std::invalid_argument("iterint: singularity too close to the path");
  double digits = precision_digits() + 10;
  return static_cast<int>(digits * 2.302585 / std::log(ratio)) + 16;
}

// Values at z = 1/2 of all iterated integrals over 0 <= t_1 <= .. <= t_k <= z
// for every prefix (k = 0..m) of w. Maintains the Taylor expansion of the
// running integral; each letter extension is a linear-time update.
inline std::vector<BC> half_path_prefix_values(const std::vector<PathForm>& w) {
  int nmax = path_nmax(w);
  std::vector<Real> invn(nmax + 1);
  for (int n = 1; n <= nmax; ++n) invn[n] = Real(1) / n;
  std::vector<BC> c(nmax + 1);
  c[0] = BC(1);
  std::vector<BC> out;
  out.reserve(w.size() + 1);
  auto value_at_half = [&]() {
    Real p(1);
    BC acc;
    for (int n = 0; n <= nmax; ++n) {
      acc += bc_scale(c[n], p);
      p /= 2;
    }
    return acc;
  };
  out.push_back(value_at_half());
  for (const auto& f : w) {
    if (f.dt_over_t) {
      if (!is_exact_zero(c[0]))
        throw std::invalid_argument("iterint: dt/t against nonzero constant");
      for (int n = 1; n <= nmax; ++n) c[n] = bc_scale(c[n], invn[n]);
    } else {
      BC vinv = BC(1) / f.v;
      BC prev = c[0], S;
      c[0] = BC(0);
      for (int n = 1; n <= nmax; ++n) {
        S = (S + prev) * vinv;
        prev = c[n];
        c[n] = bc_scale(S, invn[n]);
      }
    }
    out.push_back(value_at_half());
  }
  return out;
}

// Path-splitting evaluator: compose [0,1/2] with [1/2,1]; the second piece
// is pulled back through t = 1-s onto [0,1/2] with the reversed word,
// letter map (-1 -> 1, 0 -> dt/t, a -> 1 - z^a) and a sign per root != 1.
inline BC iterint_value(const IntegralWord& w) {
  validate(w);
  int m = static_cast<int>(w.letters.size());
  std::vector<PathForm> fw(m), rw(m);
  for (int i = 0; i < m; ++i) {
    int l = w.letters[i];
    if (l == -1)
      fw[i].dt_over_t = true;
    else
      fw[i].v = root_of_unity(w.N, l);
    PathForm& g = rw[m - 1 - i];
    if (l == -1)
      g.v = BC(1);
    else if (l == 0)
      g.dt_over_t = true;
    else
      g.v = BC(1) - root_of_unity(w.N, l);
  }
  std::vector<BC> A = half_path_prefix_values(fw);
  std::vector<BC> B = half_path_prefix_values(rw);
  BC total;
  Real sign(1);
  for (int k = m; k >= 0; --k) { // sign = (-1)^{roots != 1 in suffix k..m-1}
    total += bc_scale(A[k] * B[m - k], sign);
    if (k > 0 && w.letters[k - 1] > 0) sign = -sign;
  }
  return total;
}

} // namespace detail

inline BC mpl(const MPLIndex& idx) { return detail::iterint_value(mpl_word(idx)); }

inline BC iterint(const IntegralWord& w) { return mpl(word_mpl(w)); }

namespace detail {

// Sum_{n > M} z^n / n^s, z a root of unity.
inline BC power_sum_tail(int s, int N, int a, long M) {
  a = ((a % N) + N) % N;
  if (a == 0) {
    if (s < 2) throw std::invalid_argument("divergent tail");
    return BC(hurwitz_zeta_int(s, Real(M + 1)));
  }
  BC z = root_of_unity(N, a);
  if (s == 1) {
    // z^{M+1} int_0^1 t^M / (1 - z t) dt
    BC zM = bc_pow_int(z, M + 1);
    Real Mr(M);
    BC val = integrate_01_bc([&](const Real& t) {
      BC den = BC(1) - z * BC(t);
      return BC(pow(t, Mr)) / den;
    });
    return zM * val;
  }
  BC acc;
  Real Ns = pow(Real(N), -s);
  for (int c = 1; c <= N; ++c)
    acc += bc_pow_int(z, M + c) * BC(Ns * hurwitz_zeta_int(s, Real(M + c) / N));
  return acc;
}

} // namespace detail

// Independent check: truncated nested summation, closed on the outermost
// index by the exact power-sum tail against the inner partial sum at M.
inline BC mpl_series_oracle(const MPLIndex& idx, long M = 100000) {
  validate(idx);
  int r = static_cast<int>(idx.s.size());
  std::vector<BC> zeta(r), pw(r, BC(1)), cum(r);
  for (int i = 0; i < r; ++i) zeta[i] = root_of_unity(idx.N, idx.a[i]);
  for (long n = 1; n <= M; ++n) {
    Real nr(n);
    std::vector<Real> npow(7, Real(1));
    for (int s = 1; s <= 6; ++s) npow[s] = npow[s - 1] * nr;
    for (int k = r - 1; k >= 0; --k) {
      pw[k] *= zeta[k];
      BC term = detail::bc_scale(pw[k], Real(1) / npow[idx.s[k]]);
      cum[k] += (k == 0) ? term : term * cum[k - 1];
    }
  }
  BC tail = detail::power_sum_tail(idx.s[r - 1], idx.N, idx.a[r - 1], M);
  if (r > 1) tail = tail * cum[r - 2];
  return cum[r - 1] + tail;
}

// Projection killing words that start with b(0) or end with the letter A
// (letter 1 resp. 0 of the N-cyclotomic alphabet).
inline Series<BC> pi_project(const Series<BC>& f) {
  Series<BC> r(f.D);
  for (const auto& [w, v] : f.c) {
    if (!w.empty() && (w.front() == 1 || w.back() == 0)) continue;
    r.add(w, v);
  }
  return r;
}

// Shuffle regularization v o u: substitute A -> A - alpha, b(0) -> b(0) - beta
// (alpha, beta central), then turn beta powers into left b(0) factors and
// alpha powers into right A factors.
inline Series<BC> vu_regularize(const Series<BC>& f) {
  Series<BC> r(f.D);
  for (const auto& [w, v] : f.c) {
    int m = static_cast<int>(w.size());
    std::vector<int> special; // positions holding A or b(0)
    for (int i = 0; i < m; ++i)
      if (w[i] == 0 || w[i] == 1) special.push_back(i);
    int k = static_cast<int>(special.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      int p = 0, q = 0; // stripped A's, stripped b(0)'s
      std::vector<char> drop(m, 0);
      for (int j = 0; j < k; ++j)
        if (mask & (1u << j)) {
          drop[special[j]] = 1;
          (w[special[j]] == 0 ? p : q)++;
        }
      Word nw(static_cast<size_t>(q), char(1));
      for (int i = 0; i < m; ++i)
        if (!drop[i]) nw.push_back(w[i]);
      nw.append(static_cast<size_t>(p), char(0));
      r.add(nw, ((p + q) % 2) ? -v : v);
    }
  }
  return r;
}

// KZ pseudotwist on the N-cyclotomic alphabet, assembled from iterated
// integral values: pi(Psi) = sum over convergent words of
// (-1)^{#roots} I(l_1..l_r) b(l_r)..b(l_1), then regularized by v o u.
inline Series<BC> assemble_psi(int N, int D) {
  if (N < 1 || D < 0) throw std::invalid_argument("assemble_psi: bad N or D");
  Series<BC> raw = series_one<BC>(D);
  IntegralWord iw;
  iw.N = N;
  for (int r = 1; r <= D; ++r) {
    std::vector<int> seq(r, -1);
    seq[0] = 0;
    while (true) {
      if (seq[0] != -1 && seq[r - 1] != 0) {
        iw.letters = seq;
        BC val = detail::iterint_value(iw);
        int roots = 0;
        Word w;
        for (int i = r - 1; i >= 0; --i) {
          if (seq[i] != -1) ++roots;
          w.push_back(seq[i] == -1 ? char(0) : char(1 + seq[i]));
        }
        raw.add(w, (roots % 2) ? -val : val);
      }
      int i = r - 1;
      while (i >= 0 && seq[i] == N - 1) seq[i--] = -1;
      if (i < 0) break;
      ++seq[i];
    }
  }
  return vu_regularize(raw);
}

// Two-letter associator on letters (t12, t23): the N = 1 instance verbatim.
// This is the holonomy orientation whose degree-2 part is -zeta(2)[t12,t23],
// the one satisfying the hexagon relation with lambda = 2 pi i.
inline Series<BC> assemble_phi(int D) { return assemble_psi(1, D); }

namespace detail {

// Frobenius solution H = F(z) z^{sing} of H' = (sing/z + sum_t reg_t/(z-v_t)) H,
// F(0) = 1, evaluated at z = 1/2. Letters act by left concatenation; the
// commutator with sing is nilpotent on the truncation, so each Taylor
// coefficient solves (n - ad_sing) F_n = rhs exactly.
inline Series<BC> frobenius_half(int D, int sing,
                                 const std::vector<std::pair<int, BC>>& reg) {
  auto prepend = [&](int letter, const Series<BC>& x) {
    Series<BC> r(x.D);
    for (const auto& [w, v] : x.c) {
      if (static_cast<int>(w.size()) >= x.D) continue;
      r.add(Word(1, char(letter)) + w, v);
    }
    return r;
  };
  auto append = [&](const Series<BC>& x, int letter) {
    Series<BC> r(x.D);
    for (const auto& [w, v] : x.c) {
      if (static_cast<int>(w.size()) >= x.D) continue;
      r.add(w + Word(1, char(letter)), v);
    }
    return r;
  };
  int nmax = static_cast<int>((precision_digits() + 10) * 3.321929) + 16;
  std::vector<BC> vinv(reg.size());
  for (size_t t = 0; t < reg.size(); ++t) vinv[t] = BC(1) / reg[t].second;
  std::vector<Series<BC>> P(reg.size(), Series<BC>(D)); // sum_j v^{-j} F_{n-j}
  Series<BC> F = series_one<BC>(D);
  Series<BC> acc = F;
  Real half(Real(1) / 2), hp(1);
  for (int n = 1; n <= nmax; ++n) {
    Series<BC> rhs(D);
    for (size_t t = 0; t < reg.size(); ++t) {
      P[t] = (P[t] + F) * vinv[t];
      rhs = rhs - prepend(reg[t].first, P[t]);
    }
    BC ninv = BC(Real(1) / n);
    Series<BC> term = rhs * ninv;
    F = term;
    for (int k = 0; k < D && !term.c.empty(); ++k) {
      term = (prepend(sing, term) - append(term, sing)) * ninv;
      F = F + term;
    }
    hp *= half;
    acc = acc + F * BC(hp);
  }
  return acc;
}

} // namespace detail

// ODE pipeline: Frobenius expansions at both singular endpoints glued at
// z = 1/2. Psi = (1-z)^{-b(0)} H1(z)^{-1} H0(z) z^{-A} in the limit sense,
// with H0 ~ z^A at 0 and H1 ~ (1-z)^{b(0)} at 1.
inline Series<BC> psi_ode(int N, int D) {
  if (N < 1 || D < 0) throw std::invalid_argument("psi_ode: bad N or D");
  std::vector<std::pair<int, BC>> reg0, reg1;
  for (int a = 0; a < N; ++a) reg0.push_back({1 + a, root_of_unity(N, a)});
  reg1.push_back({0, BC(1)});
  for (int a = 1; a < N; ++a)
    reg1.push_back({1 + a, BC(1) - root_of_unity(N, a)});
  Series<BC> P = detail::frobenius_half(D, 0, reg0);
  Series<BC> Q = detail::frobenius_half(D, 1, reg1);
  Real l2 = log(Real(2));
  Series<BC> eb = exp_trunc(series_letter<BC>(1, D, BC(l2)));
  Series<BC> ea = exp_trunc(series_letter<BC>(0, D, BC(-l2)));
  return series_mul(series_mul(eb, series_mul(inverse_trunc(Q), P)), ea);
}

inline Series<BC> phi_ode(int D) { return psi_ode(1, D); }

struct KZSeriesBundle {
  int N = 1;
  int D = 0;
  int precision = 0;
  Series<BC> psi;
  Series<BC> phi;
  std::string provenance;
  KZSeriesBundle() : psi(0), phi(0) {}
};

inline KZSeriesBundle kz_comb_bundle(int N, int D) {
  KZSeriesBundle b;
  b.N = N;
  b.D = D;
  b.precision = precision_digits();
  b.psi = assemble_psi(N, D);
  b.phi = assemble_phi(D);
  b.provenance = "comb";
  return b;
}

inline KZSeriesBundle kz_ode_oracle(int N, int D) {
  KZSeriesBundle b;
  b.N = N;
  b.D = D;
  b.precision = precision_digits();
  b.psi = psi_ode(N, D);
  b.phi = phi_ode(D);
  b.provenance = "ode";
  return b;
}

} // namespace cyclo
