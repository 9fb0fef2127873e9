#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "cyclo/coeff.hpp"
#include "cyclo/word.hpp"

namespace cyclo {

// Degree-truncated noncommutative power series: sparse word -> coefficient.
// Absent words mean zero; every operation truncates back to degree D.
template <class K>
struct Series {
  int D = 0;
  std::map<Word, K> c;

  Series() = default;
  explicit Series(int degree) : D(degree) {}

  const K& at(const Word& w) const {
    static const K zero = coeff_zero<K>();
    auto it = c.find(w);
    return it == c.end() ? zero : it->second;
  }
  void add(const Word& w, const K& v) {
    if (static_cast<int>(w.size()) > D) return;
    auto [it, fresh] = c.emplace(w, v);
    if (!fresh) it->second += v;
    if (is_exact_zero(it->second)) c.erase(it);
  }
};

template <class K>
Series<K> series_one(int D) {
  Series<K> s(D);
  s.add(Word(), from_rat<K>(Rat(1)));
  return s;
}

template <class K>
Series<K> series_letter(int letter, int D, const K& coeff = from_rat<K>(Rat(1))) {
  Series<K> s(D);
  s.add(Word(1, static_cast<char>(letter)), coeff);
  return s;
}

template <class K>
Series<K> operator+(const Series<K>& a, const Series<K>& b) {
  if (a.D != b.D) throw std::invalid_argument("series degree mismatch");
  Series<K> r = a;
  for (auto& [w, v] : b.c) r.add(w, v);
  return r;
}

template <class K>
Series<K> operator-(const Series<K>& a, const Series<K>& b) {
  if (a.D != b.D) throw std::invalid_argument("series degree mismatch");
  Series<K> r = a;
  for (auto& [w, v] : b.c) r.add(w, -v);
  return r;
}

template <class K>
Series<K> operator*(const Series<K>& a, const K& s) {
  Series<K> r(a.D);
  for (auto& [w, v] : a.c) r.add(w, v * s);
  return r;
}

// Concatenation product, truncated to D.
template <class K>
Series<K> series_mul(const Series<K>& a, const Series<K>& b) {
  if (a.D != b.D) throw std::invalid_argument("series degree mismatch");
  Series<K> r(a.D);
  for (auto& [wa, va] : a.c) {
    int room = a.D - static_cast<int>(wa.size());
    if (room < 0) continue;
    for (auto& [wb, vb] : b.c) {
      if (static_cast<int>(wb.size()) > room) continue;
      r.add(wa + wb, va * vb);
    }
  }
  return r;
}

template <class K>
Series<K> operator*(const Series<K>& a, const Series<K>& b) {
  return series_mul(a, b);
}

template <class K>
Series<K> homogeneous_part(const Series<K>& a, int d) {
  Series<K> r(a.D);
  for (auto& [w, v] : a.c)
    if (static_cast<int>(w.size()) == d) r.add(w, v);
  return r;
}

template <class K>
int min_degree(const Series<K>& a) {
  int m = a.D + 1;
  for (auto& [w, v] : a.c) m = std::min<int>(m, w.size());
  return m;
}

// exp of a series with zero constant term.
template <class K>
Series<K> exp_trunc(const Series<K>& x) {
  if (!is_exact_zero(x.at(Word())))
    throw std::invalid_argument("exp_trunc: nonzero constant term");
  Series<K> r = series_one<K>(x.D);
  Series<K> p = series_one<K>(x.D);
  Rat fact(1);
  for (int k = 1; k <= x.D; ++k) {
    p = series_mul(p, x);
    if (p.c.empty()) break;
    fact *= k;
    Rat inv = Rat(1) / fact;
    for (auto& [w, v] : p.c) r.add(w, v * from_rat<K>(inv));
  }
  return r;
}

// log of a series with constant term 1.
template <class K>
Series<K> log_trunc(const Series<K>& g) {
  K c0 = g.at(Word());
  if (!(c0 == from_rat<K>(Rat(1))))
    throw std::invalid_argument("log_trunc: constant term is not 1");
  Series<K> u = g;
  u.add(Word(), from_rat<K>(Rat(-1)));
  Series<K> r(g.D);
  Series<K> p = series_one<K>(g.D);
  for (int k = 1; k <= g.D; ++k) {
    p = series_mul(p, u);
    if (p.c.empty()) break;
    Rat coef = Rat((k % 2) ? 1 : -1) / k;
    for (auto& [w, v] : p.c) r.add(w, v * from_rat<K>(coef));
  }
  return r;
}

// Multiplicative inverse of a series with constant term 1.
template <class K>
Series<K> inverse_trunc(const Series<K>& g) {
  K c0 = g.at(Word());
  if (!(c0 == from_rat<K>(Rat(1))))
    throw std::invalid_argument("inverse_trunc: constant term is not 1");
  Series<K> u = g;
  u.add(Word(), from_rat<K>(Rat(-1)));
  Series<K> r = series_one<K>(g.D);
  Series<K> p = series_one<K>(g.D);
  for (int k = 1; k <= g.D; ++k) {
    p = series_mul(p, u);
    if (p.c.empty()) break;
    Rat coef((k % 2) ? -1 : 1);
    for (auto& [w, v] : p.c) r.add(w, v * from_rat<K>(coef));
  }
  return r;
}

// The unique continuous algebra morphism sending letter i to images[i]
// (each image must have zero constant term).
template <class K>
Series<K> substitute(const Series<K>& x, const std::vector<Series<K>>& images) {
  for (auto& img : images)
    if (!is_exact_zero(img.at(Word())))
      throw std::invalid_argument("substitute: image with nonzero constant term");
  int D = x.D;
  Series<K> r(D);
  std::map<Word, Series<K>> memo;
  memo[Word()] = series_one<K>(D);
  for (auto& [w, v] : x.c) {
    // build image of w from the longest memoized prefix
    Word pref = w;
    while (!memo.count(pref)) pref.pop_back();
    Series<K> img = memo[pref];
    for (size_t i = pref.size(); i < w.size(); ++i) {
      img = series_mul(img, images[static_cast<unsigned char>(w[i])]);
      memo[w.substr(0, i + 1)] = img;
    }
    for (auto& [wi, vi] : img.c) r.add(wi, vi * v);
  }
  return r;
}

// Conjugation g^{-1} x g and its inverse direction g x g^{-1}.
template <class K>
Series<K> ad_inv(const Series<K>& g, const Series<K>& x) {
  return series_mul(series_mul(inverse_trunc(g), x), g);
}
template <class K>
Series<K> ad_conj(const Series<K>& g, const Series<K>& x) {
  return series_mul(series_mul(g, x), inverse_trunc(g));
}

template <class K>
Series<K> commutator(const Series<K>& a, const Series<K>& b) {
  return series_mul(a, b) - series_mul(b, a);
}

// Max coefficient magnitude in degree d (0 = all degrees).
template <class K>
Real series_max_abs(const Series<K>& a, int d = 0) {
  Real m(0);
  for (auto& [w, v] : a.c) {
    if (d && static_cast<int>(w.size()) != d) continue;
    Real x = coeff_abs(v);
    if (x > m) m = x;
  }
  return m;
}

template <class K>
bool series_is_zero(const Series<K>& a) {
  return a.c.empty();
}

template <class K>
Series<BC> series_to_bc(const Series<K>& a) {
  Series<BC> r(a.D);
  if constexpr (std::is_same_v<K, BC>) {
    r = a;
  } else {
    for (auto& [w, v] : a.c) r.add(w, BC(v));
  }
  return r;
}

} // namespace cyclo
