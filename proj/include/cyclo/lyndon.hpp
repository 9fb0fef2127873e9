#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "cyclo/series.hpp"

namespace cyclo {

// Lyndon words of exact length d over letters 0..m-1 (Duval), lexicographic.
inline std::vector<Word> lyndon_words(int m, int d) {
  std::vector<Word> out;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    int k = static_cast<int>(w.size());
    if (k == d) {
      Word lw;
      for (int x : w) lw.push_back(static_cast<char>(x));
      out.push_back(lw);
    }
    while (static_cast<int>(w.size()) < d) w.push_back(w[w.size() - k]);
    while (!w.empty() && w.back() == m - 1) w.pop_back();
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Witt/necklace count of Lyndon words.
inline long long witt_number(int m, int d) {
  auto mobius = [](int n) {
    int r = 1;
    for (int p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
      }
    if (n > 1) r = -r;
    return r;
  };
  long long s = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) {
      long long pw = 1;
      for (int i = 0; i < d / e; ++i) pw *= m;
      s += mobius(e) * pw;
    }
  return s / d;
}

// Bracket trees over degree-1 leaves, kept in a shared pool per owner.
struct Tree {
  int leaf = -1; // >=0: leaf (generator/letter index)
  int l = -1, r = -1;
};

struct TreePool {
  std::vector<Tree> nodes;
  int add_leaf(int g) {
    nodes.push_back(Tree{g, -1, -1});
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_node(int l, int r) {
    nodes.push_back(Tree{-1, l, r});
    return static_cast<int>(nodes.size()) - 1;
  }
  const Tree& operator[](int i) const { return nodes[i]; }
};

// Standard factorization w = uv, v the longest proper Lyndon suffix; the
// standard bracketing of Lyndon words is [b(u), b(v)].
inline int standard_bracketing(const Word& w, TreePool& pool,
                               std::map<Word, int>& memo) {
  auto it = memo.find(w);
  if (it != memo.end()) return it->second;
  int id;
  if (w.size() == 1) {
    id = pool.add_leaf(static_cast<unsigned char>(w[0]));
  } else {
    size_t split = 1;
    for (size_t i = 1; i < w.size(); ++i) {
      Word suf = w.substr(i);
      // longest proper Lyndon suffix = smallest proper suffix in lex order
      if (suf < w.substr(split)) split = i;
    }
    int l = standard_bracketing(w.substr(0, split), pool, memo);
    int r = standard_bracketing(w.substr(split), pool, memo);
    id = pool.add_node(l, r);
  }
  memo[w] = id;
  return id;
}

// Expansion of a bracket tree into words with rational coefficients.
inline std::map<Word, Rat> expand_tree(const TreePool& pool, int id) {
  const Tree& t = pool[id];
  if (t.leaf >= 0) return {{Word(1, static_cast<char>(t.leaf)), Rat(1)}};
  auto L = expand_tree(pool, t.l);
  auto R = expand_tree(pool, t.r);
  std::map<Word, Rat> out;
  for (auto& [wl, cl] : L)
    for (auto& [wr, cr] : R) {
      out[wl + wr] += cl * cr;
      out[wr + wl] -= cl * cr;
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// Free Lie basis data for one alphabet, built degree by degree on demand.
struct LyndonBasis {
  int m; // alphabet size
  TreePool pool;
  std::map<Word, int> tree_memo;
  std::vector<std::vector<Word>> words;                    // per degree
  std::vector<std::vector<int>> trees;                     // per degree
  std::vector<std::vector<std::map<Word, Rat>>> expansion; // per degree

  explicit LyndonBasis(int letters) : m(letters) {
    words.push_back({});
    trees.push_back({});
    expansion.push_back({});
  }

  void ensure(int d) {
    for (int k = static_cast<int>(words.size()); k <= d; ++k) {
      auto lw = lyndon_words(m, k);
      std::vector<int> ts;
      std::vector<std::map<Word, Rat>> ex;
      for (auto& w : lw) {
        int id = standard_bracketing(w, pool, tree_memo);
        ts.push_back(id);
        ex.push_back(expand_tree(pool, id));
      }
      words.push_back(lw);
      trees.push_back(std::move(ts));
      expansion.push_back(std::move(ex));
    }
  }

  int dim(int d) {
    ensure(d);
    return static_cast<int>(words[d].size());
  }
};

inline LyndonBasis& lyndon_basis(int m) {
  static std::map<int, LyndonBasis> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, LyndonBasis(m)).first;
  return it->second;
}

// Coordinates of a homogeneous degree-d component in the Lyndon basis.
// Triangular peel: the expansion of a bracketed Lyndon word is the word
// itself plus lexicographically greater words, so scanning Lyndon words in
// increasing order reads off the coordinates; whatever remains is the
// non-Lie defect (exactly zero for Lie input).
template <class K>
struct LyndonCoords {
  std::map<Word, K> coords; // keyed by Lyndon word
  std::map<Word, K> defect;
};

template <class K>
LyndonCoords<K> lyndon_coordinates(int m, int d, const std::map<Word, K>& comp) {
  LyndonBasis& basis = lyndon_basis(m);
  basis.ensure(d);
  LyndonCoords<K> out;
  std::map<Word, K> residual = comp;
  for (size_t i = 0; i < basis.words[d].size(); ++i) {
    const Word& w = basis.words[d][i];
    auto it = residual.find(w);
    if (it == residual.end()) continue;
    K c = it->second;
    if (is_exact_zero(c)) {
      residual.erase(it);
      continue;
    }
    out.coords[w] = c;
    for (auto& [we, ce] : basis.expansion[d][i]) {
      auto [jt, fresh] = residual.emplace(we, coeff_zero<K>());
      jt->second -= c * from_rat<K>(ce);
      if (is_exact_zero(jt->second)) residual.erase(jt);
    }
  }
  for (auto it = residual.begin(); it != residual.end();)
    it = is_exact_zero(it->second) ? residual.erase(it) : std::next(it);
  out.defect = std::move(residual);
  return out;
}

// Right-nested bracketing map w = a1..an -> [a1,[a2,[...,an]]]; a homogeneous
// x of degree n is Lie iff dynkin(x) = n*x (Dynkin-Specht-Wever).
template <class K>
std::map<Word, K> dynkin_map(const std::map<Word, K>& comp) {
  std::map<Word, std::map<Word, Rat>> memo;
  std::function<const std::map<Word, Rat>&(const Word&)> expand =
      [&](const Word& w) -> const std::map<Word, Rat>& {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    std::map<Word, Rat> r;
    if (w.size() == 1) {
      r[w] = 1;
    } else {
      const auto& sub = expand(w.substr(1));
      Word a = w.substr(0, 1);
      for (auto& [ws, cs] : sub) {
        r[a + ws] += cs;
        r[ws + a] -= cs;
      }
    }
    return memo.emplace(w, std::move(r)).first->second;
  };
  std::map<Word, K> out;
  for (auto& [w, c] : comp) {
    for (auto& [we, ce] : expand(w)) {
      auto [it, fresh] = out.emplace(we, coeff_zero<K>());
      it->second += c * from_rat<K>(ce);
      if (is_exact_zero(it->second)) out.erase(it);
    }
  }
  return out;
}

struct LieDefectReport {
  bool is_lie = true;
  std::vector<std::pair<int, Real>> degree_residuals; // offending degrees
};

// Friedrichs/Dynkin test per homogeneous component, exact for rationals,
// tolerance-based for complex coefficients.
template <class K>
LieDefectReport is_lie(const Series<K>& x, const Real& tol = rel_tol()) {
  LieDefectReport rep;
  if (!is_exact_zero(x.at(Word()))) {
    rep.is_lie = false;
    rep.degree_residuals.push_back({0, coeff_abs(x.at(Word()))});
  }
  for (int d = 1; d <= x.D; ++d) {
    std::map<Word, K> comp;
    for (auto& [w, v] : x.c)
      if (static_cast<int>(w.size()) == d) comp[w] = v;
    if (comp.empty()) continue;
    auto dyn = dynkin_map(comp);
    Real worst(0);
    for (auto& [w, v] : comp) {
      K expect = v * from_rat<K>(Rat(d));
      auto it = dyn.find(w);
      K got = it == dyn.end() ? coeff_zero<K>() : it->second;
      Real r = coeff_abs(got - expect);
      if (r > worst) worst = r;
    }
    for (auto& [w, v] : dyn)
      if (!comp.count(w)) {
        Real r = coeff_abs(v);
        if (r > worst) worst = r;
      }
    bool ok = CoeffTraits<K>::exact ? worst.is_zero() : worst <= tol;
    if (!ok) {
      rep.is_lie = false;
      rep.degree_residuals.push_back({d, worst});
    }
  }
  return rep;
}

} // namespace cyclo
