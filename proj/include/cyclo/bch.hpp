#pragma once

#include "cyclo/lyndon.hpp"
#include "cyclo/series.hpp"

namespace cyclo {

// Universal Baker-Campbell-Hausdorff table: log(exp X exp Y) in the free
// 2-letter Lie algebra, stored as Lyndon-basis coefficients per degree.
// It is computed once in the free associative algebra over Q and can then be
// evaluated in any graded Lie model through structure constants.
struct BchTable {
  int D;
  // terms[d]: list of (lyndon basis index in 2-letter basis at degree d, coeff)
  std::vector<std::vector<std::pair<int, Rat>>> terms;
};

inline const BchTable& bch_table(int D) {
  static std::map<int, BchTable> cache;
  auto it = cache.find(D);
  if (it != cache.end()) return it->second;
  BchTable t;
  t.D = D;
  t.terms.resize(D + 1);
  Series<Rat> x = series_letter<Rat>(0, D);
  Series<Rat> y = series_letter<Rat>(1, D);
  Series<Rat> z = log_trunc(series_mul(exp_trunc(x), exp_trunc(y)));
  LyndonBasis& basis = lyndon_basis(2);
  for (int d = 1; d <= D; ++d) {
    basis.ensure(d);
    std::map<Word, Rat> comp;
    for (auto& [w, v] : z.c)
      if (static_cast<int>(w.size()) == d) comp[w] = v;
    auto co = lyndon_coordinates<Rat>(2, d, comp);
    if (!co.defect.empty()) throw std::logic_error("bch table: non-Lie defect");
    for (size_t i = 0; i < basis.words[d].size(); ++i) {
      auto jt = co.coords.find(basis.words[d][i]);
      if (jt != co.coords.end() && !jt->second.is_zero())
        t.terms[d].push_back({static_cast<int>(i), jt->second});
    }
  }
  return cache.emplace(D, std::move(t)).first->second;
}

} // namespace cyclo
