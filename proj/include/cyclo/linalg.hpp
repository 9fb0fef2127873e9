#pragma once

#include <map>
#include <vector>

#include "cyclo/coeff.hpp"

namespace cyclo {

// Sparse rational matrix with deterministic (lexicographic-first) row
// reduction; enough for the exact nullspace / solve work here.
struct RatMat {
  int cols = 0;
  std::vector<std::map<int, Rat>> rows;

  void add_row(std::map<int, Rat> r) {
    for (auto it = r.begin(); it != r.end();)
      it = it->second.is_zero() ? r.erase(it) : std::next(it);
    rows.push_back(std::move(r));
  }
};

struct RowEchelon {
  std::vector<std::map<int, Rat>> rows; // reduced rows, pivot coefficient 1
  std::vector<int> pivot_col;           // per reduced row
  int rank() const { return static_cast<int>(rows.size()); }
};

inline RowEchelon row_reduce(const RatMat& m) {
  RowEchelon e;
  for (auto r : m.rows) {
    // eliminate with existing pivots
    for (size_t i = 0; i < e.rows.size(); ++i) {
      auto it = r.find(e.pivot_col[i]);
      if (it == r.end()) continue;
      Rat f = it->second;
      r.erase(it);
      for (auto& [c, v] : e.rows[i]) {
        if (c == e.pivot_col[i]) continue;
        auto [jt, fresh] = r.emplace(c, Rat(0));
        jt->second -= f * v;
        if (jt->second.is_zero()) r.erase(jt);
      }
    }
    if (r.empty()) continue;
    int p = r.begin()->first; // first (lexicographic) nonzero column
    Rat pv = r.begin()->second;
    for (auto& [c, v] : r) v /= pv;
    // back-substitute into earlier rows
    for (size_t i = 0; i < e.rows.size(); ++i) {
      auto it = e.rows[i].find(p);
      if (it == e.rows[i].end()) continue;
      Rat f = it->second;
      e.rows[i].erase(it);
      for (auto& [c, v] : r) {
        if (c == p) continue;
        auto [jt, fresh] = e.rows[i].emplace(c, Rat(0));
        jt->second -= f * v;
        if (jt->second.is_zero()) e.rows[i].erase(jt);
      }
    }
    e.rows.push_back(std::move(r));
    e.pivot_col.push_back(p);
  }
  return e;
}

// Basis of {x : M x = 0}, reproducible ordering (free columns ascending).
inline std::vector<std::vector<Rat>> nullspace(const RatMat& m) {
  RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols, false);
  std::vector<int> pivot_row(m.cols, -1);
  for (size_t i = 0; i < e.rows.size(); ++i) {
    is_pivot[e.pivot_col[i]] = true;
    pivot_row[e.pivot_col[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<Rat>> basis;
  for (int f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(m.cols, Rat(0));
    v[f] = 1;
    for (int c = 0; c < m.cols; ++c)
      if (is_pivot[c]) {
        auto it = e.rows[pivot_row[c]].find(f);
        if (it != e.rows[pivot_row[c]].end()) v[c] = -it->second;
      }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline int rank(const RatMat& m) { return row_reduce(m).rank(); }

// Solve M x = b exactly; returns false if inconsistent. Unique solutions
// only (columns of M must be independent for a well-posed use).
inline bool solve(const RatMat& m, const std::vector<Rat>& b, std::vector<Rat>& x) {
  RatMat aug;
  aug.cols = m.cols + 1;
  for (size_t i = 0; i < m.rows.size(); ++i) {
    auto r = m.rows[i];
    if (!b[i].is_zero()) r[m.cols] = b[i];
    aug.add_row(std::move(r));
  }
  RowEchelon e = row_reduce(aug);
  x.assign(m.cols, Rat(0));
  for (size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivot_col[i] == m.cols) return false; // pivot in rhs column
    auto it = e.rows[i].find(m.cols);
    x[e.pivot_col[i]] = it == e.rows[i].end() ? Rat(0) : it->second;
  }
  return true;
}

} // namespace cyclo
