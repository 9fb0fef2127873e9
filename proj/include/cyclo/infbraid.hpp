#pragma once

#include "cyclo/linalg.hpp"
#include "cyclo/model.hpp"

namespace cyclo {

// Infinitesimal braid towers. t_n is generated by t^{ij} = t^{ji}; t_{n,N}
// by t_0^{0i} and t(a)^{ij} = t(-a)^{ji}. Both are built as iterated
// semidirect products: the strand-n generators span a free Lie ideal and the
// lower tower acts by derivations derived from the defining relations.
//
// Canonical generator order (matching the semidirect basis): strand-n fiber
// letters first, then the t_{n-1} generators recursively.
//   t_n:    t^{1n},...,t^{n-1 n}, then t_{n-1}
//   t_{n,N}: t_0^{0n}, t(0)^{1n},..,t(N-1)^{1n},..,t(N-1)^{n-1 n}, then t_{n-1,N}

struct Gamma0 { // element (c, s) of (Z/NZ)^n x| S_n
  int n = 0, N = 1;
  std::vector<int> c; // c[i-1] in Z/N
  std::vector<int> p; // s(i) = p[i-1], values in [1,n]
};

inline Gamma0 g0_identity(int n, int N) {
  Gamma0 g{n, N, std::vector<int>(n, 0), std::vector<int>(n)};
  for (int i = 0; i < n; ++i) g.p[i] = i + 1;
  return g;
}

inline Gamma0 g0_mul(const Gamma0& a, const Gamma0& b) {
  // (c,s)(c',s') = (c + s.c', ss'), (s.c')_i = c'_{s^{-1}(i)}
  Gamma0 r{a.n, a.N, std::vector<int>(a.n), std::vector<int>(a.n)};
  for (int i = 1; i <= a.n; ++i) r.p[i - 1] = a.p[b.p[i - 1] - 1];
  std::vector<int> sc(a.n);
  for (int i = 1; i <= a.n; ++i) sc[a.p[i - 1] - 1] = b.c[i - 1];
  for (int i = 0; i < a.n; ++i) r.c[i] = ((a.c[i] + sc[i]) % a.N + a.N) % a.N;
  return r;
}

inline Gamma0 g0_inv(const Gamma0& a) {
  Gamma0 r{a.n, a.N, std::vector<int>(a.n), std::vector<int>(a.n)};
  for (int i = 1; i <= a.n; ++i) r.p[a.p[i - 1] - 1] = i;
  for (int i = 1; i <= a.n; ++i) r.c[i - 1] = ((-a.c[a.p[i - 1] - 1]) % a.N + a.N) % a.N;
  return r;
}

inline bool g0_is_identity(const Gamma0& a) {
  for (int i = 0; i < a.n; ++i)
    if (a.c[i] % a.N != 0 || a.p[i] != i + 1) return false;
  return true;
}

inline bool operator==(const Gamma0& a, const Gamma0& b) {
  return a.n == b.n && a.N == b.N && a.c == b.c && a.p == b.p;
}

class TowerModel {
public:
  int n = 0, N = 0; // N == 0 marks a t_n model
  std::shared_ptr<const Model> model;
  std::vector<std::string> names;
  std::map<std::string, int> gen_index;

  int gens() const { return model->gens(); }

  // t_{n,N} generator indices
  int x0(int i) const { return at("t0_0" + std::to_string(i)); }
  int y(int i, int j, int a) const {
    if (i > j) return y(j, i, -a);
    a = ((a % N) + N) % N;
    return at("t" + std::to_string(a) + "_" + std::to_string(i) + std::to_string(j));
  }
  // t_n generator index
  int t(int i, int j) const {
    if (i > j) return t(j, i);
    return at("t" + std::to_string(i) + std::to_string(j));
  }

  const LieMorphism& sym(const Gamma0& g) const;
  const LieMorphism& sigma_insertion(int i) const; // psi letters into strands 0..i-1 | i | i+1

private:
  int at(const std::string& s) const {
    auto it = gen_index.find(s);
    if (it == gen_index.end()) throw std::invalid_argument("unknown generator " + s);
    return it->second;
  }
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, LieMorphism> sym_cache_;
  mutable std::map<int, LieMorphism> sigma_cache_;
};

// shared free Lie model on the letters A, b0,..,b(N-1) used for log Psi
inline const FreeModel& psi_free_model(int N) {
  static std::map<int, std::unique_ptr<FreeModel>> cache;
  auto it = cache.find(N);
  if (it == cache.end())
    it = cache.emplace(N, std::make_unique<FreeModel>(1 + N, psi_alphabet(N).labels)).first;
  return *it->second;
}

// shared free Lie model on the two letters of log Phi
inline const FreeModel& phi_free_model() {
  static FreeModel f(2, phi_alphabet().labels);
  return f;
}

namespace detail {

inline std::vector<std::string> tn_names(int n) {
  if (n == 2) return {"t12"};
  std::vector<std::string> v;
  for (int i = 1; i < n; ++i) v.push_back("t" + std::to_string(i) + std::to_string(n));
  for (auto& s : tn_names(n - 1)) v.push_back(s);
  return v;
}

inline std::vector<std::string> tnN_names(int n, int N) {
  if (n == 1) return {"t0_01"};
  std::vector<std::string> v;
  v.push_back("t0_0" + std::to_string(n));
  for (int i = 1; i < n; ++i)
    for (int a = 0; a < N; ++a)
      v.push_back("t" + std::to_string(a) + "_" + std::to_string(i) + std::to_string(n));
  for (auto& s : tnN_names(n - 1, N)) v.push_back(s);
  return v;
}

} // namespace detail

inline std::shared_ptr<const TowerModel> tn_model(int n) {
  static std::map<int, std::shared_ptr<const TowerModel>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 2) throw std::invalid_argument("t_n needs n >= 2");
  auto tm = std::make_shared<TowerModel>();
  tm->n = n;
  tm->N = 0;
  tm->names = detail::tn_names(n);
  for (int i = 0; i < static_cast<int>(tm->names.size()); ++i)
    tm->gen_index[tm->names[i]] = i;
  if (n == 2) {
    tm->model = std::make_shared<AbelianModel>(tm->names);
  } else {
    auto base = tn_model(n - 1);
    std::vector<std::string> fn(tm->names.begin(), tm->names.begin() + (n - 1));
    auto fiber = std::make_unique<FreeModel>(n - 1, fn);
    // D_{t^{jk}}(t^{in}) = 0 unless i in {j,k}; [t^{jn},t^{kn}] resp. [t^{kn},t^{jn}]
    std::vector<std::vector<HVec<Rat>>> act(base->gens(),
                                            std::vector<HVec<Rat>>(n - 1));
    for (int bg = 0; bg < base->gens(); ++bg) {
      const std::string& nm = base->names[bg]; // "tjk"
      int j = nm[1] - '0', k = nm[2] - '0';
      act[bg][j - 1] = fiber->sc(1, j - 1, 1, k - 1);
      act[bg][k - 1] = fiber->sc(1, k - 1, 1, j - 1);
    }
    tm->model = std::make_shared<SemidirectModel>(std::move(fiber), base->model, std::move(act));
  }
  cache[n] = tm;
  return tm;
}

inline std::shared_ptr<const TowerModel> tnN_model(int n, int N) {
  static std::map<std::pair<int, int>, std::shared_ptr<const TowerModel>> cache;
  auto key = std::make_pair(n, N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (n < 1 || N < 1) throw std::invalid_argument("t_{n,N} needs n, N >= 1");
  auto tm = std::make_shared<TowerModel>();
  tm->n = n;
  tm->N = N;
  tm->names = detail::tnN_names(n, N);
  for (int i = 0; i < static_cast<int>(tm->names.size()); ++i)
    tm->gen_index[tm->names[i]] = i;
  if (n == 1) {
    tm->model = std::make_shared<AbelianModel>(tm->names);
  } else {
    auto base = tnN_model(n - 1, N);
    int fg = 1 + (n - 1) * N; // t_0^{0n} and the t(a)^{in}
    std::vector<std::string> fn(tm->names.begin(), tm->names.begin() + fg);
    auto fiber = std::make_unique<FreeModel>(fg, fn);
    auto T0 = 0;
    auto B = [&](int i, int a) { return 1 + (i - 1) * N + (((a % N) + N) % N); };
    std::vector<std::vector<HVec<Rat>>> act(base->gens(), std::vector<HVec<Rat>>(fg));
    for (int bg = 0; bg < base->gens(); ++bg) {
      const std::string& nm = base->names[bg];
      if (nm.rfind("t0_0", 0) == 0) {
        int i = nm[4] - '0';
        // [t_0^{0i}, t_0^{0n}] = [t_0^{0n}, sum_a t(a)^{in}],
        // [t_0^{0i}, t(a)^{in}] = [t(a)^{in}, t_0^{0n} + sum_b t(b)^{in}]
        HVec<Rat> dT0;
        for (int a = 0; a < N; ++a) hv_add(dT0, fiber->sc(1, T0, 1, B(i, a)), Rat(1));
        act[bg][T0] = std::move(dT0);
        for (int a = 0; a < N; ++a) {
          HVec<Rat> d = fiber->sc(1, B(i, a), 1, T0);
          for (int b = 0; b < N; ++b) hv_add(d, fiber->sc(1, B(i, a), 1, B(i, b)), Rat(1));
          act[bg][B(i, a)] = std::move(d);
        }
      } else {
        int c = std::stoi(nm.substr(1, nm.find('_') - 1));
        auto us = nm.find('_');
        int i = nm[us + 1] - '0', j = nm[us + 2] - '0';
        // [t(c)^{ij}, t(b)^{in}] = [t(b)^{in}, t(b-c)^{jn}],
        // [t(c)^{ij}, t(b)^{jn}] = [t(b)^{jn}, t(b+c)^{in}]
        for (int b = 0; b < N; ++b) {
          act[bg][B(i, b)] = fiber->sc(1, B(i, b), 1, B(j, b - c));
          act[bg][B(j, b)] = fiber->sc(1, B(j, b), 1, B(i, b + c));
        }
      }
    }
    tm->model = std::make_shared<SemidirectModel>(std::move(fiber), base->model, std::move(act));
  }
  cache[key] = tm;
  return tm;
}

// ---- defining relations (quadratic relators Sum c [g_i, g_j]) ----

struct QuadRelator {
  std::string name;
  std::vector<std::tuple<int, int, Rat>> terms;
};

inline std::vector<QuadRelator> tn_relators(int n) {
  auto tm = tn_model(n);
  std::vector<QuadRelator> rels;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        if (i == j || j == k || i == k) continue;
        QuadRelator r{"[t" + std::to_string(i) + std::to_string(j) + ",t" + std::to_string(i) +
                          std::to_string(k) + "+t" + std::to_string(j) + std::to_string(k) + "]",
                      {}};
        r.terms.push_back({tm->t(i, j), tm->t(i, k), Rat(1)});
        r.terms.push_back({tm->t(i, j), tm->t(j, k), Rat(1)});
        rels.push_back(std::move(r));
      }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = i + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          if (k == j || l == j) continue;
          if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
          rels.push_back({"[t" + std::to_string(i) + std::to_string(j) + ",t" +
                              std::to_string(k) + std::to_string(l) + "]",
                          {{tm->t(i, j), tm->t(k, l), Rat(1)}}});
        }
  return rels;
}

inline std::vector<QuadRelator> tnN_relators(int n, int N) {
  auto tm = tnN_model(n, N);
  std::vector<QuadRelator> rels;
  auto nm = [](const char* h, int i, int j, int a) {
    return std::string(h) + "(" + std::to_string(i) + "," + std::to_string(j) + ";" +
           std::to_string(a) + ")";
  };
  // [t(a)^{ij}, t(a+b)^{ik} + t(b)^{jk}]
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        if (i == j || j == k || i == k) continue;
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) {
            QuadRelator r{nm("R1", i, j, a) + std::to_string(k) + std::to_string(b), {}};
            r.terms.push_back({tm->y(i, j, a), tm->y(i, k, a + b), Rat(1)});
            r.terms.push_back({tm->y(i, j, a), tm->y(j, k, b), Rat(1)});
            rels.push_back(std::move(r));
          }
      }
  // [t_0^{0i} + t_0^{0j} + sum_b t(b)^{ij}, t(a)^{ij}]
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int a = 0; a < N; ++a) {
        QuadRelator r{nm("R2", i, j, a), {}};
        r.terms.push_back({tm->x0(i), tm->y(i, j, a), Rat(1)});
        r.terms.push_back({tm->x0(j), tm->y(i, j, a), Rat(1)});
        for (int b = 0; b < N; ++b) r.terms.push_back({tm->y(i, j, b), tm->y(i, j, a), Rat(1)});
        rels.push_back(std::move(r));
      }
  // [t_0^{0i}, t_0^{0j} + sum_b t(b)^{ij}] (both orders)
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      QuadRelator r{nm("R3", i, j, 0), {}};
      r.terms.push_back({tm->x0(i), tm->x0(j), Rat(1)});
      for (int b = 0; b < N; ++b) r.terms.push_back({tm->x0(i), tm->y(i, j, b), Rat(1)});
      rels.push_back(std::move(r));
    }
  // [t_0^{0i}, t(a)^{jk}]
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        if (i == j || i == k) continue;
        for (int a = 0; a < N; ++a)
          rels.push_back({nm("R4", j, k, a), {{tm->x0(i), tm->y(j, k, a), Rat(1)}}});
      }
  // [t(a)^{ij}, t(b)^{kl}]
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = i; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
          if (k == i || k == j || l == i || l == j) continue;
          for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
              rels.push_back({nm("R5", i, j, a) + std::to_string(b),
                              {{tm->y(i, j, a), tm->y(k, l, b), Rat(1)}}});
        }
  return rels;
}

// evaluate a relator in the model: image must be zero
inline HVec<Rat> relator_value(const Model& m, const QuadRelator& r) {
  HVec<Rat> out;
  for (auto& [i, j, c] : r.terms) hv_add(out, m.sc(1, i, 1, j), c);
  return out;
}

// independent oracle: dims of free Lie(m) / ideal(quadratic relators)
inline std::vector<int> quotient_dims(int m, const std::vector<QuadRelator>& rels, int D) {
  FreeModel f(m);
  std::vector<int> dims{0, m};
  std::vector<HVec<Rat>> span; // reduced row basis of the ideal slice
  {
    RatMat mat;
    mat.cols = f.dim(2);
    for (auto& r : rels) {
      HVec<Rat> v;
      for (auto& [i, j, c] : r.terms) hv_add(v, f.sc(1, i, 1, j), c);
      if (!v.empty()) mat.add_row(v);
    }
    auto ech = row_reduce(mat);
    dims.push_back(f.dim(2) - ech.rank());
    span = std::move(ech.rows);
  }
  for (int d = 3; d <= D; ++d) {
    RatMat mat;
    mat.cols = f.dim(d);
    for (auto& v : span)
      for (int l = 0; l < m; ++l) {
        HVec<Rat> e{{l, Rat(1)}};
        HVec<Rat> w = bracket_hh<Rat>(f, 1, e, d - 1, v);
        if (!w.empty()) mat.add_row(std::move(w));
      }
    auto ech = row_reduce(mat);
    dims.push_back(f.dim(d) - ech.rank());
    span = std::move(ech.rows);
  }
  return dims; // dims[d] for d = 0..D
}

// ---- symmetry action of (Z/NZ)^n x| S_n ----

inline const LieMorphism& TowerModel::sym(const Gamma0& g) const {
  auto key = std::make_pair(g.c, g.p);
  auto it = sym_cache_.find(key);
  if (it != sym_cache_.end()) return it->second;
  std::vector<HVec<Rat>> img(gens());
  for (int i = 1; i <= n; ++i) img[x0(i)] = {{x0(g.p[i - 1]), Rat(1)}};
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int a = 0; a < N; ++a) {
        int si = g.p[i - 1], sj = g.p[j - 1];
        img[y(i, j, a)] = {{y(si, sj, a + g.c[si - 1] - g.c[sj - 1]), Rat(1)}};
      }
  LieMorphism f(model.get(), model.get(), std::move(img));
  return sym_cache_.emplace(key, std::move(f)).first->second;
}

// ---- degreewise projections pi, delta : t_{n,N} -> t_{n,N'} for N'|N ----

inline LieMorphism pi_morphism(const TowerModel& src, const TowerModel& dst) {
  if (src.n != dst.n || dst.N == 0 || src.N % dst.N != 0)
    throw std::invalid_argument("pi: need same n and N'|N");
  int d = src.N / dst.N;
  std::vector<HVec<Rat>> img(src.gens());
  for (int i = 1; i <= src.n; ++i) img[src.x0(i)] = {{dst.x0(i), Rat(d)}};
  for (int i = 1; i <= src.n; ++i)
    for (int j = i + 1; j <= src.n; ++j)
      for (int a = 0; a < src.N; ++a) img[src.y(i, j, a)] = {{dst.y(i, j, a % dst.N), Rat(1)}};
  return LieMorphism(src.model.get(), dst.model.get(), std::move(img));
}

inline LieMorphism delta_morphism(const TowerModel& src, const TowerModel& dst) {
  if (src.n != dst.n || dst.N == 0 || src.N % dst.N != 0)
    throw std::invalid_argument("delta: need same n and N'|N");
  int d = src.N / dst.N;
  std::vector<HVec<Rat>> img(src.gens());
  for (int i = 1; i <= src.n; ++i) img[src.x0(i)] = {{dst.x0(i), Rat(1)}};
  for (int i = 1; i <= src.n; ++i)
    for (int j = i + 1; j <= src.n; ++j)
      for (int a = 0; a < src.N; ++a)
        if (a % d == 0) img[src.y(i, j, a)] = {{dst.y(i, j, a / d), Rat(1)}};
  return LieMorphism(src.model.get(), dst.model.get(), std::move(img));
}

// ---- insertion-coproduct morphisms ----
// groups[v] = f^{-1}(v); slots absent from every group are where f is
// undefined. For the t_{n,N} variant groups[0] contains 0.

inline void check_groups(const std::vector<std::vector<int>>& groups, bool with_zero) {
  if (with_zero &&
      (groups.empty() || std::find(groups[0].begin(), groups[0].end(), 0) == groups[0].end()))
    throw std::invalid_argument("insertion: f(0) must be 0");
}

inline LieMorphism insertion_tnN(const TowerModel& src, const TowerModel& dst,
                                 const std::vector<std::vector<int>>& groups) {
  check_groups(groups, true);
  if (static_cast<int>(groups.size()) != src.n + 1)
    throw std::invalid_argument("insertion: need n+1 groups");
  std::vector<HVec<Rat>> img(src.gens());
  auto nonzero = [](const std::vector<int>& g) {
    std::vector<int> r;
    for (int x : g)
      if (x != 0) r.push_back(x);
    return r;
  };
  for (int j = 1; j <= src.n; ++j) {
    HVec<Rat> v;
    for (int jp : groups[j]) v[dst.x0(jp)] += 1;
    for (int jp : groups[j])
      for (int jpp : groups[j])
        if (jp < jpp)
          for (int b = 0; b < src.N; ++b) v[dst.y(jp, jpp, b)] += 1;
    for (int ip : nonzero(groups[0]))
      for (int jp : groups[j])
        for (int b = 0; b < src.N; ++b) v[dst.y(ip, jp, b)] += 1;
    img[src.x0(j)] = std::move(v);
  }
  for (int i = 1; i <= src.n; ++i)
    for (int j = i + 1; j <= src.n; ++j)
      for (int a = 0; a < src.N; ++a) {
        HVec<Rat> v;
        for (int ip : groups[i])
          for (int jp : groups[j]) v[dst.y(ip, jp, a)] += 1;
        img[src.y(i, j, a)] = std::move(v);
      }
  return LieMorphism(src.model.get(), dst.model.get(), std::move(img));
}

// t_n -> t_{m,N}: (t^{ij})^f = sum t(0)^{i'j'}; groups[v-1] = f^{-1}(v)
inline LieMorphism insertion_tn_to_tnN(const TowerModel& src, const TowerModel& dst,
                                       const std::vector<std::vector<int>>& groups) {
  std::vector<HVec<Rat>> img(src.gens());
  for (int i = 1; i <= src.n; ++i)
    for (int j = i + 1; j <= src.n; ++j) {
      HVec<Rat> v;
      for (int ip : groups[i - 1])
        for (int jp : groups[j - 1]) v[dst.y(ip, jp, 0)] += 1;
      img[src.t(i, j)] = std::move(v);
    }
  return LieMorphism(src.model.get(), dst.model.get(), std::move(img));
}

inline LieMorphism insertion_tn(const TowerModel& src, const TowerModel& dst,
                                const std::vector<std::vector<int>>& groups) {
  std::vector<HVec<Rat>> img(src.gens());
  for (int i = 1; i <= src.n; ++i)
    for (int j = i + 1; j <= src.n; ++j) {
      HVec<Rat> v;
      for (int ip : groups[i - 1])
        for (int jp : groups[j - 1]) v[dst.t(ip, jp)] += 1;
      img[src.t(i, j)] = std::move(v);
    }
  return LieMorphism(src.model.get(), dst.model.get(), std::move(img));
}

// letter images for series given over free letters:
//   psi letters (A, b(0),...,b(N-1)), A = t_0^{01}, b(a) = t(a)^{12}
inline std::vector<HVec<Rat>> psi_letter_insertion(const TowerModel& dst,
                                                   const std::vector<int>& G0,
                                                   const std::vector<int>& G1,
                                                   const std::vector<int>& G2) {
  auto t2 = tnN_model(2, dst.N);
  LieMorphism f = insertion_tnN(*t2, dst, {G0, G1, G2});
  std::vector<HVec<Rat>> img;
  img.push_back(f.basis_image(1, t2->x0(1)));
  for (int a = 0; a < dst.N; ++a) img.push_back(f.basis_image(1, t2->y(1, 2, a)));
  return img;
}

inline const LieMorphism& TowerModel::sigma_insertion(int i) const {
  auto it = sigma_cache_.find(i);
  if (it != sigma_cache_.end()) return it->second;
  std::vector<int> G0, G1{i}, G2{i + 1};
  for (int k = 0; k < i; ++k) G0.push_back(k);
  LieMorphism f(&psi_free_model(N), model.get(), psi_letter_insertion(*this, G0, G1, G2));
  return sigma_cache_.emplace(i, std::move(f)).first->second;
}

//   phi letters (U, V) = (t^{12}, t^{23}) of t_3
inline std::vector<HVec<Rat>> phi_letter_insertion_tnN(const TowerModel& dst,
                                                       const std::vector<int>& G1,
                                                       const std::vector<int>& G2,
                                                       const std::vector<int>& G3) {
  auto t3 = tn_model(3);
  LieMorphism f = insertion_tn_to_tnN(*t3, dst, {G1, G2, G3});
  return {f.basis_image(1, t3->t(1, 2)), f.basis_image(1, t3->t(2, 3))};
}

inline std::vector<HVec<Rat>> phi_letter_insertion_tn(const TowerModel& dst,
                                                      const std::vector<int>& G1,
                                                      const std::vector<int>& G2,
                                                      const std::vector<int>& G3) {
  auto t3 = tn_model(3);
  LieMorphism f = insertion_tn(*t3, dst, {G1, G2, G3});
  return {f.basis_image(1, t3->t(1, 2)), f.basis_image(1, t3->t(2, 3))};
}

// apply letter images to a free-letter log series (as GVec over FreeModel)
template <class K>
GVec<K> apply_letter_images(const FreeModel& src, const Model& dst,
                            const std::vector<HVec<Rat>>& img, const GVec<K>& x) {
  LieMorphism f(&src, &dst, img);
  return f.apply(x);
}

// ---- semidirect group elements (exp t_{n,N}) x| Gamma_0 ----

template <class K>
struct SemiElt {
  GVec<K> x; // log of the group-like part
  Gamma0 g;
};

template <class K>
SemiElt<K> se_identity(const TowerModel& t, int D) {
  return {GVec<K>(D), g0_identity(t.n, t.N)};
}

template <class K>
SemiElt<K> se_mul(const TowerModel& t, const SemiElt<K>& a, const SemiElt<K>& b) {
  GVec<K> gb = t.sym(a.g).apply(b.x);
  return {bch_eval(*t.model, a.x, gb), g0_mul(a.g, b.g)};
}

template <class K>
SemiElt<K> se_inv(const TowerModel& t, const SemiElt<K>& a) {
  Gamma0 gi = g0_inv(a.g);
  return {t.sym(gi).apply(gv_scale(a.x, from_rat<K>(Rat(-1)))), gi};
}

template <class K>
SemiElt<K> se_prod(const TowerModel& t, const std::vector<SemiElt<K>>& fs) {
  SemiElt<K> r = fs.at(0);
  for (size_t i = 1; i < fs.size(); ++i) r = se_mul(t, r, fs[i]);
  return r;
}

template <class K>
SemiElt<K> se_pow(const TowerModel& t, const SemiElt<K>& a, int k) {
  if (k < 0) return se_pow(t, se_inv(t, a), -k);
  SemiElt<K> r = se_identity<K>(t, a.x.D);
  for (int i = 0; i < k; ++i) r = se_mul(t, r, a);
  return r;
}

template <class K>
SemiElt<K> se_conj(const TowerModel& t, const SemiElt<K>& g, const SemiElt<K>& x) {
  return se_mul(t, se_mul(t, g, x), se_inv(t, g));
}

template <class K>
SemiElt<K> se_commutator(const TowerModel& t, const SemiElt<K>& a, const SemiElt<K>& b) {
  return se_mul(t, se_mul(t, a, b), se_mul(t, se_inv(t, a), se_inv(t, b)));
}

// ---- monodromy images of the B_n^1 generators ----
// tau -> e^{(lambda/N) t_0^{01}} s_1^a
// sigma_i -> (Psi^{-1})^{0..i-1,i,i+1} (i,i+1) e^{(lambda/2) t(0)^{i i+1}} Psi^{0..i-1,i,i+1}

template <class K>
SemiElt<K> monodromy_tau(const TowerModel& t, int a, const K& lambda, int D) {
  SemiElt<K> r = se_identity<K>(t, D);
  r.x.at(1)[t.x0(1)] = lambda / from_rat<K>(Rat(t.N));
  Gamma0 s1 = g0_identity(t.n, t.N);
  s1.c[0] = ((a % t.N) + t.N) % t.N;
  r.g = s1;
  return r;
}

template <class K>
SemiElt<K> monodromy_sigma(const TowerModel& t, int i, const GVec<K>& psi_log,
                           const K& lambda) {
  int D = psi_log.D;
  const LieMorphism& f = t.sigma_insertion(i);
  SemiElt<K> psi{f.apply(psi_log), g0_identity(t.n, t.N)};
  SemiElt<K> psi_inv{gv_scale(psi.x, from_rat<K>(Rat(-1))), g0_identity(t.n, t.N)};
  SemiElt<K> swap = se_identity<K>(t, D);
  std::swap(swap.g.p[i - 1], swap.g.p[i]);
  SemiElt<K> mid = se_identity<K>(t, D);
  mid.x.at(1)[t.y(i, i + 1, 0)] = lambda / from_rat<K>(Rat(2));
  return se_prod<K>(t, {psi_inv, swap, mid, psi});
}

// ---- relations of the congruence kernel K_{n,N} through the monodromy ----
// Generators X_{0i} = x_{0i}^N and x_{ij}(alpha) = x_{0i}^alpha x_{ij} x_{0i}^{-alpha},
// with x_{0i}, x_{ij} the Artin-type words in tau, sigma_1..sigma_{n-1}.

template <class K>
struct KRelResult {
  std::string name;
  Real residual;
  bool group_identity;
};

template <class K>
class KGroup {
public:
  KGroup(std::shared_ptr<const TowerModel> t, int a, const GVec<K>& psi_log, const K& lambda)
      : t_(std::move(t)), D_(psi_log.D), tau_(monodromy_tau(*t_, a, lambda, D_)) {
    for (int i = 1; i < t_->n; ++i) sig_.push_back(monodromy_sigma(*t_, i, psi_log, lambda));
  }

  const TowerModel& tower() const { return *t_; }
  const SemiElt<K>& tau() const { return tau_; }
  const SemiElt<K>& sigma(int i) const { return sig_.at(i - 1); }

  // x_{0i} = (sigma_{i-1}..sigma_1) tau (sigma_1..sigma_{i-1})^{-1}
  const SemiElt<K>& x0i(int i) {
    auto it = x0i_.find(i);
    if (it != x0i_.end()) return it->second;
    SemiElt<K> c = se_identity<K>(*t_, D_);
    for (int k = i - 1; k >= 1; --k) c = se_mul(*t_, c, sigma(k));
    return x0i_.emplace(i, se_conj(*t_, c, tau_)).first->second;
  }

  const SemiElt<K>& X0(int i) {
    auto it = X0_.find(i);
    if (it != X0_.end()) return it->second;
    return X0_.emplace(i, se_pow(*t_, x0i(i), t_->N)).first->second;
  }

  // x_{ij} = (sigma_{j-1}..sigma_{i+1}) sigma_i^2 (sigma_{i+1}..sigma_{j-1})^{-1}
  const SemiElt<K>& x(int i, int j, int alpha) {
    auto key = std::make_tuple(i, j, alpha);
    auto it = x_.find(key);
    if (it != x_.end()) return it->second;
    SemiElt<K> v;
    if (alpha == 0) {
      SemiElt<K> c = se_identity<K>(*t_, D_);
      for (int k = j - 1; k >= i + 1; --k) c = se_mul(*t_, c, sigma(k));
      v = se_conj(*t_, c, se_mul(*t_, sigma(i), sigma(i)));
    } else if (alpha > 0) {
      v = se_conj(*t_, x0i(i), x(i, j, alpha - 1));
    } else {
      v = se_conj(*t_, se_inv(*t_, x0i(i)), x(i, j, alpha + 1));
    }
    return x_.emplace(key, std::move(v)).first->second;
  }

  // x(s) x(s+1) .. x(s+cnt-1); for cnt<0 this means x(s-1)^{-1}..x(s+cnt)^{-1}
  SemiElt<K> range(int i, int k, int s, int cnt) {
    SemiElt<K> r = se_identity<K>(*t_, D_);
    if (cnt >= 0)
      for (int q = 0; q < cnt; ++q) r = se_mul(*t_, r, x(i, k, s + q));
    else
      for (int q = 1; q <= -cnt; ++q) r = se_mul(*t_, r, se_inv(*t_, x(i, k, s - q)));
    return r;
  }

  SemiElt<K> u(int i, int k, int alpha, int beta) {
    return se_mul(*t_, range(i, k, alpha, beta), se_inv(*t_, range(i, k, 0, beta)));
  }

  // x_{ik}(gamma|alpha) = Ad[x_{ik}(alpha)..x_{ik}(gamma-1)](x_{ik}(gamma))
  SemiElt<K> xrel(int i, int k, int gamma, int alpha) {
    return se_conj(*t_, range(i, k, alpha, gamma - alpha), x(i, k, gamma));
  }

  KRelResult<K> commutes(const std::string& name, const SemiElt<K>& g, const SemiElt<K>& h) {
    SemiElt<K> c = se_commutator(*t_, g, h);
    return {name, gv_max_abs(c.x), g0_is_identity(c.g)};
  }

  // full relation sweep; alphas/betas are the sampled integer parameters
  std::vector<KRelResult<K>> check_all(const std::vector<int>& alphas,
                                       const std::vector<int>& betas) {
    std::vector<KRelResult<K>> out;
    int n = t_->n, N = t_->N;
    auto tag = [](const char* base, std::initializer_list<int> idx) {
      std::string s = base;
      for (int v : idx) s += "," + std::to_string(v);
      return s;
    };
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        SemiElt<K> p = X0(j);
        for (int a = 0; a < N; ++a) p = se_mul(*t_, p, x(i, j, a));
        p = se_mul(*t_, p, X0(i));
        out.push_back(commutes(tag("central", {i, j}), p, X0(j)));
        for (int a : alphas) out.push_back(commutes(tag("central", {i, j, a}), p, x(i, j, a)));
      }
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) {
          for (int a : alphas)
            for (int b : betas) {
              SemiElt<K> q = se_mul(
                  *t_, se_mul(*t_, x(i, j, a), xrel(i, k, a + b, a)),
                  se_conj(*t_, u(i, k, a, b), xrel(j, k, b, 0)));
              out.push_back(commutes(tag("triple", {i, j, k, a, b}), q, x(i, j, a)));
              out.push_back(commutes(tag("triple'", {i, j, k, a, b}), q, xrel(i, k, a + b, a)));
            }
          for (int a : alphas) {
            out.push_back(commutes(tag("power", {i, j, k, a}),
                                   se_mul(*t_, se_inv(*t_, u(i, j, N, -a)), X0(i)), x(j, k, a)));
            out.push_back(commutes(tag("power'", {i, j, k, a}),
                                   se_mul(*t_, u(i, k, a, -N), X0(k)), x(i, j, a)));
            out.push_back(commutes(tag("power''", {i, j, k, a}),
                                   se_mul(*t_, u(i, j, a + 1, -N), X0(j)), x(i, k, a)));
          }
        }
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k)
          for (int l = k + 1; l <= n; ++l)
            for (int a : alphas)
              for (int b : betas) {
                out.push_back(commutes(tag("quad", {i, j, k, l, a, b}), x(i, j, a),
                                       se_conj(*t_, u(i, k, a, -b), x(k, l, b))));
                out.push_back(commutes(
                    tag("quad'", {i, j, k, l, a, b}),
                    se_conj(*t_, se_inv(*t_, u(i, j, a + 1, -b)), x(i, l, a)), x(j, k, b)));
                out.push_back(commutes(
                    tag("quad''", {i, j, k, l, a, b}),
                    se_conj(*t_, se_inv(*t_, u(i, j, a + 1, -b - 1)), x(i, k, a)),
                    se_conj(*t_, se_mul(*t_, se_inv(*t_, u(i, j, a, -b - 1)), u(i, j, a, -b)),
                            x(j, l, b))));
              }
    return out;
  }

private:
  std::shared_ptr<const TowerModel> t_;
  int D_;
  SemiElt<K> tau_;
  std::vector<SemiElt<K>> sig_;
  std::map<int, SemiElt<K>> x0i_, X0_;
  std::map<std::tuple<int, int, int>, SemiElt<K>> x_;
};

// central element Z = sum_{0<=i<j<=n} t_0^{ij}, with t_0^{ij} = sum_a t(a)^{ij}
inline HVec<Rat> central_element(const TowerModel& t) {
  HVec<Rat> z;
  for (int i = 1; i <= t.n; ++i) z[t.x0(i)] += 1;
  for (int i = 1; i <= t.n; ++i)
    for (int j = i + 1; j <= t.n; ++j)
      for (int a = 0; a < t.N; ++a) z[t.y(i, j, a)] += 1;
  return z;
}

// quotient by the center: t_{2,N} -> free on (A, b(0..N-1)); t_0^{02} -> -A - sum_b b
inline LieMorphism t2N_reduce(const TowerModel& t2) {
  const FreeModel& f = psi_free_model(t2.N);
  std::vector<HVec<Rat>> img(t2.gens());
  img[t2.x0(1)] = {{0, Rat(1)}};
  for (int a = 0; a < t2.N; ++a) img[t2.y(1, 2, a)] = {{1 + a, Rat(1)}};
  HVec<Rat> c{{0, Rat(-1)}};
  for (int a = 0; a < t2.N; ++a) c[1 + a] -= 1;
  img[t2.x0(2)] = std::move(c);
  return LieMorphism(t2.model.get(), &f, std::move(img));
}

// quotient by the center: t_3 -> free on (t12, t23); t13 -> -t12 - t23
inline LieMorphism t3_reduce() {
  auto t3 = tn_model(3);
  const FreeModel& f = phi_free_model();
  std::vector<HVec<Rat>> img(t3->gens());
  img[t3->t(1, 2)] = {{0, Rat(1)}};
  img[t3->t(2, 3)] = {{1, Rat(1)}};
  img[t3->t(1, 3)] = {{0, Rat(-1)}, {1, Rat(-1)}};
  return LieMorphism(t3->model.get(), &f, std::move(img));
}

} // namespace cyclo
