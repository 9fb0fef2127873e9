#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cyclo/axioms.hpp"
#include "cyclo/linalg.hpp"

// Graded Lie algebras of associator symmetries: the classical one on two
// letters, its level-N refinement on (A, b(0..N-1)), and the distribution
// subalgebra; Ihara bracket, group law with exponential, right action on
// pseudotwists, torsor solving and the sign involution. Solution spaces are
// exact rational nullspaces of the compiled linear conditions.

namespace cyclo {

template <class K>
struct GrtmTangent {
  int N = 1, n = 1;
  GVec<K> phi; // free Lie on (U, V), homogeneous of degree n
  GVec<K> psi; // free Lie on (A, b(0..N-1)), homogeneous of degree n
};

namespace grt_detail {

inline HVec<Rat> unit(int i) { return HVec<Rat>{{i, Rat(1)}}; }

inline HVec<Rat> psi_c_img(int N) {
  HVec<Rat> c;
  for (int i = 0; i <= N; ++i) c[i] = Rat(-1);
  return c;
}

inline const LieMorphism& psi_shift_lm(int N, int k) {
  static std::map<std::pair<int, int>, std::unique_ptr<LieMorphism>> cache;
  auto key = std::make_pair(N, ((k % N) + N) % N);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const FreeModel& f = psi_free_model(N);
    std::vector<HVec<Rat>> img{unit(0)};
    for (int j = 0; j < N; ++j) img.push_back(unit(1 + (j + key.second) % N));
    it = cache.emplace(key, std::make_unique<LieMorphism>(&f, &f, std::move(img))).first;
  }
  return *it->second;
}

inline const LieMorphism& psi_crefl_lm(int N, int k) {
  static std::map<std::pair<int, int>, std::unique_ptr<LieMorphism>> cache;
  auto key = std::make_pair(N, ((k % N) + N) % N);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const FreeModel& f = psi_free_model(N);
    std::vector<HVec<Rat>> img{psi_c_img(N)};
    for (int j = 0; j < N; ++j) img.push_back(unit(1 + (((key.second - j) % N) + N) % N));
    it = cache.emplace(key, std::make_unique<LieMorphism>(&f, &f, std::move(img))).first;
  }
  return *it->second;
}

// units of Z/N act by b(a) -> b(ca); A is fixed
inline const LieMorphism& psi_scale_lm(int N, int c) {
  static std::map<std::pair<int, int>, std::unique_ptr<LieMorphism>> cache;
  auto key = std::make_pair(N, ((c % N) + N) % N);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const FreeModel& f = psi_free_model(N);
    std::vector<HVec<Rat>> img{unit(0)};
    for (int j = 0; j < N; ++j) img.push_back(unit(1 + (j * key.second) % N));
    it = cache.emplace(key, std::make_unique<LieMorphism>(&f, &f, std::move(img))).first;
  }
  return *it->second;
}

inline const LieMorphism& pi_lm(int N, int Np) {
  static std::map<std::pair<int, int>, std::unique_ptr<LieMorphism>> cache;
  auto key = std::make_pair(N, Np);
  auto it = cache.find(key);
  if (it == cache.end()) {
    int d = N / Np;
    std::vector<HVec<Rat>> img{HVec<Rat>{{0, Rat(d)}}};
    for (int j = 0; j < N; ++j) img.push_back(unit(1 + j % Np));
    it = cache
             .emplace(key, std::make_unique<LieMorphism>(&psi_free_model(N), &psi_free_model(Np),
                                                         std::move(img)))
             .first;
  }
  return *it->second;
}

inline const LieMorphism& delta_lm(int N, int Np) {
  static std::map<std::pair<int, int>, std::unique_ptr<LieMorphism>> cache;
  auto key = std::make_pair(N, Np);
  auto it = cache.find(key);
  if (it == cache.end()) {
    int d = N / Np;
    std::vector<HVec<Rat>> img{unit(0)};
    for (int j = 0; j < N; ++j) img.push_back(j % d == 0 ? unit(1 + j / d) : HVec<Rat>{});
    it = cache
             .emplace(key, std::make_unique<LieMorphism>(&psi_free_model(N), &psi_free_model(Np),
                                                         std::move(img)))
             .first;
  }
  return *it->second;
}

// phi substitutions (U,V) -> (V,U), (V,W), (W,U), (U,W) with W = -U-V
inline const LieMorphism& phi_subst_lm(int which) {
  static std::map<int, std::unique_ptr<LieMorphism>> cache;
  auto it = cache.find(which);
  if (it == cache.end()) {
    const FreeModel& f = phi_free_model();
    HVec<Rat> U = unit(0), V = unit(1), W{{0, Rat(-1)}, {1, Rat(-1)}};
    std::vector<HVec<Rat>> img;
    if (which == 0)
      img = {V, U};
    else if (which == 1)
      img = {V, W};
    else if (which == 2)
      img = {W, U};
    else
      img = {U, W};
    it = cache.emplace(which, std::make_unique<LieMorphism>(&f, &f, std::move(img))).first;
  }
  return *it->second;
}

template <class K>
GVec<K> pad(const GVec<K>& x, int D) {
  GVec<K> r(D);
  for (int d = 1; d <= std::min(D, x.D); ++d) r.at(d) = x.at(d);
  return r;
}

template <class K>
GVec<K> letter_gvec(int letter, int D) {
  GVec<K> r(D);
  r.at(1)[letter] = from_rat<K>(Rat(1));
  return r;
}

} // namespace grt_detail

// ---- linear membership conditions, evaluated on homogeneous vectors ----

// phi(V,U) + phi(U,V)
template <class K>
GVec<K> grt_duality_value(const GVec<K>& phi) {
  return gv_add(grt_detail::phi_subst_lm(0).apply(phi), phi, from_rat<K>(Rat(1)));
}

// phi(U,V) + phi(V,W) + phi(W,U), W = -U-V
template <class K>
GVec<K> grt_hexsum_value(const GVec<K>& phi) {
  GVec<K> r = gv_add(phi, grt_detail::phi_subst_lm(1).apply(phi), from_rat<K>(Rat(1)));
  return gv_add(r, grt_detail::phi_subst_lm(2).apply(phi), from_rat<K>(Rat(1)));
}

// [V, phi(U,V)] + [W, phi(U,W)]; one degree up
template <class K>
GVec<K> grt_addcond_value(const GVec<K>& phi) {
  const FreeModel& f = phi_free_model();
  int D = phi.D + 1;
  GVec<K> U = grt_detail::letter_gvec<K>(0, D), V = grt_detail::letter_gvec<K>(1, D);
  GVec<K> W = gv_add(gv_scale(U, from_rat<K>(Rat(-1))), V, from_rat<K>(Rat(-1)));
  GVec<K> r = gv_bracket(f, V, grt_detail::pad(phi, D));
  GVec<K> t = gv_bracket(f, W, grt_detail::pad(grt_detail::phi_subst_lm(3).apply(phi), D));
  return gv_add(r, t, from_rat<K>(Rat(1)));
}

// phi^{1,2,34} + phi^{12,3,4} - phi^{2,3,4} - phi^{1,23,4} - phi^{1,2,3} in t_4
template <class K>
GVec<K> grt_pentagon_value(const GVec<K>& phi) {
  auto t4 = tn_model(4);
  const FreeModel& fp = phi_free_model();
  auto f = [&](std::vector<int> g1, std::vector<int> g2, std::vector<int> g3) {
    return apply_letter_images(fp, *t4->model, phi_letter_insertion_tn(*t4, g1, g2, g3), phi);
  };
  GVec<K> r = gv_add(f({1}, {2}, {3, 4}), f({1, 2}, {3}, {4}), from_rat<K>(Rat(1)));
  r = gv_add(r, f({2}, {3}, {4}), from_rat<K>(Rat(-1)));
  r = gv_add(r, f({1}, {2, 3}, {4}), from_rat<K>(Rat(-1)));
  return gv_add(r, f({1}, {2}, {3}), from_rat<K>(Rat(-1)));
}

// psi(A|b0,..) - psi(A|b1,..) + psi(C|b1,b0,..) - psi(C|b0,b(-1),..)
template <class K>
GVec<K> grtm_octogon_value(int N, const GVec<K>& psi) {
  using namespace grt_detail;
  GVec<K> r = gv_add(psi, psi_shift_lm(N, 1).apply(psi), from_rat<K>(Rat(-1)));
  r = gv_add(r, psi_crefl_lm(N, 1).apply(psi), from_rat<K>(Rat(1)));
  return gv_add(r, psi_crefl_lm(N, 0).apply(psi), from_rat<K>(Rat(-1)));
}

// [psi(A|b0,..) - psi(C|b0,..), C] + sum_a [psi(A|b(a),..), b(a)]; one degree up
template <class K>
GVec<K> grtm_addcond_value(int N, const GVec<K>& psi) {
  using namespace grt_detail;
  const FreeModel& f = psi_free_model(N);
  int D = psi.D + 1;
  GVec<K> c(D);
  hv_axpy(c.at(1), from_rat<K>(Rat(1)), psi_c_img(N));
  GVec<K> head = gv_add(psi, psi_crefl_lm(N, 0).apply(psi), from_rat<K>(Rat(-1)));
  GVec<K> r = gv_bracket(f, pad(head, D), c);
  for (int a = 0; a < N; ++a) {
    GVec<K> t =
        gv_bracket(f, pad(psi_shift_lm(N, a).apply(psi), D), letter_gvec<K>(1 + a, D));
    r = gv_add(r, t, from_rat<K>(Rat(1)));
  }
  return r;
}

// psi^{0,1,23} + psi^{01,2,3} - phi^{1,2,3} - psi^{0,12,3} - psi^{0,1,2}
// in the three-strand level-N tower (strand 0 carries the pole)
template <class K>
GVec<K> grtm_pentagon_value(int N, const GVec<K>& phi, const GVec<K>& psi) {
  auto t3n = tnN_model(3, N);
  const FreeModel& fs = psi_free_model(N);
  const FreeModel& fp = phi_free_model();
  auto f = [&](std::vector<int> g0, std::vector<int> g1, std::vector<int> g2) {
    return apply_letter_images(fs, *t3n->model, psi_letter_insertion(*t3n, g0, g1, g2), psi);
  };
  GVec<K> r = gv_add(f({0}, {1}, {2, 3}), f({0, 1}, {2}, {3}), from_rat<K>(Rat(1)));
  GVec<K> p = apply_letter_images(fp, *t3n->model,
                                  phi_letter_insertion_tnN(*t3n, {1}, {2}, {3}), phi);
  r = gv_add(r, p, from_rat<K>(Rat(-1)));
  r = gv_add(r, f({0}, {1, 2}, {3}), from_rat<K>(Rat(-1)));
  return gv_add(r, f({0}, {1}, {2}), from_rat<K>(Rat(-1)));
}

// pi_{NN'}(psi) - delta_{NN'}(psi) over the level-N' letters; at degree 1 the
// b'(0) mismatch rho b'(0) is allowed, so that coordinate can be dropped
template <class K>
GVec<K> dist_defect_value(int N, int Np, const GVec<K>& psi, bool drop_b0 = false) {
  using namespace grt_detail;
  GVec<K> r = gv_add(pi_lm(N, Np).apply(psi), delta_lm(N, Np).apply(psi), from_rat<K>(Rat(-1)));
  if (drop_b0 && r.D >= 1) r.at(1).erase(1);
  return r;
}

template <class K>
K dist_rho(int N, int Np, const GVec<K>& psi) {
  K out = coeff_zero<K>();
  if (psi.D >= 1) {
    HVec<K> img = grt_detail::pi_lm(N, Np).apply(psi).at(1);
    auto it = img.find(1);
    if (it != img.end()) out += it->second;
    auto jt = psi.at(1).find(1);
    if (jt != psi.at(1).end()) out -= jt->second;
  }
  return out;
}

inline std::vector<int> proper_divisors(int N) {
  std::vector<int> out;
  for (int m = 1; m < N; ++m)
    if (N % m == 0) out.push_back(m);
  return out;
}

// max absolute coordinate over every membership condition of the given kind
template <class K>
Real grtm_membership_residual(const std::string& kind, const GrtmTangent<K>& t) {
  Real worst = gv_max_abs(grt_duality_value(t.phi));
  worst = std::max(worst, gv_max_abs(grt_hexsum_value(t.phi)));
  worst = std::max(worst, gv_max_abs(grt_addcond_value(t.phi)));
  worst = std::max(worst, gv_max_abs(grt_pentagon_value(t.phi)));
  if (kind == "grt1") return worst;
  worst = std::max(worst, gv_max_abs(grtm_octogon_value(t.N, t.psi)));
  worst = std::max(worst, gv_max_abs(grtm_addcond_value(t.N, t.psi)));
  worst = std::max(worst, gv_max_abs(grtm_pentagon_value(t.N, t.phi, t.psi)));
  if (kind == "grtm") return worst;
  if (kind != "grtmd") throw std::invalid_argument("unknown kind " + kind);
  for (int Np : proper_divisors(t.N))
    worst = std::max(worst, gv_max_abs(dist_defect_value(t.N, Np, t.psi, t.n == 1)));
  return worst;
}

// ---- exact graded pieces ----

struct GradedPiece {
  std::string kind;
  int N = 1, n = 1;
  std::vector<GrtmTangent<Rat>> basis;
  std::vector<int> divisors;          // proper divisors N' of N (grtmd, degree 1)
  std::vector<std::vector<Rat>> rho;  // rho_{N N'} per basis vector, aligned with divisors
  int dim() const { return static_cast<int>(basis.size()); }
};

namespace grt_detail {

// rows of a linear condition evaluated on each unit coordinate vector
template <class F>
void append_condition(RatMat& M, int first_col, int count, F&& value_of_unit) {
  std::vector<std::map<int, Rat>> rows;
  std::map<std::pair<int, int>, int> row_of; // (degree, basis index) -> row
  for (int j = 0; j < count; ++j) {
    GVec<Rat> val = value_of_unit(j);
    for (int d = 1; d <= val.D; ++d)
      for (auto& [i, v] : val.at(d)) {
        auto key = std::make_pair(d, i);
        auto it = row_of.find(key);
        if (it == row_of.end()) {
          it = row_of.emplace(key, static_cast<int>(rows.size())).first;
          rows.emplace_back();
        }
        rows[it->second][first_col + j] = v;
      }
  }
  for (auto& r : rows) M.add_row(std::move(r));
}

} // namespace grt_detail

// Nullspace of the level-N degree-n conditions; the octogon and distribution
// blocks can be toggled (the octogon is implied by the bracket condition, and
// the distribution block turns grtm into grtmd). Degree 1 is normalized to
// the + complement of the central line k (0, b(0)).
inline GradedPiece grtm_piece(int N, int n, bool with_octogon, bool with_dist) {
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(N);
  int p = fp.dim(n), q = fs.dim(n);
  auto unit_phi = [&](int j) {
    GVec<Rat> e(n);
    e.at(n)[j] = Rat(1);
    return e;
  };
  auto unit_psi = [&](int j) {
    GVec<Rat> e(n);
    e.at(n)[j] = Rat(1);
    return e;
  };
  RatMat M;
  M.cols = p + q;
  using grt_detail::append_condition;
  append_condition(M, 0, p, [&](int j) { return grt_duality_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_hexsum_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_addcond_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_pentagon_value(unit_phi(j)); });
  if (with_octogon)
    append_condition(M, p, q, [&](int j) { return grtm_octogon_value(N, unit_psi(j)); });
  append_condition(M, p, q, [&](int j) { return grtm_addcond_value(N, unit_psi(j)); });
  {
    // the mixed pentagon couples phi and psi: assemble jointly
    std::vector<std::map<int, Rat>> rows;
    std::map<std::pair<int, int>, int> row_of;
    auto scatter = [&](int col, const GVec<Rat>& val) {
      for (int d = 1; d <= val.D; ++d)
        for (auto& [i, v] : val.at(d)) {
          auto key = std::make_pair(d, i);
          auto it = row_of.find(key);
          if (it == row_of.end()) {
            it = row_of.emplace(key, static_cast<int>(rows.size())).first;
            rows.emplace_back();
          }
          rows[it->second][col] = v;
        }
    };
    GVec<Rat> zpsi(n), zphi(n);
    for (int j = 0; j < p; ++j) scatter(j, grtm_pentagon_value(N, unit_phi(j), zpsi));
    for (int j = 0; j < q; ++j) scatter(p + j, grtm_pentagon_value(N, zphi, unit_psi(j)));
    for (auto& r : rows) M.add_row(std::move(r));
  }
  if (with_dist)
    for (int Np : proper_divisors(N))
      append_condition(M, p, q,
                       [&](int j) { return dist_defect_value(N, Np, unit_psi(j), n == 1); });
  if (n == 1) {
    // split off the central line k (0, b(0)): keep the + complement
    std::map<int, Rat> row;
    row[p + 1] = Rat(1);
    M.add_row(std::move(row));
  }
  GradedPiece out;
  out.kind = with_dist ? "grtmd" : "grtm";
  out.N = N;
  out.n = n;
  for (auto& v : nullspace(M)) {
    GrtmTangent<Rat> t{N, n, GVec<Rat>(n), GVec<Rat>(n)};
    for (int j = 0; j < p; ++j)
      if (!v[j].is_zero()) t.phi.at(n)[j] = v[j];
    for (int j = 0; j < q; ++j)
      if (!v[p + j].is_zero()) t.psi.at(n)[j] = v[p + j];
    out.basis.push_back(std::move(t));
  }
  if (with_dist && n == 1) {
    out.divisors = proper_divisors(N);
    for (auto& t : out.basis) {
      std::vector<Rat> rhos;
      for (int Np : out.divisors) rhos.push_back(dist_rho(N, Np, t.psi));
      out.rho.push_back(std::move(rhos));
    }
  }
  return out;
}

inline GradedPiece grt1_piece(int n) {
  const FreeModel& fp = phi_free_model();
  int p = fp.dim(n);
  auto unit_phi = [&](int j) {
    GVec<Rat> e(n);
    e.at(n)[j] = Rat(1);
    return e;
  };
  RatMat M;
  M.cols = p;
  using grt_detail::append_condition;
  append_condition(M, 0, p, [&](int j) { return grt_duality_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_hexsum_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_addcond_value(unit_phi(j)); });
  append_condition(M, 0, p, [&](int j) { return grt_pentagon_value(unit_phi(j)); });
  GradedPiece out;
  out.kind = "grt1";
  out.n = n;
  for (auto& v : nullspace(M)) {
    GrtmTangent<Rat> t{1, n, GVec<Rat>(n), GVec<Rat>(n)};
    for (int j = 0; j < p; ++j)
      if (!v[j].is_zero()) t.phi.at(n)[j] = v[j];
    out.basis.push_back(std::move(t));
  }
  return out;
}

inline GradedPiece graded_piece(const std::string& kind, int N, int n) {
  if (kind == "grt1") return grt1_piece(n);
  if (kind == "grtm") return grtm_piece(N, n, true, false);
  if (kind == "grtmd") return grtm_piece(N, n, true, true);
  throw std::invalid_argument("graded_piece: unknown kind " + kind);
}

// ---- Ihara bracket ----

namespace grt_detail {

// derivation of a free Lie algebra from homogeneous generator images
template <class K>
struct FreeDer {
  const FreeModel* f;
  std::vector<HVec<K>> img; // image of generator i, homogeneous of degree 1+shift
  int shift;
  std::map<std::pair<int, int>, HVec<K>> memo;

  const HVec<K>& on_basis(int d, int i) {
    auto key = std::make_pair(d, i);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    HVec<K> out;
    if (d == 1) {
      out = img[i];
    } else {
      auto [L, R] = f->split(d, i);
      HVec<K> eL, eR;
      eL[L.second] = from_rat<K>(Rat(1));
      eR[R.second] = from_rat<K>(Rat(1));
      out = bracket_hh(*f, L.first + shift, on_basis(L.first, L.second), R.first, eR);
      HVec<K> t = bracket_hh(*f, L.first, eL, R.first + shift, on_basis(R.first, R.second));
      hv_add(out, t, from_rat<K>(Rat(1)));
    }
    return memo.emplace(key, std::move(out)).first->second;
  }

  GVec<K> apply(const GVec<K>& x, int D) {
    GVec<K> r(D);
    for (int d = 1; d <= x.D; ++d) {
      if (d + shift > D) continue;
      for (auto& [i, v] : x.at(d)) hv_add(r.at(d + shift), on_basis(d, i), v);
    }
    return r;
  }
};

// D_phi: U -> [phi, U], V -> 0
template <class K>
GVec<K> grt_der(const GVec<K>& phi, const GVec<K>& x, int D) {
  const FreeModel& f = phi_free_model();
  int n = phi.D;
  GVec<K> U = letter_gvec<K>(0, n + 1);
  FreeDer<K> der{&f, {gv_bracket(f, pad(phi, n + 1), U).at(n + 1), HVec<K>{}}, n, {}};
  return der.apply(x, D);
}

// Dbar_psi: A -> [psi, A], b(a) -> [psi(A|b0..) - psi(A|b(a)..), b(a)]
template <class K>
GVec<K> grtm_der(int N, const GVec<K>& psi, const GVec<K>& x, int D) {
  const FreeModel& f = psi_free_model(N);
  int n = psi.D;
  std::vector<HVec<K>> img;
  img.push_back(gv_bracket(f, pad(psi, n + 1), letter_gvec<K>(0, n + 1)).at(n + 1));
  for (int a = 0; a < N; ++a) {
    GVec<K> head = gv_add(psi, psi_shift_lm(N, a).apply(psi), from_rat<K>(Rat(-1)));
    img.push_back(gv_bracket(f, pad(head, n + 1), letter_gvec<K>(1 + a, n + 1)).at(n + 1));
  }
  FreeDer<K> der{&f, std::move(img), n, {}};
  return der.apply(x, D);
}

} // namespace grt_detail

// <x,y> = [x,y] + D_y(x) - D_x(y), componentwise on (phi, psi)
template <class K>
GrtmTangent<K> ihara_bracket(const GrtmTangent<K>& x, const GrtmTangent<K>& y) {
  if (x.N != y.N) throw std::invalid_argument("ihara_bracket: level mismatch");
  using namespace grt_detail;
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(x.N);
  int D = x.n + y.n;
  GrtmTangent<K> r{x.N, D, GVec<K>(D), GVec<K>(D)};
  r.phi = gv_bracket(fp, pad(x.phi, D), pad(y.phi, D));
  r.phi = gv_add(r.phi, grt_der(y.phi, x.phi, D), from_rat<K>(Rat(1)));
  r.phi = gv_add(r.phi, grt_der(x.phi, y.phi, D), from_rat<K>(Rat(-1)));
  r.psi = gv_bracket(fs, pad(x.psi, D), pad(y.psi, D));
  r.psi = gv_add(r.psi, grtm_der(x.N, y.psi, x.psi, D), from_rat<K>(Rat(1)));
  r.psi = gv_add(r.psi, grtm_der(x.N, x.psi, y.psi, D), from_rat<K>(Rat(-1)));
  return r;
}

// ---- the group: substitution product, exponential, action, torsor ----

template <class K>
struct GRTMElement {
  int N = 1, D = 0;
  Series<K> h; // letters (U, V)
  Series<K> k; // letters (A, b(0..N-1))
};

template <class K>
GRTMElement<K> grtm_identity(int N, int D) {
  return {N, D, series_one<K>(D), series_one<K>(D)};
}

template <class K>
GRTMElement<K> grtm_mul(const GRTMElement<K>& g1, const GRTMElement<K>& g2) {
  if (g1.N != g2.N || g1.D != g2.D) throw std::invalid_argument("grtm_mul: shape mismatch");
  int N = g1.N, D = g1.D;
  GRTMElement<K> r{N, D, Series<K>(D), Series<K>(D)};
  Series<K> ih2 = inverse_trunc(g2.h);
  Series<K> adV = series_mul(series_mul(ih2, series_letter<K>(1, D)), g2.h);
  r.h = series_mul(g2.h, substitute(g1.h, {series_letter<K>(0, D), adV}));
  std::vector<Series<K>> img{series_letter<K>(0, D)};
  for (int a = 0; a < N; ++a) {
    Series<K> sk = detail::psi_shift(g2.k, N, a);
    img.push_back(series_mul(series_mul(inverse_trunc(sk), series_letter<K>(1 + a, D)), sk));
  }
  r.k = series_mul(g2.k, substitute(g1.k, img));
  return r;
}

namespace grt_detail {

// Leibniz extension of letter images to a derivation of the word algebra
template <class K>
Series<K> series_derivation(const Series<K>& x, const std::vector<Series<K>>& letter_img) {
  int D = x.D;
  Series<K> out(D);
  for (auto& [w, c] : x.c)
    for (size_t i = 0; i < w.size(); ++i) {
      const Series<K>& g = letter_img[static_cast<unsigned char>(w[i])];
      if (g.c.empty()) continue;
      Word pre = w.substr(0, i), post = w.substr(i + 1);
      for (auto& [u, cu] : g.c) {
        if (pre.size() + u.size() + post.size() > static_cast<size_t>(D)) continue;
        K tmp = c * cu;
        out.add(pre + u + post, tmp);
      }
    }
  return out;
}

// exp of the linear flow X -> gen X - E(X) applied to 1
template <class K>
Series<K> flow_exp(const Series<K>& gen, const std::vector<Series<K>>& dimg, int D) {
  Series<K> acc = series_one<K>(D);
  Series<K> cur = series_one<K>(D);
  Rat fact(1);
  for (int k = 1; k <= D; ++k) {
    cur = series_mul(gen, cur) - series_derivation(cur, dimg);
    fact *= k;
    Rat inv = Rat(1) / fact;
    acc = acc + cur * from_rat<K>(inv);
    if (cur.c.empty()) break;
  }
  return acc;
}

} // namespace grt_detail

// group exponential: the time-1 flow of the right-translation field of the sum
template <class K>
GRTMElement<K> grtm_exp(const std::vector<GrtmTangent<K>>& xs, int D) {
  if (xs.empty()) throw std::invalid_argument("grtm_exp: empty tangent list");
  int N = xs[0].N;
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(N);
  Series<K> phi(D), psi(D);
  for (auto& x : xs) {
    if (x.N != N) throw std::invalid_argument("grtm_exp: level mismatch");
    phi = phi + gvec_to_series(fp, grt_detail::pad(x.phi, D));
    psi = psi + gvec_to_series(fs, grt_detail::pad(x.psi, D));
  }
  GRTMElement<K> r{N, D, Series<K>(D), Series<K>(D)};
  {
    Series<K> V = series_letter<K>(1, D);
    Series<K> dV = series_mul(phi, V) - series_mul(V, phi);
    r.h = grt_detail::flow_exp(phi, {Series<K>(D), dV}, D);
  }
  {
    std::vector<Series<K>> dimg{Series<K>(D)};
    for (int a = 0; a < N; ++a) {
      Series<K> sp = detail::psi_shift(psi, N, a);
      Series<K> ba = series_letter<K>(1 + a, D);
      dimg.push_back(series_mul(sp, ba) - series_mul(ba, sp));
    }
    r.k = grt_detail::flow_exp(psi, dimg, D);
  }
  return r;
}

template <class K>
GRTMElement<K> grtm_exp(const GrtmTangent<K>& x, int D) {
  return grtm_exp(std::vector<GrtmTangent<K>>{x}, D);
}

// inverse of grtm_exp: the homogeneous tangent pieces whose exponential is g,
// recovered degree by degree (the degree-n slice of the flow depends on the
// degree-n generator only through its first-order term)
template <class K>
std::vector<GrtmTangent<K>> grtm_log(const GRTMElement<K>& g) {
  int N = g.N, D = g.D;
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(N);
  std::vector<GrtmTangent<K>> xs;
  GRTMElement<K> cur = grtm_identity<K>(N, D);
  for (int n = 1; n <= D; ++n) {
    Series<K> dh = g.h - cur.h;
    Series<K> dk = g.k - cur.k;
    GrtmTangent<K> t{N, n, GVec<K>(n), GVec<K>(n)};
    t.phi.at(n) = fp.coords_of(dh, n);
    t.psi.at(n) = fs.coords_of(dk, n);
    if (t.phi.at(n).empty() && t.psi.at(n).empty()) continue;
    xs.push_back(std::move(t));
    cur = grtm_exp(xs, D);
  }
  return xs;
}

inline GRTMElement<BC> grtm_to_bc(const GRTMElement<Rat>& g) {
  return {g.N, g.D, series_to_bc(g.h), series_to_bc(g.k)};
}

inline GrtmTangent<BC> tangent_to_bc(const GrtmTangent<Rat>& t) {
  GrtmTangent<BC> r{t.N, t.n, GVec<BC>(t.phi.D), GVec<BC>(t.psi.D)};
  for (int d = 1; d <= t.phi.D; ++d)
    for (auto& [i, v] : t.phi.at(d)) r.phi.at(d)[i] = from_rat<BC>(v);
  for (int d = 1; d <= t.psi.D; ++d)
    for (auto& [i, v] : t.psi.at(d)) r.psi.at(d)[i] = from_rat<BC>(v);
  return r;
}

// right action (Phi,Psi) * (h,k); the displayed formulas are the product with
// the pair in the left slot
template <class K>
Pseudotwist<K> act_on_pseudotwist(const Pseudotwist<K>& pt, const GRTMElement<K>& g) {
  if (pt.N != g.N || pt.D != g.D)
    throw std::invalid_argument("act_on_pseudotwist: shape mismatch");
  GRTMElement<K> pe{pt.N, pt.D, pt.Phi, pt.Psi};
  GRTMElement<K> comp = grtm_mul(pe, g);
  Pseudotwist<K> out = pt;
  out.Phi = std::move(comp.h);
  out.Psi = std::move(comp.k);
  return out;
}

// the unique group element carrying pt1 to pt2, built degree by degree; each
// degree-n correction must pass the grtm membership conditions
template <class K>
GRTMElement<K> torsor_solve(const Pseudotwist<K>& p1, const Pseudotwist<K>& p2, int D,
                            double cert_tol = 1e-8) {
  if (p1.N != p2.N) throw std::invalid_argument("torsor_solve: level mismatch");
  if (D > p1.D || D > p2.D) throw std::invalid_argument("torsor_solve: degree exceeds data");
  int N = p1.N;
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(N);
  GRTMElement<K> g = grtm_identity<K>(N, D);
  Pseudotwist<K> cur = p1;
  for (int n = 1; n <= D; ++n) {
    Series<K> dphi = p2.Phi - cur.Phi;
    Series<K> dpsi = p2.Psi - cur.Psi;
    GrtmTangent<K> t{N, n, GVec<K>(n), GVec<K>(n)};
    t.phi.at(n) = fp.coords_of(dphi, n);
    t.psi.at(n) = fs.coords_of(dpsi, n);
    if (t.phi.at(n).empty() && t.psi.at(n).empty()) continue;
    Real res = grtm_membership_residual("grtm", t);
    if (!(res <= Real(cert_tol)))
      throw std::runtime_error("torsor_solve: degree " + std::to_string(n) +
                               " correction fails grtm membership, residual " +
                               res.str(6));
    GRTMElement<K> inc = grtm_exp(t, D);
    g = grtm_mul(g, inc);
    cur = act_on_pseudotwist(cur, inc);
  }
  return g;
}

// (Phi, Psi) -> (Phi(-U,-V), Psi(-A | -b(0), -b(-1), .., -b(1-N)))
template <class K>
Pseudotwist<K> involution(const Pseudotwist<K>& pt) {
  int D = pt.D, N = pt.N;
  K neg = from_rat<K>(Rat(-1));
  Pseudotwist<K> out = pt;
  out.Phi = substitute(pt.Phi, {series_letter<K>(0, D, neg), series_letter<K>(1, D, neg)});
  std::vector<Series<K>> img{series_letter<K>(0, D, neg)};
  for (int j = 0; j < N; ++j)
    img.push_back(series_letter<K>(1 + (((-j) % N) + N) % N, D, neg));
  out.Psi = substitute(pt.Psi, img);
  return out;
}

// k(A|b(a),..)^{-1} k(C|b(a),b(a-1),..): constant in a iff k satisfies the
// parameter-free octogon of the group
template <class K>
Series<K> grtm_octogon_quantity(const Series<K>& k, int N, int a) {
  return series_mul(inverse_trunc(detail::psi_shift(k, N, a)), detail::psi_crefl(k, N, a));
}

template <class K>
RelationReport check_grtm_octogon(const Series<K>& k, int N, double tol) {
  Series<K> prod = series_mul(grtm_octogon_quantity(k, N, 1),
                              inverse_trunc(grtm_octogon_quantity(k, N, 0)));
  return detail::finish_report("octogon(group)", detail::series_log_degrees(N + 1, prod), tol,
                               "");
}

// ---- characters of the unit-group action and abelianized dimensions ----

struct CharacterTable {
  int N = 1, n = 1, dim = 0;
  int generator = 1; // generator of (Z/N)^* when cyclic
  struct Row {
    int power;  // character chi_j: generator^k -> zeta_m^{jk}
    int order;
    int parity; // chi(-1)
    int mult;
  };
  std::vector<Row> rows;
};

namespace grt_detail {

inline std::vector<int> unit_group(int N) {
  std::vector<int> out;
  for (int c = 1; c < N; ++c)
    if (std::gcd(c, N) == 1) out.push_back(c);
  if (N == 1) out.push_back(0); // the trivial group acting on one letter
  return out;
}

inline int unit_order(int c, int N) {
  int k = 1;
  long long v = c % N;
  while (v != 1 % N) {
    v = v * c % N;
    ++k;
  }
  return k;
}

// cyclotomic polynomial by exact division of x^d - 1
inline std::vector<Rat> cyclotomic(int d) {
  static std::map<int, std::vector<Rat>> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  std::vector<Rat> num(d + 1, Rat(0));
  num[0] = Rat(-1);
  num[d] = Rat(1);
  for (int e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    std::vector<Rat> div = cyclotomic(e);
    // polynomial long division, exact
    std::vector<Rat> quot(num.size() - div.size() + 1, Rat(0));
    std::vector<Rat> rem = num;
    for (int i = static_cast<int>(quot.size()) - 1; i >= 0; --i) {
      Rat c = rem[i + div.size() - 1] / div.back();
      quot[i] = c;
      if (c.is_zero()) continue;
      for (size_t j = 0; j < div.size(); ++j) rem[i + j] -= c * div[j];
    }
    num = std::move(quot);
  }
  return cache.emplace(d, num).first->second;
}

using RatDense = std::vector<std::vector<Rat>>;

inline RatDense mat_mul(const RatDense& a, const RatDense& b) {
  size_t n = a.size();
  RatDense r(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline int nullity(const RatDense& a) {
  RatMat M;
  M.cols = static_cast<int>(a.size());
  for (auto& row : a) {
    std::map<int, Rat> r;
    for (int j = 0; j < M.cols; ++j)
      if (!row[j].is_zero()) r[j] = row[j];
    M.add_row(std::move(r));
  }
  return M.cols - rank(M);
}

} // namespace grt_detail

// matrix of the unit c acting on the basis of a graded piece (exact)
inline grt_detail::RatDense unit_action_matrix(const GradedPiece& piece, int c) {
  using namespace grt_detail;
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(piece.N);
  int n = piece.n;
  int p = fp.dim(n), q = fs.dim(n), m = piece.dim();
  RatMat B;
  B.cols = m;
  std::vector<std::vector<Rat>> cols(m, std::vector<Rat>(p + q, Rat(0)));
  std::vector<std::vector<Rat>> tcols(m, std::vector<Rat>(p + q, Rat(0)));
  for (int j = 0; j < m; ++j) {
    const GrtmTangent<Rat>& t = piece.basis[j];
    for (auto& [i, v] : t.phi.at(n)) cols[j][i] = v;
    for (auto& [i, v] : t.psi.at(n)) cols[j][p + i] = v;
    GVec<Rat> moved = psi_scale_lm(piece.N, c).apply(t.psi);
    for (auto& [i, v] : t.phi.at(n)) tcols[j][i] = v;
    for (auto& [i, v] : moved.at(n)) tcols[j][p + i] = v;
  }
  for (int r = 0; r < p + q; ++r) {
    std::map<int, Rat> row;
    for (int j = 0; j < m; ++j)
      if (!cols[j][r].is_zero()) row[j] = cols[j][r];
    B.add_row(std::move(row));
  }
  RatDense M(m, std::vector<Rat>(m, Rat(0)));
  for (int j = 0; j < m; ++j) {
    std::vector<Rat> rhs(p + q, Rat(0));
    for (int r = 0; r < p + q; ++r) rhs[r] = tcols[j][r];
    // solve B x = rhs; rows of B were added per coordinate, rhs aligned
    std::vector<Rat> x;
    if (!solve(B, rhs, x))
      throw std::logic_error("unit action does not preserve the graded piece");
    for (int i = 0; i < m; ++i) M[i][j] = x[i];
  }
  return M;
}

// multiplicities of the unit-group characters on a graded piece; requires a
// cyclic unit group (true for N <= 7 and all prime powers except 2^k, k >= 3)
inline CharacterTable character_table(const std::string& kind, int N, int n) {
  using namespace grt_detail;
  GradedPiece piece = graded_piece(kind, N, n);
  CharacterTable tab;
  tab.N = N;
  tab.n = n;
  tab.dim = piece.dim();
  std::vector<int> units = unit_group(N);
  int m = static_cast<int>(units.size());
  int g = -1;
  for (int c : units)
    if (unit_order(c, N) == m) {
      g = c;
      break;
    }
  if (g < 0) throw std::invalid_argument("character_table: unit group of N is not cyclic");
  tab.generator = g;
  // multiplicity is constant on characters of equal order (rational action)
  RatDense A = piece.dim() ? unit_action_matrix(piece, g)
                           : RatDense{};
  std::map<int, int> mult_of_order;
  for (int d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    if (piece.dim() == 0) {
      mult_of_order[d] = 0;
      continue;
    }
    std::vector<Rat> poly = cyclotomic(d);
    RatDense acc(piece.dim(), std::vector<Rat>(piece.dim(), Rat(0)));
    RatDense pw(piece.dim(), std::vector<Rat>(piece.dim(), Rat(0)));
    for (int i = 0; i < piece.dim(); ++i) pw[i][i] = Rat(1);
    for (size_t kdeg = 0; kdeg < poly.size(); ++kdeg) {
      if (!poly[kdeg].is_zero())
        for (int i = 0; i < piece.dim(); ++i)
          for (int j = 0; j < piece.dim(); ++j) acc[i][j] += poly[kdeg] * pw[i][j];
      if (kdeg + 1 < poly.size()) pw = mat_mul(pw, A);
    }
    int nl = nullity(acc);
    int phi_d = 0;
    for (int x = 1; x <= d; ++x)
      if (std::gcd(x, d) == 1) ++phi_d;
    if (nl % phi_d != 0) throw std::logic_error("character_table: non-integral multiplicity");
    mult_of_order[d] = nl / phi_d;
  }
  int total = 0;
  for (int j = 0; j < m; ++j) {
    CharacterTable::Row row;
    row.power = j;
    row.order = m / std::gcd(j, m);
    row.parity = (m % 2 == 0 && j % 2 == 1) ? -1 : 1;
    row.mult = mult_of_order[row.order];
    total += row.mult;
    tab.rows.push_back(row);
  }
  if (total != tab.dim) throw std::logic_error("character_table: multiplicities do not sum");
  return tab;
}

// dim of degree n in the abelianization: quotient by Ihara brackets of
// strictly lower degrees
inline int abelianization_dim(const std::string& kind, int N, int n) {
  const FreeModel& fp = phi_free_model();
  const FreeModel& fs = psi_free_model(kind == "grt1" ? 1 : N);
  int p = fp.dim(n), q = kind == "grt1" ? 0 : fs.dim(n);
  GradedPiece top = graded_piece(kind, N, n);
  std::vector<GradedPiece> lower;
  for (int d = 1; d < n; ++d) lower.push_back(graded_piece(kind, N, d));
  RatMat M;
  M.cols = p + q;
  for (int d = 1; d < n; ++d) {
    int e = n - d;
    if (e < 1) continue;
    for (auto& x : lower[d - 1].basis)
      for (auto& y : lower[e - 1].basis) {
        GrtmTangent<Rat> z = ihara_bracket(x, y);
        std::map<int, Rat> row;
        for (auto& [i, v] : z.phi.at(n)) row[i] = v;
        if (q)
          for (auto& [i, v] : z.psi.at(n)) row[p + i] = v;
        M.add_row(std::move(row));
      }
  }
  return top.dim() - rank(M);
}

} // namespace cyclo
