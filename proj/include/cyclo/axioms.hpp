#pragma once

#include "cyclo/infbraid.hpp"
#include "cyclo/polylog.hpp"

#include <string>
#include <vector>

// Defining relations of associator pairs: duality, the two hexagons, the
// pentagon (in t_4), the mixed pentagon (in t_{3,N}) and the octogon, plus
// the distribution identities relating levels N -> N' and the N = 1
// reduction. Relations that live in free algebras are evaluated on the
// series level; relations in quotient towers go through LieMorphism images
// and BCH. Residuals are per-degree max Lyndon (resp. model basis)
// coordinates of log(LHS RHS^{-1}), so a checker run on exact rational
// input reports exact zeros.

namespace cyclo {

template <class K>
struct Pseudotwist {
  int N = 1, D = 0;
  int a = 1; // torsion class in Z/N entering the octogon
  K lambda = coeff_zero<K>();
  Series<K> Phi; // letters (t12, t23)
  Series<K> Psi; // letters (A, b(0), .., b(N-1))
  std::string provenance;
};

inline Pseudotwist<BC> kz_pseudotwist(int N, int D, const std::string& pipeline = "comb") {
  Pseudotwist<BC> pt;
  pt.N = N;
  pt.D = D;
  pt.a = (N - 1) % N; // the class of -1
  pt.lambda = BC(Real(0), 2 * pi_value());
  if (pipeline == "comb") {
    pt.Psi = assemble_psi(N, D);
    pt.Phi = assemble_phi(D);
  } else if (pipeline == "ode") {
    pt.Psi = psi_ode(N, D);
    pt.Phi = phi_ode(D);
  } else {
    throw std::invalid_argument("kz_pseudotwist: unknown pipeline " + pipeline);
  }
  pt.provenance = pipeline;
  return pt;
}

template <class K>
Pseudotwist<K> trivial_pseudotwist(int N, int D) {
  Pseudotwist<K> pt;
  pt.N = N;
  pt.D = D;
  pt.a = 1 % N;
  pt.Phi = series_one<K>(D);
  pt.Psi = series_one<K>(D);
  pt.provenance = "trivial";
  return pt;
}

struct RelationReport {
  std::string name;
  std::vector<Real> residual; // residual[d-1] = degree-d residual
  Real max_residual{0};
  double tol = 0;
  bool pass = false;
  std::string provenance;
};

namespace detail {

inline RelationReport finish_report(std::string name, std::vector<Real> per_degree, double tol,
                                    std::string prov) {
  RelationReport r;
  r.name = std::move(name);
  r.residual = std::move(per_degree);
  r.tol = tol;
  r.provenance = std::move(prov);
  for (auto& v : r.residual)
    if (v > r.max_residual) r.max_residual = v;
  r.pass = r.max_residual <= Real(tol);
  return r;
}

// per-degree max Lyndon coordinate of log(prod); non-Lie defects count too
template <class K>
std::vector<Real> series_log_degrees(int letters, const Series<K>& prod) {
  Series<K> lg = log_trunc(prod);
  std::vector<Real> out(prod.D, Real(0));
  for (auto& [w, v] : lg.c) out[w.size() - 1] = Real(1); // mark occupied degrees
  for (int d = 1; d <= prod.D; ++d) {
    if (out[d - 1] == Real(0)) continue;
    std::map<Word, K> comp;
    for (auto& [w, v] : lg.c)
      if (static_cast<int>(w.size()) == d) comp.emplace(w, v);
    auto co = lyndon_coordinates<K>(letters, d, comp);
    Real m(0);
    for (auto& [w, v] : co.coords) m = std::max(m, coeff_abs(v));
    for (auto& [w, v] : co.defect) m = std::max(m, coeff_abs(v));
    out[d - 1] = m;
  }
  return out;
}

template <class K>
std::vector<Real> gvec_degrees(const GVec<K>& r) {
  std::vector<Real> out(r.D);
  for (int d = 1; d <= r.D; ++d) out[d - 1] = gv_max_abs(r, d);
  return out;
}

template <class K>
GVec<K> gv_neg(const GVec<K>& x) {
  return gv_scale(x, from_rat<K>(Rat(-1)));
}

// C = -A - sum_a b(a) as a degree-1 series on the psi letters
template <class K>
Series<K> psi_c_series(int N, int D) {
  Series<K> c(D);
  c.add(Word(1, char(0)), from_rat<K>(Rat(-1)));
  for (int j = 0; j < N; ++j) c.add(Word(1, char(1 + j)), from_rat<K>(Rat(-1)));
  return c;
}

// Psi(A | b(k), b(k+1), ...): rotate the root letters
template <class K>
Series<K> psi_shift(const Series<K>& psi, int N, int k) {
  int D = psi.D;
  std::vector<Series<K>> img{series_letter<K>(0, D)};
  for (int j = 0; j < N; ++j) img.push_back(series_letter<K>(1 + (((j + k) % N) + N) % N, D));
  return substitute(psi, img);
}

// Psi(C | b(k), b(k-1), ...): first slot to C, roots reflected about k
template <class K>
Series<K> psi_crefl(const Series<K>& psi, int N, int k) {
  int D = psi.D;
  std::vector<Series<K>> img{psi_c_series<K>(N, D)};
  for (int j = 0; j < N; ++j) img.push_back(series_letter<K>(1 + (((k - j) % N) + N) % N, D));
  return substitute(psi, img);
}

} // namespace detail

// Phi(V,U) Phi(U,V) = 1
template <class K>
RelationReport check_duality(const Pseudotwist<K>& pt, double tol) {
  int D = pt.D;
  std::vector<Series<K>> swap{series_letter<K>(1, D), series_letter<K>(0, D)};
  Series<K> prod = series_mul(substitute(pt.Phi, swap), pt.Phi);
  return detail::finish_report("duality", detail::series_log_degrees(2, prod), tol,
                               pt.provenance);
}

// e^{s l U/2} Phi(W,U) e^{s l W/2} Phi(V,W) e^{s l V/2} Phi(U,V) = 1, W = -U-V
template <class K>
RelationReport check_hexagon(const Pseudotwist<K>& pt, int sign, double tol) {
  int D = pt.D;
  K h = pt.lambda * from_rat<K>(Rat(sign, 2));
  Series<K> U = series_letter<K>(0, D), V = series_letter<K>(1, D);
  Series<K> W = (U + V) * from_rat<K>(Rat(-1));
  Series<K> prod = exp_trunc(U * h);
  prod = series_mul(prod, substitute(pt.Phi, {W, U}));
  prod = series_mul(prod, exp_trunc(W * h));
  prod = series_mul(prod, substitute(pt.Phi, {V, W}));
  prod = series_mul(prod, exp_trunc(V * h));
  prod = series_mul(prod, pt.Phi);
  return detail::finish_report(sign > 0 ? "hexagon+" : "hexagon-",
                               detail::series_log_degrees(2, prod), tol, pt.provenance);
}

// Psi(A|b(a),..)^{-1} e^{l b(a)/2} Psi(C|b(a),..) e^{l C/N}
//   Psi(C|b(0),..)^{-1} e^{l b(0)/2} Psi(A|b(0),..) e^{l A/N} = 1
template <class K>
RelationReport check_octogon(const Pseudotwist<K>& pt, double tol) {
  int N = pt.N, D = pt.D;
  Series<K> c = detail::psi_c_series<K>(N, D);
  K half = pt.lambda * from_rat<K>(Rat(1, 2));
  K overN = pt.lambda * from_rat<K>(Rat(1, N));
  int ba = 1 + ((pt.a % N) + N) % N;
  Series<K> prod = inverse_trunc(detail::psi_shift(pt.Psi, N, pt.a));
  prod = series_mul(prod, exp_trunc(series_letter<K>(ba, D, half)));
  prod = series_mul(prod, detail::psi_crefl(pt.Psi, N, pt.a));
  prod = series_mul(prod, exp_trunc(c * overN));
  prod = series_mul(prod, inverse_trunc(detail::psi_crefl(pt.Psi, N, 0)));
  prod = series_mul(prod, exp_trunc(series_letter<K>(1, D, half)));
  prod = series_mul(prod, pt.Psi);
  prod = series_mul(prod, exp_trunc(series_letter<K>(0, D, overN)));
  return detail::finish_report("octogon", detail::series_log_degrees(N + 1, prod), tol,
                               pt.provenance);
}

// Phi^{1,2,34} Phi^{12,3,4} = Phi^{2,3,4} Phi^{1,23,4} Phi^{1,2,3} in exp(t_4).
// `transposed` evaluates the variant with the two LHS factors swapped, which
// the numeric associator does not satisfy; it is kept for the record.
template <class K>
RelationReport check_pentagon(const Pseudotwist<K>& pt, double tol, bool transposed = false) {
  int D = pt.D;
  auto t4 = tn_model(4);
  const FreeModel& fp = phi_free_model();
  GVec<K> lphi = series_to_gvec(fp, log_trunc(pt.Phi), D);
  auto f = [&](std::vector<int> g1, std::vector<int> g2, std::vector<int> g3) {
    return apply_letter_images(fp, *t4->model, phi_letter_insertion_tn(*t4, g1, g2, g3), lphi);
  };
  GVec<K> x = f({1}, {2}, {3, 4}), y = f({1, 2}, {3}, {4});
  if (transposed) std::swap(x, y);
  std::vector<GVec<K>> logs{x, y, detail::gv_neg(f({1}, {2}, {3})),
                            detail::gv_neg(f({1}, {2, 3}, {4})),
                            detail::gv_neg(f({2}, {3}, {4}))};
  GVec<K> r = bch_chain<K>(*t4->model, logs);
  return detail::finish_report(transposed ? "pentagon(transposed)" : "pentagon",
                               detail::gvec_degrees(r), tol, pt.provenance);
}

// Psi^{1,2,34} Psi^{12,3,4} = Phi^{2,3,4} Psi^{1,23,4} Psi^{1,2,3} in
// exp(t_{3,N}); superscripts label the strands (0|1|2|3) of t_{3,N} as 1..4.
template <class K>
RelationReport check_mixed_pentagon(const Pseudotwist<K>& pt, double tol,
                                    bool transposed = false) {
  int D = pt.D, N = pt.N;
  auto t3n = tnN_model(3, N);
  const FreeModel& fs = psi_free_model(N);
  const FreeModel& fp = phi_free_model();
  GVec<K> lpsi = series_to_gvec(fs, log_trunc(pt.Psi), D);
  GVec<K> lphi = series_to_gvec(fp, log_trunc(pt.Phi), D);
  auto f = [&](std::vector<int> g0, std::vector<int> g1, std::vector<int> g2) {
    return apply_letter_images(fs, *t3n->model, psi_letter_insertion(*t3n, g0, g1, g2), lpsi);
  };
  GVec<K> phi234 = apply_letter_images(
      fp, *t3n->model, phi_letter_insertion_tnN(*t3n, {1}, {2}, {3}), lphi);
  GVec<K> x = f({0}, {1}, {2, 3}), y = f({0, 1}, {2}, {3});
  if (transposed) std::swap(x, y);
  std::vector<GVec<K>> logs{x, y, detail::gv_neg(f({0}, {1}, {2})),
                            detail::gv_neg(f({0}, {1, 2}, {3})), detail::gv_neg(phi234)};
  GVec<K> r = bch_chain<K>(*t3n->model, logs);
  return detail::finish_report(transposed ? "mixed-pentagon(transposed)" : "mixed-pentagon",
                               detail::gvec_degrees(r), tol, pt.provenance);
}

template <class K>
std::vector<RelationReport> check_pseudotwist(const Pseudotwist<K>& pt, double tol) {
  return {check_duality(pt, tol),       check_hexagon(pt, +1, tol),
          check_hexagon(pt, -1, tol),   check_pentagon(pt, tol),
          check_mixed_pentagon(pt, tol), check_octogon(pt, tol)};
}

// ---- distribution maps between levels (N' | N, d = N/N') ----
// pi: A -> d A', b(j) -> b'(j mod N');  delta: A -> A', b(j) -> b'(j/d) or 0.

template <class K>
Series<K> pi_series(const Series<K>& psi, int N, int Np) {
  if (Np <= 0 || N % Np != 0) throw std::invalid_argument("pi_series: need N'|N");
  int d = N / Np, D = psi.D;
  std::vector<Series<K>> img{series_letter<K>(0, D, from_rat<K>(Rat(d)))};
  for (int j = 0; j < N; ++j) img.push_back(series_letter<K>(1 + j % Np, D));
  return substitute(psi, img);
}

template <class K>
Series<K> delta_series(const Series<K>& psi, int N, int Np) {
  if (Np <= 0 || N % Np != 0) throw std::invalid_argument("delta_series: need N'|N");
  int d = N / Np, D = psi.D;
  std::vector<Series<K>> img{series_letter<K>(0, D)};
  for (int j = 0; j < N; ++j)
    img.push_back(j % d == 0 ? series_letter<K>(1 + j / d, D) : Series<K>(D));
  return substitute(psi, img);
}

// b(0)-coefficient gap rho with pi(Psi) = e^{rho b(0)} delta(Psi)
template <class K>
K distribution_rho(const Series<K>& psi, int N, int Np) {
  return pi_series(psi, N, Np).at(Word(1, char(1))) - psi.at(Word(1, char(1)));
}

template <class K>
struct DistributionReport {
  int N = 1, Np = 1;
  K rho = coeff_zero<K>();
  std::vector<Real> residual;       // pi(Psi_N) vs e^{rho b(0)} delta(Psi_N)
  std::vector<Real> delta_residual; // delta(Psi_N) vs Psi_N'
  Real additivity_residual{0};      // rho additive along divisor chains
  Real max_residual{0};
  double tol = 0;
  bool pass = false;
};

template <class K>
DistributionReport<K> check_distribution(const Pseudotwist<K>& src, const Pseudotwist<K>& dst,
                                         double tol) {
  int N = src.N, Np = dst.N, D = src.D;
  if (Np <= 0 || N % Np != 0) throw std::invalid_argument("check_distribution: need N'|N");
  DistributionReport<K> rep;
  rep.N = N;
  rep.Np = Np;
  rep.tol = tol;
  Series<K> pip = pi_series(src.Psi, N, Np);
  Series<K> dep = delta_series(src.Psi, N, Np);
  rep.rho = pip.at(Word(1, char(1))) - src.Psi.at(Word(1, char(1)));
  Series<K> target = series_mul(exp_trunc(series_letter<K>(1, D, rep.rho)), dep);
  rep.residual =
      detail::series_log_degrees(Np + 1, series_mul(pip, inverse_trunc(target)));
  Series<K> diff = dep - dst.Psi;
  rep.delta_residual.assign(D, Real(0));
  for (int d = 1; d <= D; ++d) rep.delta_residual[d - 1] = series_max_abs(diff, d);
  for (int m = Np; m <= N; ++m) {
    if (N % m != 0 || m % Np != 0) continue;
    K through = distribution_rho(src.Psi, N, m) +
                distribution_rho(delta_series(src.Psi, N, m), m, Np);
    rep.additivity_residual =
        std::max(rep.additivity_residual, coeff_abs(through - rep.rho));
  }
  rep.max_residual = rep.additivity_residual;
  for (auto& v : rep.residual) rep.max_residual = std::max(rep.max_residual, v);
  for (auto& v : rep.delta_residual) rep.max_residual = std::max(rep.max_residual, v);
  rep.pass = rep.max_residual <= Real(tol);
  return rep;
}

// ---- reduction to level 1: pi_{N1}(Psi) = e^{gamma b(0)} Phi and
//      delta_{N1}(Psi) = e^{gamma' b(0)} Phi, positionally on (A, b(0)) ----

template <class K>
struct ReductionReport {
  K gamma = coeff_zero<K>();       // N gamma_A + sum_a gamma_a
  K gamma_delta = coeff_zero<K>(); // gamma_A + gamma_0
  std::vector<Real> residual;      // pi identity per degree
  std::vector<Real> delta_residual;
  Real max_residual{0};
  double tol = 0;
  bool pass = false;
};

template <class K>
ReductionReport<K> reduce_N1(const Pseudotwist<K>& pt, double tol) {
  int N = pt.N, D = pt.D;
  ReductionReport<K> rep;
  rep.tol = tol;
  K ga = pt.Psi.at(Word(1, char(0)));
  rep.gamma = from_rat<K>(Rat(N)) * ga;
  for (int j = 0; j < N; ++j) rep.gamma += pt.Psi.at(Word(1, char(1 + j)));
  rep.gamma_delta = ga + pt.Psi.at(Word(1, char(1)));
  auto against = [&](const Series<K>& reduced, const K& g) {
    Series<K> target = series_mul(exp_trunc(series_letter<K>(1, D, g)), pt.Phi);
    return detail::series_log_degrees(2, series_mul(reduced, inverse_trunc(target)));
  };
  rep.residual = against(pi_series(pt.Psi, N, 1), rep.gamma);
  rep.delta_residual = against(delta_series(pt.Psi, N, 1), rep.gamma_delta);
  for (auto& v : rep.residual) rep.max_residual = std::max(rep.max_residual, v);
  for (auto& v : rep.delta_residual) rep.max_residual = std::max(rep.max_residual, v);
  rep.pass = rep.max_residual <= Real(tol);
  return rep;
}

} // namespace cyclo
