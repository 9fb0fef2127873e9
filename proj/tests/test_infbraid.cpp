#include <gtest/gtest.h>

#include <random>

#include "cyclo/infbraid.hpp"

using namespace cyclo;

namespace {

GVec<Rat> random_gvec(const Model& m, int D, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  GVec<Rat> x(D);
  for (int d = 1; d <= D; ++d)
    for (int i = 0; i < m.dim(d); ++i) {
      Rat v(num(rng), den(rng));
      if (!v.is_zero()) x.at(d)[i] = v;
    }
  return x;
}

bool gv_equal(const GVec<Rat>& a, const GVec<Rat>& b) {
  return gv_add(a, b, Rat(-1)).empty();
}

std::vector<int> model_dims(const TowerModel& t, int D) {
  std::vector<int> v;
  for (int d = 1; d <= D; ++d) v.push_back(t.model->dim(d));
  return v;
}

} // namespace

TEST(Tower, DimensionsMatchQuotientOracle) {
  // independent check: row-reduce the relation ideal in the free Lie algebra
  struct Case {
    int n, N, D;
  } cases[] = {{3, 2, 4}, {2, 4, 4}, {2, 3, 4}, {3, 4, 3}};
  for (auto [n, N, D] : cases) {
    auto t = tnN_model(n, N);
    auto oracle = quotient_dims(t->gens(), tnN_relators(n, N), D);
    for (int d = 1; d <= D; ++d)
      EXPECT_EQ(t->model->dim(d), oracle[d]) << "t_{" << n << "," << N << "} degree " << d;
  }
  auto t4 = tn_model(4);
  auto oracle = quotient_dims(t4->gens(), tn_relators(4), 4);
  for (int d = 1; d <= 4; ++d) EXPECT_EQ(t4->model->dim(d), oracle[d]);
}

TEST(Tower, KnownDimensionTables) {
  EXPECT_EQ(model_dims(*tnN_model(2, 4), 4), (std::vector<int>{6, 10, 40, 150}));
  EXPECT_EQ(model_dims(*tnN_model(3, 4), 4), (std::vector<int>{15, 46, 280, 1770}));
  EXPECT_EQ(model_dims(*tnN_model(4, 4), 3), (std::vector<int>{28, 124, 1008}));
  EXPECT_EQ(model_dims(*tnN_model(3, 2), 4), (std::vector<int>{9, 13, 48, 168}));
  // t_3 modulo its 1-dimensional center is free on two letters
  EXPECT_EQ(model_dims(*tn_model(3), 6), (std::vector<int>{3, 1, 2, 3, 6, 9}));
}

TEST(Tower, DefiningRelationsVanish) {
  for (auto& r : tnN_relators(3, 2))
    EXPECT_TRUE(relator_value(*tnN_model(3, 2)->model, r).empty()) << r.name;
  for (auto& r : tnN_relators(2, 4))
    EXPECT_TRUE(relator_value(*tnN_model(2, 4)->model, r).empty()) << r.name;
  for (auto& r : tnN_relators(4, 2))
    EXPECT_TRUE(relator_value(*tnN_model(4, 2)->model, r).empty()) << r.name;
  for (auto& r : tn_relators(5)) EXPECT_TRUE(relator_value(*tn_model(5)->model, r).empty()) << r.name;
}

TEST(Tower, JacobiHoldsOnGeneratorTriples) {
  auto t = tnN_model(2, 3);
  const Model& m = *t->model;
  for (int a = 0; a < m.dim(1); ++a)
    for (int b = 0; b < m.dim(1); ++b)
      for (int c = 0; c < m.dim(1); ++c) {
        HVec<Rat> ea{{a, Rat(1)}}, eb{{b, Rat(1)}}, ec{{c, Rat(1)}};
        auto j1 = bracket_hh<Rat>(m, 1, ea, 2, m.sc(1, b, 1, c));
        auto j2 = bracket_hh<Rat>(m, 1, eb, 2, m.sc(1, c, 1, a));
        auto j3 = bracket_hh<Rat>(m, 1, ec, 2, m.sc(1, a, 1, b));
        hv_add(j1, j2, Rat(1));
        hv_add(j1, j3, Rat(1));
        EXPECT_TRUE(j1.empty()) << a << " " << b << " " << c;
      }
}

TEST(Tower, CentralElementCommutesWithEverything) {
  for (auto t : {tnN_model(3, 2), tnN_model(2, 4)}) {
    auto z = central_element(*t);
    for (int d = 1; d <= 3; ++d)
      for (int i = 0; i < t->model->dim(d); ++i) {
        HVec<Rat> e{{i, Rat(1)}};
        EXPECT_TRUE(bracket_hh<Rat>(*t->model, 1, z, d, e).empty());
      }
  }
}

TEST(Tower, CentralReductionsAreMorphisms) {
  EXPECT_TRUE(t2N_reduce(*tnN_model(2, 3)).verify());
  EXPECT_TRUE(t2N_reduce(*tnN_model(2, 4)).verify());
  EXPECT_TRUE(t3_reduce().verify());
  // the center maps to zero
  auto t2 = tnN_model(2, 3);
  auto red = t2N_reduce(*t2);
  HVec<Rat> img;
  for (auto& [i, v] : central_element(*t2)) hv_add(img, red.basis_image(1, i), v);
  EXPECT_TRUE(img.empty());
}

TEST(Symmetry, ActionIsAutomorphismAndRespectsGroupLaw) {
  auto t = tnN_model(3, 4);
  Gamma0 g1{3, 4, {1, 2, 0}, {2, 3, 1}};
  Gamma0 g2{3, 4, {3, 0, 1}, {1, 3, 2}};
  EXPECT_TRUE(t->sym(g1).verify());
  EXPECT_TRUE(t->sym(g2).verify());
  auto g12 = g0_mul(g1, g2);
  for (int i = 0; i < t->gens(); ++i) {
    HVec<Rat> via;
    for (auto& [k, v] : t->sym(g2).basis_image(1, i)) hv_add(via, t->sym(g1).basis_image(1, k), v);
    EXPECT_EQ(via, t->sym(g12).basis_image(1, i));
  }
  EXPECT_TRUE(g0_is_identity(g0_mul(g1, g0_inv(g1))));
  EXPECT_TRUE(g0_is_identity(g0_mul(g0_inv(g2), g2)));
}

TEST(Symmetry, GeneratorImagesFollowTheTable) {
  auto t = tnN_model(3, 4);
  // pure translation c = (1,0,0): fixes t_0^{0j}, shifts t(a)^{1k} up, leaves t(a)^{23}
  Gamma0 c = g0_identity(3, 4);
  c.c[0] = 1;
  for (int j = 1; j <= 3; ++j)
    EXPECT_EQ(t->sym(c).basis_image(1, t->x0(j)), (HVec<Rat>{{t->x0(j), Rat(1)}}));
  EXPECT_EQ(t->sym(c).basis_image(1, t->y(1, 2, 0)), (HVec<Rat>{{t->y(1, 2, 1), Rat(1)}}));
  EXPECT_EQ(t->sym(c).basis_image(1, t->y(1, 3, 3)), (HVec<Rat>{{t->y(1, 3, 0), Rat(1)}}));
  EXPECT_EQ(t->sym(c).basis_image(1, t->y(2, 3, 2)), (HVec<Rat>{{t->y(2, 3, 2), Rat(1)}}));
  // pure permutation (1 2): relabels strands
  Gamma0 s = g0_identity(3, 4);
  std::swap(s.p[0], s.p[1]);
  EXPECT_EQ(t->sym(s).basis_image(1, t->x0(1)), (HVec<Rat>{{t->x0(2), Rat(1)}}));
  EXPECT_EQ(t->sym(s).basis_image(1, t->y(1, 3, 1)), (HVec<Rat>{{t->y(2, 3, 1), Rat(1)}}));
  // t(a)^{12} -> t(a)^{21} = t(-a)^{12}
  EXPECT_EQ(t->sym(s).basis_image(1, t->y(1, 2, 1)), (HVec<Rat>{{t->y(1, 2, 3), Rat(1)}}));
}

TEST(Insertion, MorphismVerifiesAndMatchesTheCoproductFormula) {
  auto t2 = tnN_model(2, 4);
  auto t3 = tnN_model(3, 4);
  auto f = insertion_tnN(*t2, *t3, {{0}, {1, 2}, {3}});
  EXPECT_TRUE(f.verify());
  // (t_0^{01})^{0,12,3} = t_0^{01} + t_0^{02} + sum_b t(b)^{12}
  HVec<Rat> want{{t3->x0(1), Rat(1)}, {t3->x0(2), Rat(1)}};
  for (int b = 0; b < 4; ++b) want[t3->y(1, 2, b)] += 1;
  EXPECT_EQ(f.basis_image(1, t2->x0(1)), want);
  // (t(a)^{12})^{0,12,3} = t(a)^{13} + t(a)^{23}
  EXPECT_EQ(f.basis_image(1, t2->y(1, 2, 2)),
            (HVec<Rat>{{t3->y(1, 3, 2), Rat(1)}, {t3->y(2, 3, 2), Rat(1)}}));
  // strands grouped with 0 feed the X image: f = (01, 2, 3)
  auto g = insertion_tnN(*t2, *t3, {{0, 1}, {2}, {3}});
  EXPECT_TRUE(g.verify());
  HVec<Rat> wantg{{t3->x0(2), Rat(1)}};
  for (int b = 0; b < 4; ++b) wantg[t3->y(1, 2, b)] += 1;
  EXPECT_EQ(g.basis_image(1, t2->x0(1)), wantg);
  // identity grouping is the inclusion t_{2,4} -> t_{3,4} on unchanged strands
  auto inc = insertion_tnN(*t2, *t3, {{0}, {1}, {2}});
  for (int i = 0; i < t2->gens(); ++i) {
    auto nm = t2->names[i];
    EXPECT_EQ(inc.basis_image(1, i), (HVec<Rat>{{t3->gen_index.at(nm), Rat(1)}})) << nm;
  }
  // partial map: strand 1 of the target unused
  auto t1 = tnN_model(1, 4);
  auto part = insertion_tnN(*t1, *t2, {{0}, {2}});
  EXPECT_EQ(part.basis_image(1, t1->x0(1)), (HVec<Rat>{{t2->x0(2), Rat(1)}}));
}

TEST(Insertion, CompositionIsCoassociative) {
  int N = 2;
  auto t2 = tnN_model(2, N);
  auto t3 = tnN_model(3, N);
  auto t4 = tnN_model(4, N);
  // f: [3] -> [2] with groups {0},{1},{2,3};  g: [4] -> [3] with {0},{1,2},{3},{4}
  auto f = insertion_tnN(*t2, *t3, {{0}, {1}, {2, 3}});
  auto g = insertion_tnN(*t3, *t4, {{0}, {1, 2}, {3}, {4}});
  // composite f . g : [4] -> [2] has groups {0},{1,2},{3,4}
  auto fg = insertion_tnN(*t2, *t4, {{0}, {1, 2}, {3, 4}});
  auto x = random_gvec(*t2->model, 3, 5);
  EXPECT_TRUE(gv_equal(g.apply(f.apply(x)), fg.apply(x)));
}

TEST(Insertion, PhiLettersLandInBothTowers) {
  auto t3 = tn_model(3);
  auto t4 = tn_model(4);
  auto f = insertion_tn(*t3, *t4, {{1, 2}, {3}, {4}});
  EXPECT_TRUE(f.verify());
  EXPECT_EQ(f.basis_image(1, t3->t(1, 2)),
            (HVec<Rat>{{t4->t(1, 3), Rat(1)}, {t4->t(2, 3), Rat(1)}}));
  auto t32 = tnN_model(3, 2);
  auto h = insertion_tn_to_tnN(*t3, *t32, {{1}, {2}, {3}});
  EXPECT_TRUE(h.verify());
  EXPECT_EQ(h.basis_image(1, t3->t(1, 2)), (HVec<Rat>{{t32->y(1, 2, 0), Rat(1)}}));
}

TEST(PiDelta, MorphismsVerifyWithExpectedImages) {
  auto t4 = tnN_model(2, 4);
  auto t2 = tnN_model(2, 2);
  auto pi = pi_morphism(*t4, *t2);
  auto de = delta_morphism(*t4, *t2);
  EXPECT_TRUE(pi.verify());
  EXPECT_TRUE(de.verify());
  EXPECT_EQ(pi.basis_image(1, t4->x0(1)), (HVec<Rat>{{t2->x0(1), Rat(2)}}));
  EXPECT_EQ(pi.basis_image(1, t4->y(1, 2, 3)), (HVec<Rat>{{t2->y(1, 2, 1), Rat(1)}}));
  EXPECT_EQ(de.basis_image(1, t4->x0(1)), (HVec<Rat>{{t2->x0(1), Rat(1)}}));
  EXPECT_EQ(de.basis_image(1, t4->y(1, 2, 1)), HVec<Rat>{});
  EXPECT_EQ(de.basis_image(1, t4->y(1, 2, 2)), (HVec<Rat>{{t2->y(1, 2, 1), Rat(1)}}));
}

TEST(PiDelta, CompositionChainsAndMixedSquareCommute) {
  auto t12 = tnN_model(2, 12);
  auto t6 = tnN_model(2, 6);
  auto t4 = tnN_model(2, 4);
  auto t3 = tnN_model(2, 3);
  auto t2 = tnN_model(2, 2);
  auto x = random_gvec(*t12->model, 3, 7);
  // pi_{6,3} . pi_{12,6} = pi_{12,3} and likewise for delta
  EXPECT_TRUE(gv_equal(pi_morphism(*t6, *t3).apply(pi_morphism(*t12, *t6).apply(x)),
                       pi_morphism(*t12, *t3).apply(x)));
  EXPECT_TRUE(gv_equal(delta_morphism(*t6, *t3).apply(delta_morphism(*t12, *t6).apply(x)),
                       delta_morphism(*t12, *t3).apply(x)));
  // mixed square: pi_{4,2} . delta_{12,4} = delta_{6,2} . pi_{12,6}
  EXPECT_TRUE(gv_equal(pi_morphism(*t4, *t2).apply(delta_morphism(*t12, *t4).apply(x)),
                       delta_morphism(*t6, *t2).apply(pi_morphism(*t12, *t6).apply(x))));
}

TEST(SemiElt, GroupLawsHoldExactly) {
  int D = 4;
  auto t = tnN_model(3, 2);
  auto& fm = psi_free_model(2);
  GVec<Rat> psi = random_gvec(fm, D, 11);
  psi.at(1).clear(); // group-like parts of interest start in degree 2
  auto s1 = monodromy_sigma(*t, 1, psi, Rat(3));
  auto s2 = monodromy_sigma(*t, 2, psi, Rat(3));
  auto tau = monodromy_tau(*t, 1, Rat(3), D);
  auto lhs = se_mul(*t, se_mul(*t, s1, s2), tau);
  auto rhs = se_mul(*t, s1, se_mul(*t, s2, tau));
  EXPECT_TRUE(lhs.g == rhs.g);
  EXPECT_TRUE(gv_equal(lhs.x, rhs.x));
  auto e = se_mul(*t, s1, se_inv(*t, s1));
  EXPECT_TRUE(g0_is_identity(e.g));
  EXPECT_TRUE(e.x.empty());
  auto p3 = se_pow(*t, tau, 3);
  auto p3b = se_mul(*t, tau, se_mul(*t, tau, tau));
  EXPECT_TRUE(p3.g == p3b.g);
  EXPECT_TRUE(gv_equal(p3.x, p3b.x));
  auto pm2 = se_mul(*t, se_pow(*t, s2, -2), se_pow(*t, s2, 2));
  EXPECT_TRUE(g0_is_identity(pm2.g));
  EXPECT_TRUE(pm2.x.empty());
}

TEST(Monodromy, StructuralIdentities) {
  int D = 3;
  auto t = tnN_model(3, 2);
  auto& fm = psi_free_model(2);
  GVec<Rat> psi = random_gvec(fm, D, 13);
  psi.at(1).clear();
  auto tau = monodromy_tau(*t, 1, Rat(5), D);
  auto s2 = monodromy_sigma(*t, 2, psi, Rat(5));
  // tau only involves strands {0,1}; sigma_2 braids strands {2,3}: they commute
  auto c = se_commutator(*t, tau, s2);
  EXPECT_TRUE(g0_is_identity(c.g));
  EXPECT_TRUE(c.x.empty());
  // sigma_i has group part (i,i+1) and tau has translation part a.e_1
  auto s1 = monodromy_sigma(*t, 1, psi, Rat(5));
  EXPECT_EQ(s1.g.p, (std::vector<int>{2, 1, 3}));
  EXPECT_EQ(tau.g.c, (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(tau.x.at(1).at(t->x0(1)), Rat(5) / 2); // lambda/N with N = 2
}

TEST(KGroup, TrivialRepresentationSatisfiesAllRelations) {
  // with Psi = 1 and lambda = 0 every relation must collapse to the identity,
  // exercising the Artin words, ranges and group parts exactly
  for (auto [n, N] : {std::pair{3, 2}, {4, 2}, {3, 3}}) {
    auto t = tnN_model(n, N);
    GVec<Rat> psi0(3);
    KGroup<Rat> kg(t, 1, psi0, Rat(0));
    auto res = kg.check_all({0, 1, -1, N + 1}, {0, 1, 2, -1});
    EXPECT_FALSE(res.empty());
    for (auto& r : res) {
      EXPECT_TRUE(r.group_identity) << r.name;
      EXPECT_TRUE(r.residual.is_zero()) << r.name;
    }
  }
}

TEST(KGroup, GeneratorsHavePureLieImages) {
  // X_{0i} and x_{ij}(alpha) lie in exp(t_{n,N}): their group parts vanish;
  // degree-1 parts are multiples of t_0^{0i}, t(alpha)^{ij}
  int D = 3;
  auto t = tnN_model(3, 2);
  auto& fm = psi_free_model(2);
  GVec<Rat> psi = random_gvec(fm, D, 17);
  psi.at(1).clear();
  KGroup<Rat> kg(t, 1, psi, Rat(4));
  for (int i = 1; i <= 3; ++i) {
    EXPECT_TRUE(g0_is_identity(kg.X0(i).g));
    // log X_{0i} = N (lambda/N) t_0^{0i} + higher = lambda t_0^{0i} + ...
    EXPECT_EQ(kg.X0(i).x.at(1), (HVec<Rat>{{t->x0(i), Rat(4)}}));
  }
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      for (int a : {0, 1, 2, -1}) {
        auto& x = kg.x(i, j, a);
        EXPECT_TRUE(g0_is_identity(x.g));
        EXPECT_EQ(x.x.at(1), (HVec<Rat>{{t->y(i, j, a), Rat(4)}}));
      }
}
