#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "cyclo/bch.hpp"
#include "cyclo/lyndon.hpp"

namespace cyclo {

template <class K>
using HVec = std::map<int, K>; // homogeneous coordinate vector, sparse

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline long long& dim_cap() {
  static long long cap = 500000;
  return cap;
}

// A positively graded Lie algebra given degreewise by an exact basis and
// structure constants. Basis elements are iterated brackets of the degree-1
// generators; split() exposes that bracket decomposition for degree >= 2.
class Model {
public:
  virtual ~Model() = default;
  virtual int dim(int d) const = 0;
  virtual const HVec<Rat>& sc(int d1, int i, int d2, int j) const = 0;
  virtual std::pair<std::pair<int, int>, std::pair<int, int>> split(int d, int i) const = 0;
  virtual std::string basis_name(int d, int i) const = 0;
  int gens() const { return dim(1); }
};

template <class K>
void hv_axpy(HVec<K>& out, const K& a, const HVec<Rat>& row) {
  for (auto& [i, v] : row) {
    auto [it, fresh] = out.emplace(i, coeff_zero<K>());
    it->second += a * from_rat<K>(v);
    if (is_exact_zero(it->second)) out.erase(it);
  }
}

template <class K>
void hv_add(HVec<K>& out, const HVec<K>& x, const K& scale) {
  for (auto& [i, v] : x) {
    auto [it, fresh] = out.emplace(i, coeff_zero<K>());
    it->second += v * scale;
    if (is_exact_zero(it->second)) out.erase(it);
  }
}

template <class K>
HVec<K> bracket_hh(const Model& m, int d1, const HVec<K>& x, int d2, const HVec<K>& y) {
  HVec<K> out;
  for (auto& [i, xi] : x)
    for (auto& [j, yj] : y) hv_axpy(out, K(xi * yj), m.sc(d1, i, d2, j));
  return out;
}

// Free Lie algebra on m letters in the Lyndon basis.
class FreeModel : public Model {
public:
  explicit FreeModel(int letters, std::vector<std::string> names = {})
      : m_(letters), names_(std::move(names)) {
    if (names_.empty())
      for (int i = 0; i < letters; ++i) names_.push_back("x" + std::to_string(i));
  }

  int letters() const { return m_; }

  int dim(int d) const override {
    if (witt_number(m_, d) > dim_cap())
      throw CapacityError("free Lie dimension exceeds cap at degree " + std::to_string(d));
    return lyndon_basis(m_).dim(d);
  }

  int word_index(int d, const Word& w) const {
    auto& basis = lyndon_basis(m_);
    basis.ensure(d);
    auto& ws = basis.words[d];
    auto it = std::lower_bound(ws.begin(), ws.end(), w);
    if (it == ws.end() || *it != w) throw std::logic_error("not a Lyndon basis word");
    return static_cast<int>(it - ws.begin());
  }

  const Word& basis_word(int d, int i) const {
    auto& basis = lyndon_basis(m_);
    basis.ensure(d);
    return basis.words[d][i];
  }

  const std::map<Word, Rat>& basis_expansion(int d, int i) const {
    auto& basis = lyndon_basis(m_);
    basis.ensure(d);
    return basis.expansion[d][i];
  }

  const HVec<Rat>& sc(int d1, int i, int d2, int j) const override {
    auto key = std::make_tuple(d1, i, d2, j);
    auto it = sc_cache_.find(key);
    if (it != sc_cache_.end()) return it->second;
    dim(d1 + d2); // capacity check
    const auto& ex1 = basis_expansion(d1, i);
    const auto& ex2 = basis_expansion(d2, j);
    std::map<Word, Rat> prod;
    for (auto& [w1, c1] : ex1)
      for (auto& [w2, c2] : ex2) {
        prod[w1 + w2] += c1 * c2;
        prod[w2 + w1] -= c1 * c2;
      }
    auto co = lyndon_coordinates<Rat>(m_, d1 + d2, prod);
    if (!co.defect.empty()) throw std::logic_error("free bracket: non-Lie defect");
    HVec<Rat> out;
    for (auto& [w, c] : co.coords) out[word_index(d1 + d2, w)] = c;
    return sc_cache_.emplace(key, std::move(out)).first->second;
  }

  std::pair<std::pair<int, int>, std::pair<int, int>> split(int d, int i) const override {
    const Word& w = basis_word(d, i);
    size_t sp = 1;
    for (size_t k = 1; k < w.size(); ++k)
      if (w.substr(k) < w.substr(sp)) sp = k;
    Word u = w.substr(0, sp), v = w.substr(sp);
    return {{static_cast<int>(u.size()), word_index(u.size(), u)},
            {static_cast<int>(v.size()), word_index(v.size(), v)}};
  }

  std::string basis_name(int d, int i) const override {
    const Word& w = basis_word(d, i);
    std::string s;
    for (size_t k = 0; k < w.size(); ++k) {
      if (k) s += '-';
      s += names_[static_cast<unsigned char>(w[k])];
    }
    return s;
  }

  // Lyndon coordinates of the degree-d part of a series on the same letters.
  template <class K>
  HVec<K> coords_of(const Series<K>& s, int d) const {
    std::map<Word, K> comp;
    for (auto& [w, v] : s.c)
      if (static_cast<int>(w.size()) == d) comp[w] = v;
    auto co = lyndon_coordinates<K>(m_, d, comp);
    HVec<K> out;
    for (auto& [w, c] : co.coords) out[word_index(d, w)] = c;
    return out;
  }

  template <class K>
  void add_to_series(Series<K>& s, int d, const HVec<K>& x) const {
    for (auto& [i, v] : x)
      for (auto& [w, c] : basis_expansion(d, i)) s.add(w, v * from_rat<K>(c));
  }

private:
  int m_;
  std::vector<std::string> names_;
  mutable std::map<std::tuple<int, int, int, int>, HVec<Rat>> sc_cache_;
};

class AbelianModel : public Model {
public:
  explicit AbelianModel(std::vector<std::string> names) : names_(std::move(names)) {}
  int dim(int d) const override { return d == 1 ? static_cast<int>(names_.size()) : 0; }
  const HVec<Rat>& sc(int, int, int, int) const override {
    static const HVec<Rat> empty;
    return empty;
  }
  std::pair<std::pair<int, int>, std::pair<int, int>> split(int, int) const override {
    throw std::logic_error("abelian model has no degree >= 2 basis");
  }
  std::string basis_name(int d, int i) const override {
    if (d != 1) throw std::logic_error("abelian basis_name");
    return names_[i];
  }

private:
  std::vector<std::string> names_;
};

// Semidirect product: fiber is a free Lie ideal, base acts by derivations
// given on (base generator, fiber generator) pairs; everything else follows
// by the derivation rule and by iterated brackets. Basis per degree is the
// fiber basis followed by the base basis.
class SemidirectModel : public Model {
public:
  SemidirectModel(std::unique_ptr<FreeModel> fiber, std::shared_ptr<const Model> base,
                  std::vector<std::vector<HVec<Rat>>> act_gen)
      : fiber_(std::move(fiber)), base_(std::move(base)), act_gen_(std::move(act_gen)) {}

  const FreeModel& fiber() const { return *fiber_; }
  const Model& base() const { return *base_; }
  int fiber_dim(int d) const { return fiber_->dim(d); }

  int dim(int d) const override { return fiber_->dim(d) + base_->dim(d); }

  const HVec<Rat>& sc(int d1, int i, int d2, int j) const override {
    auto key = std::make_tuple(d1, i, d2, j);
    auto it = sc_cache_.find(key);
    if (it != sc_cache_.end()) return it->second;
    int f1 = fiber_->dim(d1), f2 = fiber_->dim(d2);
    bool bi = i >= f1, bj = j >= f2;
    HVec<Rat> out;
    if (!bi && !bj) {
      out = fiber_->sc(d1, i, d2, j);
    } else if (bi && !bj) {
      out = act(d1, i - f1, d2, j);
    } else if (!bi && bj) {
      HVec<Rat> a = act(d2, j - f2, d1, i);
      for (auto& [k, v] : a) out[k] = -v;
    } else {
      const HVec<Rat>& b = base_->sc(d1, i - f1, d2, j - f2);
      int off = fiber_->dim(d1 + d2);
      for (auto& [k, v] : b) out[k + off] = v;
    }
    return sc_cache_.emplace(key, std::move(out)).first->second;
  }

  std::pair<std::pair<int, int>, std::pair<int, int>> split(int d, int i) const override {
    int fd = fiber_->dim(d);
    if (i < fd) return fiber_->split(d, i);
    auto [L, R] = base_->split(d, i - fd);
    L.second += fiber_->dim(L.first);
    R.second += fiber_->dim(R.first);
    return {L, R};
  }

  std::string basis_name(int d, int i) const override {
    int fd = fiber_->dim(d);
    return i < fd ? fiber_->basis_name(d, i) : base_->basis_name(d, i - fd);
  }

private:
  // action of base basis element (bd, bi) on fiber basis element (fd, fi),
  // as fiber coordinates in degree bd+fd
  HVec<Rat> act(int bd, int bi, int fd, int fi) const {
    auto key = std::make_tuple(bd, bi, fd, fi);
    auto it = act_cache_.find(key);
    if (it != act_cache_.end()) return it->second;
    HVec<Rat> out;
    if (bd == 1) {
      if (fd == 1) {
        out = act_gen_[bi][fi];
      } else {
        auto [L, R] = fiber_->split(fd, fi);
        // D([x,y]) = [Dx, y] + [x, Dy]
        HVec<Rat> dl = act(1, bi, L.first, L.second);
        HVec<Rat> dr = act(1, bi, R.first, R.second);
        HVec<Rat> eL{{L.second, Rat(1)}}, eR{{R.second, Rat(1)}};
        out = bracket_hh<Rat>(*fiber_, L.first + 1, dl, R.first, eR);
        HVec<Rat> t = bracket_hh<Rat>(*fiber_, L.first, eL, R.first + 1, dr);
        hv_add(out, t, Rat(1));
      }
    } else {
      auto [L, R] = base_split_local(bd, bi);
      // D_{[x,y]} = D_x D_y - D_y D_x
      HVec<Rat> t1 = apply_act(L.first, L.second, R.first + fd, act(R.first, R.second, fd, fi));
      HVec<Rat> t2 = apply_act(R.first, R.second, L.first + fd, act(L.first, L.second, fd, fi));
      out = std::move(t1);
      hv_add(out, t2, Rat(-1));
    }
    return act_cache_.emplace(key, std::move(out)).first->second;
  }

  // split of a base basis element with base-local indices
  std::pair<std::pair<int, int>, std::pair<int, int>> base_split_local(int d, int i) const {
    auto [L, R] = base_->split(d, i);
    return {L, R};
  }

  HVec<Rat> apply_act(int bd, int bi, int fd, const HVec<Rat>& x) const {
    HVec<Rat> out;
    for (auto& [fi, v] : x) {
      HVec<Rat> t = act(bd, bi, fd, fi);
      hv_add(out, t, v);
    }
    return out;
  }

  std::unique_ptr<FreeModel> fiber_;
  std::shared_ptr<const Model> base_;
  std::vector<std::vector<HVec<Rat>>> act_gen_;
  mutable std::map<std::tuple<int, int, int, int>, HVec<Rat>> sc_cache_;
  mutable std::map<std::tuple<int, int, int, int>, HVec<Rat>> act_cache_;
};

// Graded vector: components in degrees 1..D.
template <class K>
struct GVec {
  int D = 0;
  std::vector<HVec<K>> comp; // comp[d-1]

  GVec() = default;
  explicit GVec(int degree) : D(degree), comp(degree) {}
  HVec<K>& at(int d) { return comp[d - 1]; }
  const HVec<K>& at(int d) const { return comp[d - 1]; }
  bool empty() const {
    for (auto& h : comp)
      if (!h.empty()) return false;
    return true;
  }
};

template <class K>
GVec<K> gv_add(const GVec<K>& x, const GVec<K>& y, const K& scale) {
  GVec<K> r = x;
  for (int d = 1; d <= x.D; ++d) hv_add(r.at(d), y.at(d), scale);
  return r;
}

template <class K>
GVec<K> gv_scale(const GVec<K>& x, const K& scale) {
  GVec<K> r(x.D);
  for (int d = 1; d <= x.D; ++d) hv_add(r.at(d), x.at(d), scale);
  return r;
}

template <class K>
GVec<K> gv_bracket(const Model& m, const GVec<K>& x, const GVec<K>& y) {
  GVec<K> r(x.D);
  for (int d1 = 1; d1 <= x.D; ++d1) {
    if (x.at(d1).empty()) continue;
    for (int d2 = 1; d1 + d2 <= x.D; ++d2) {
      if (y.at(d2).empty()) continue;
      HVec<K> t = bracket_hh(m, d1, x.at(d1), d2, y.at(d2));
      hv_add(r.at(d1 + d2), t, from_rat<K>(Rat(1)));
    }
  }
  return r;
}

template <class K>
Real gv_max_abs(const GVec<K>& x, int d = 0) {
  Real worst(0);
  for (int k = 1; k <= x.D; ++k) {
    if (d && k != d) continue;
    for (auto& [i, v] : x.at(k)) {
      Real a = coeff_abs(v);
      if (a > worst) worst = a;
    }
  }
  return worst;
}

// log(exp x . exp y) evaluated through the universal BCH table in any model.
template <class K>
GVec<K> bch_eval(const Model& m, const GVec<K>& x, const GVec<K>& y) {
  int D = x.D;
  const BchTable& table = bch_table(D);
  LyndonBasis& b2 = lyndon_basis(2);
  GVec<K> out(D);
  std::map<int, GVec<K>> tree_val; // by tree node id in the 2-letter pool
  std::function<const GVec<K>&(int)> eval = [&](int id) -> const GVec<K>& {
    auto it = tree_val.find(id);
    if (it != tree_val.end()) return it->second;
    const Tree& t = b2.pool[id];
    GVec<K> v;
    if (t.leaf >= 0)
      v = t.leaf == 0 ? x : y;
    else
      v = gv_bracket(m, eval(t.l), eval(t.r));
    return tree_val.emplace(id, std::move(v)).first->second;
  };
  for (int d = 1; d <= D; ++d) {
    b2.ensure(d);
    for (auto& [idx, coeff] : table.terms[d]) {
      const GVec<K>& tv = eval(b2.trees[d][idx]);
      K c = from_rat<K>(coeff);
      for (int k = 1; k <= D; ++k) hv_add(out.at(k), tv.at(k), c);
    }
  }
  return out;
}

// log of a product of group-likes exp(x_1)...exp(x_k) via nested BCH.
template <class K>
GVec<K> bch_chain(const Model& m, const std::vector<GVec<K>>& logs) {
  if (logs.empty()) throw std::invalid_argument("bch_chain: empty");
  GVec<K> acc = logs[0];
  for (size_t i = 1; i < logs.size(); ++i) acc = bch_eval(m, acc, logs[i]);
  return acc;
}

// Degree-preserving Lie morphism determined by degree-1 generator images.
class LieMorphism {
public:
  LieMorphism(const Model* src, const Model* dst, std::vector<HVec<Rat>> gen_img)
      : src_(src), dst_(dst), gen_img_(std::move(gen_img)) {}

  const Model& src() const { return *src_; }
  const Model& dst() const { return *dst_; }

  const HVec<Rat>& basis_image(int d, int i) const {
    auto key = std::make_pair(d, i);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    HVec<Rat> out;
    if (d == 1) {
      out = gen_img_[i];
    } else {
      auto [L, R] = src_->split(d, i);
      out = bracket_hh<Rat>(*dst_, L.first, basis_image(L.first, L.second), R.first,
                            basis_image(R.first, R.second));
    }
    return cache_.emplace(key, std::move(out)).first->second;
  }

  template <class K>
  GVec<K> apply(const GVec<K>& x) const {
    GVec<K> r(x.D);
    for (int d = 1; d <= x.D; ++d)
      for (auto& [i, v] : x.at(d)) {
        const HVec<Rat>& img = basis_image(d, i);
        hv_axpy(r.at(d), v, img);
      }
    return r;
  }

  // relator images vanish: morphism compatible with brackets of generators
  bool verify() const {
    int g = src_->gens();
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        HVec<Rat> lhs;
        for (auto& [k, v] : src_->sc(1, i, 1, j)) hv_add(lhs, basis_image(2, k), v);
        HVec<Rat> rhs = bracket_hh<Rat>(*dst_, 1, gen_img_[i], 1, gen_img_[j]);
        if (lhs != rhs) return false;
      }
    return true;
  }

private:
  const Model* src_;
  const Model* dst_;
  std::vector<HVec<Rat>> gen_img_;
  mutable std::map<std::pair<int, int>, HVec<Rat>> cache_;
};

// Conversions between free-model coordinates and series on the same letters.
template <class K>
GVec<K> series_to_gvec(const FreeModel& f, const Series<K>& lie_log, int D) {
  GVec<K> r(D);
  for (int d = 1; d <= D; ++d) r.at(d) = f.coords_of(lie_log, d);
  return r;
}

template <class K>
Series<K> gvec_to_series(const FreeModel& f, const GVec<K>& x) {
  Series<K> s(x.D);
  for (int d = 1; d <= x.D; ++d) f.add_to_series(s, d, x.at(d));
  return s;
}

} // namespace cyclo
