// Elements sum_{w,v} a_{w,v} delta_w delta_v^d of the localized twisted group
// algebra of W x W^d, with coefficients meromorphic in (z, lambda, hbar).
//
// Twisted product:  (a delta_w delta_v^d)(b delta_x delta_y^d) = a * ^{w v^d}b delta_{wx} delta_{vy}^d
// Polynomial action: g(f) = sum a_{w,v} * ^{w v^d} f

#ifndef ELLHECKE_HECKE_HPP
#define ELLHECKE_HECKE_HPP

#include "ellhecke/merom_expr.hpp"
#include "ellhecke/root_datum.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellhecke {

/// (w, v): w in W acts on z, v in W^d acts on lambda. Indices into WeylGroup.
using HeckeKey = std::pair<std::size_t, std::size_t>;

class HeckeElement {
public:
  explicit HeckeElement(std::shared_ptr<const WeylGroup> group) : group_(std::move(group)) {
    if (!group_) throw std::invalid_argument("HeckeElement needs a Weyl group");
  }

  static HeckeElement identity(std::shared_ptr<const WeylGroup> group) {
    return delta(std::move(group), WeylGroup::identity(), WeylGroup::identity());
  }

  static HeckeElement delta(std::shared_ptr<const WeylGroup> group, std::size_t w, std::size_t v,
                            MeroExpr coeff = MeroExpr(1.0)) {
    HeckeElement h(std::move(group));
    h.add(w, v, std::move(coeff));
    return h;
  }

  /// Accumulates into the (w, v) coefficient. Literal zeros are dropped.
  void add(std::size_t w, std::size_t v, MeroExpr coeff) {
    if (w >= group_->order() || v >= group_->order()) throw std::out_of_range("Weyl element index");
    if (coeff.is_literal_zero()) return;
    check_rank(coeff);
    auto [it, inserted] = coeffs_.try_emplace({w, v}, coeff);
    if (!inserted) it->second = it->second + coeff;
  }

  MeroExpr coefficient(std::size_t w, std::size_t v) const {
    auto it = coeffs_.find({w, v});
    return it == coeffs_.end() ? MeroExpr(0.0) : it->second;
  }
  bool contains(std::size_t w, std::size_t v) const { return coeffs_.count({w, v}) != 0; }

  const std::map<HeckeKey, MeroExpr>& terms() const { return coeffs_; }
  std::vector<HeckeKey> keys() const {
    std::vector<HeckeKey> k;
    for (const auto& [key, c] : coeffs_) k.push_back(key);
    return k;
  }
  std::size_t size() const { return coeffs_.size(); }

  const WeylGroup& group() const { return *group_; }
  const std::shared_ptr<const WeylGroup>& group_ptr() const { return group_; }

  /// Supported only on delta_v^d (w = e for every key).
  bool is_dual_side() const {
    for (const auto& [key, c] : coeffs_)
      if (key.first != WeylGroup::identity()) return false;
    return true;
  }

  std::string key_string(const HeckeKey& key) const {
    std::ostringstream os;
    auto word = [&](std::size_t k) {
      const auto& w = group_->element(k).word;
      if (w.empty()) return std::string("e");
      std::string s = "s";
      for (int i : w) s += std::to_string(i + 1);
      return s;
    };
    os << "(" << word(key.first) << ", " << word(key.second) << "^d)";
    return os.str();
  }

private:
  void check_rank(const MeroExpr& e) const {
    visit_forms(e, [&](const LinearForm& f, bool) {
      if (f.rank() != group_->rank() || f.lam.size() != group_->rank())
        throw std::invalid_argument("coefficient rank does not match the root datum");
    });
  }

  std::shared_ptr<const WeylGroup> group_;
  std::map<HeckeKey, MeroExpr> coeffs_;
};

inline void require_same_datum(const HeckeElement& a, const HeckeElement& b) {
  if (a.group_ptr() != b.group_ptr() && !(a.group().datum() == b.group().datum()))
    throw std::invalid_argument("Hecke elements over different root data");
}

inline HeckeElement multiply(const HeckeElement& a, const HeckeElement& b) {
  require_same_datum(a, b);
  const WeylGroup& g = a.group();
  HeckeElement out(a.group_ptr());
  for (const auto& [ka, ca] : a.terms()) {
    const auto& w = g.element(ka.first);
    const auto& v = g.element(ka.second);
    for (const auto& [kb, cb] : b.terms())
      out.add(g.multiply(ka.first, kb.first), g.multiply(ka.second, kb.second), ca * twist(cb, w, v));
  }
  return out;
}

inline HeckeElement operator*(const HeckeElement& a, const HeckeElement& b) { return multiply(a, b); }

inline HeckeElement operator+(const HeckeElement& a, const HeckeElement& b) {
  require_same_datum(a, b);
  HeckeElement out = a;
  for (const auto& [k, c] : b.terms()) out.add(k.first, k.second, c);
  return out;
}

/// f * H: left multiplication by a function, coefficientwise.
inline HeckeElement scale(const MeroExpr& f, const HeckeElement& h) {
  HeckeElement out(h.group_ptr());
  for (const auto& [k, c] : h.terms()) out.add(k.first, k.second, f * c);
  return out;
}

inline MeroExpr act_on_section(const HeckeElement& h, const MeroExpr& f) {
  std::vector<MeroExpr> terms;
  const WeylGroup& g = h.group();
  for (const auto& [k, c] : h.terms()) terms.push_back(c * twist(f, g.element(k.first), g.element(k.second)));
  if (terms.empty()) return MeroExpr(0.0);
  return sum(std::move(terms));
}

class NonReducedWordError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The dynamical Demazure-Lusztig operators of one root datum, their Langlands
/// dual counterparts, and the map Gamma. Products T_w are cached per word.
class DynamicalHecke {
public:
  explicit DynamicalHecke(const RootDatum& rd, bool negative_control = false)
      : group_(std::make_shared<const WeylGroup>(rd)), corrupt_(negative_control) {}

  const std::shared_ptr<const WeylGroup>& group_ptr() const { return group_; }
  const WeylGroup& group() const { return *group_; }
  int rank() const { return group_->rank(); }
  bool negative_control() const { return corrupt_; }

  LinearForm z_root(int i) const { return LinearForm::z_form(group_->datum().simple_root(i)); }
  LinearForm lam_coroot(int i) const { return LinearForm::lam_form(group_->datum().simple_coroot(i)); }
  LinearForm hbar() const { return LinearForm::hbar(rank()); }

  HeckeElement identity() const { return HeckeElement::identity(group_); }

  /// T_alpha = p delta_alpha^d + q delta_alpha delta_alpha^d with
  ///   p = th(h) th(z_a - l_a) / (th(z_a) th(h - l_a)),
  ///   q = th(l_a) th(h - z_a) / (th(z_a) th(h - l_a)),
  /// where z_a = <alpha, z> and l_a = <lambda, alpha^vee>.
  /// In negative-control mode q carries the wrong sign.
  HeckeElement dl_dynamical(int i) const {
    check_simple(i);
    const auto z = z_root(i), l = lam_coroot(i), h = hbar();
    const MeroExpr den = theta_of(z) * theta_of(h - l);
    MeroExpr p = (theta_of(h) * theta_of(z - l)) / den;
    MeroExpr q = (theta_of(l) * theta_of(h - z)) / den;
    if (corrupt_) q = -q;
    const std::size_t s = group_->simple_reflection(i);
    HeckeElement t(group_);
    t.add(WeylGroup::identity(), s, p);
    t.add(s, s, q);
    return t;
  }

  /// T^L_alpha = p^L delta_alpha + q^L delta_alpha delta_alpha^d, the operator of
  /// the dual system with z_a <-> l_a and hbar -> -hbar:
  ///   p^L = th(h) th(l_a - z_a) / (th(l_a) th(h + z_a)),
  ///   q^L = th(z_a) th(h + l_a) / (th(l_a) th(h + z_a)).
  HeckeElement dl_dual_langlands(int i, bool flip_p_sign = false) const {
    check_simple(i);
    const auto z = z_root(i), l = lam_coroot(i), h = hbar();
    const MeroExpr den = theta_of(l) * theta_of(h + z);
    MeroExpr p = (theta_of(h) * theta_of(l - z)) / den;
    MeroExpr q = (theta_of(z) * theta_of(h + l)) / den;
    if (flip_p_sign) p = -p;
    const std::size_t s = group_->simple_reflection(i);
    HeckeElement t(group_);
    t.add(s, WeylGroup::identity(), p);
    t.add(s, s, q);
    return t;
  }

  /// T_{s_{i1}} T_{s_{i2}} ... for a reduced word (0-based letters).
  HeckeElement t_w(const std::vector<int>& word) const {
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(word); it != cache_.end()) return it->second;
    }
    std::size_t acc_elem = WeylGroup::identity();
    HeckeElement acc = identity();
    for (int i : word) {
      check_simple(i);
      const std::size_t next = group_->multiply(acc_elem, group_->simple_reflection(i));
      if (group_->element(next).length() != group_->element(acc_elem).length() + 1)
        throw NonReducedWordError("t_w: word is not reduced");
      acc = multiply(acc, dl_dynamical(i));
      acc_elem = next;
    }
    std::lock_guard lock(mu_);
    return cache_.emplace(word, acc).first->second;
  }

  /// T_w for the stored reduced word of w.
  HeckeElement t_element(std::size_t w) const { return t_w(group_->element(w).word); }

  /// sigma_alpha = th(l_a + h)/th(l_a) + th(l_a - h)/th(l_a) delta_alpha^d, an
  /// element of the dual GKV algebra with lambda-only coefficients.
  HeckeElement gkv_dual_generator(int i) const {
    check_simple(i);
    const auto l = lam_coroot(i), h = hbar();
    HeckeElement s(group_);
    s.add(WeylGroup::identity(), WeylGroup::identity(), theta_of(l + h) / theta_of(l));
    s.add(WeylGroup::identity(), group_->simple_reflection(i), theta_of(l - h) / theta_of(l));
    return s;
  }

  /// Gamma(sum_v a_v delta_v^d) = sum_v a_v T_v.
  HeckeElement gamma(const HeckeElement& sigma) const {
    if (!sigma.is_dual_side()) throw std::invalid_argument("gamma: input has non-dual-side support");
    if (sigma.group_ptr() != group_ && !(sigma.group().datum() == group_->datum()))
      throw std::invalid_argument("gamma: datum mismatch");
    HeckeElement out(group_);
    for (const auto& [k, c] : sigma.terms()) out = out + scale(c, t_element(k.second));
    return out;
  }

private:
  void check_simple(int i) const {
    if (i < 0 || i >= rank()) throw std::invalid_argument("not a simple root index: " + std::to_string(i));
  }

  std::shared_ptr<const WeylGroup> group_;
  bool corrupt_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<int>, HeckeElement> cache_;
};

}  // namespace ellhecke

#endif  // ELLHECKE_HECKE_HPP
