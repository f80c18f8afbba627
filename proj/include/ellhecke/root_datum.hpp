// Finite-type root data, their Weyl groups and Langlands duality.
//
// Both lattices X* (characters) and X_* (cocharacters) are presented as Z^n
// with the standard dot product as the perfect pairing. The Cartan matrix
// convention is cartan(i, j) = <alpha_j, alpha_i^vee>.
//
//   adjoint:          alpha_i = e_i in X*,   alpha_i^vee = row i of the Cartan matrix
//   simply connected: alpha_i^vee = e_i,     alpha_i = column i of the Cartan matrix
//
// so that dualizing is a pure swap of the two presentations.

#ifndef ELLHECKE_ROOT_DATUM_HPP
#define ELLHECKE_ROOT_DATUM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellhecke {

using IVec = Eigen::VectorXi;
using IMat = Eigen::MatrixXi;

enum class Isogeny { adjoint, simply_connected };

inline std::string to_string(Isogeny iso) {
  return iso == Isogeny::adjoint ? "adjoint" : "simply_connected";
}

inline Isogeny parse_isogeny(const std::string& s) {
  if (s == "adjoint" || s == "ad") return Isogeny::adjoint;
  if (s == "simply_connected" || s == "sc") return Isogeny::simply_connected;
  throw std::invalid_argument("unknown isogeny tag '" + s + "'");
}

inline int pairing(const IVec& character, const IVec& cocharacter) {
  return character.dot(cocharacter);
}

class RootDatum {
public:
  RootDatum(std::string label, Isogeny iso, IMat cartan)
      : label_(std::move(label)), iso_(iso), cartan_(std::move(cartan)) {
    const auto n = cartan_.rows();
    if (n < 1 || cartan_.cols() != n) throw std::invalid_argument("cartan matrix must be square");
    roots_.resize(n, n);
    coroots_.resize(n, n);
    if (iso_ == Isogeny::adjoint) {
      roots_.setIdentity();
      coroots_ = cartan_.transpose();
    } else {
      coroots_.setIdentity();
      roots_ = cartan_;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (pairing(roots_.col(j), coroots_.col(i)) != cartan_(i, j))
          throw std::logic_error("root datum: pairing disagrees with the Cartan matrix");
  }

  const std::string& label() const { return label_; }
  Isogeny isogeny() const { return iso_; }
  int rank() const { return static_cast<int>(cartan_.rows()); }
  const IMat& cartan() const { return cartan_; }

  /// Column i is alpha_i in X* coordinates.
  const IMat& simple_roots() const { return roots_; }
  /// Column i is alpha_i^vee in X_* coordinates.
  const IMat& simple_coroots() const { return coroots_; }

  IVec simple_root(int i) const { return roots_.col(i); }
  IVec simple_coroot(int i) const { return coroots_.col(i); }

  /// s_i as a matrix on X*: mu -> mu - <mu, alpha_i^vee> alpha_i.
  IMat reflection_on_star(int i) const {
    const auto n = rank();
    return IMat::Identity(n, n) - roots_.col(i) * coroots_.col(i).transpose();
  }
  /// s_i as a matrix on X_*: nu -> nu - <alpha_i, nu> alpha_i^vee.
  IMat reflection_on_costar(int i) const {
    const auto n = rank();
    return IMat::Identity(n, n) - coroots_.col(i) * roots_.col(i).transpose();
  }

  bool operator==(const RootDatum& o) const {
    return label_ == o.label_ && iso_ == o.iso_ && cartan_ == o.cartan_;
  }

private:
  std::string label_;
  Isogeny iso_;
  IMat cartan_;
  IMat roots_;
  IMat coroots_;
};

namespace detail {

inline IMat cartan_block(const std::string& t) {
  IMat c;
  if (t == "A1") {
    c.resize(1, 1);
    c << 2;
  } else if (t == "A2") {
    c.resize(2, 2);
    c << 2, -1, -1, 2;
  } else if (t == "A3") {
    c.resize(3, 3);
    c << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  } else if (t == "B2") {
    // alpha_1 long, alpha_2 short
    c.resize(2, 2);
    c << 2, -1, -2, 2;
  } else if (t == "C2") {
    c.resize(2, 2);
    c << 2, -2, -1, 2;
  } else if (t == "B3") {
    c.resize(3, 3);
    c << 2, -1, 0, -1, 2, -1, 0, -2, 2;
  } else if (t == "C3") {
    c.resize(3, 3);
    c << 2, -1, 0, -1, 2, -2, 0, -1, 2;
  } else if (t == "G2") {
    // alpha_1 short, alpha_2 long
    c.resize(2, 2);
    c << 2, -1, -3, 2;
  }
  return c;
}

inline std::string dual_label(const std::string& label) {
  if (label == "B2") return "C2";
  if (label == "C2") return "B2";
  if (label == "B3") return "C3";
  if (label == "C3") return "B3";
  return label;
}

}  // namespace detail

inline const std::vector<std::string>& supported_types() {
  static const std::vector<std::string> types{"A1", "A1xA1", "A2", "A3", "B2", "C2", "B3", "C3", "G2"};
  return types;
}

inline RootDatum build_root_datum(const std::string& label, Isogeny iso = Isogeny::adjoint) {
  std::string key = label;
  std::replace(key.begin(), key.end(), 'X', 'x');
  if (key == "A1x A1" || key == "A1*A1") key = "A1xA1";
  IMat c;
  if (key == "A1xA1") {
    c.resize(2, 2);
    c << 2, 0, 0, 2;
  } else {
    c = detail::cartan_block(key);
  }
  if (c.size() == 0) throw std::invalid_argument("unsupported Cartan type '" + label + "'");
  return RootDatum(key, iso, c);
}

/// X* and X_* swapped, roots and coroots swapped, Cartan matrix transposed.
inline RootDatum langlands_dual(const RootDatum& rd) {
  const Isogeny iso = rd.isogeny() == Isogeny::adjoint ? Isogeny::simply_connected : Isogeny::adjoint;
  return RootDatum(detail::dual_label(rd.label()), iso, rd.cartan().transpose());
}

/// m_ij, the order of s_i s_j.
inline int braid_order(const RootDatum& rd, int i, int j) {
  if (i == j) throw std::invalid_argument("braid_order: indices must differ");
  const int prod = rd.cartan()(i, j) * rd.cartan()(j, i);
  switch (prod) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: throw std::logic_error("braid_order: not a finite-type Cartan matrix");
  }
}

struct Root {
  IVec root;     // in X*
  IVec coroot;   // in X_*
  IVec simple_coeffs;  // root as a combination of simple roots
};

/// Twice the Weyl vectors: 2 rho in X*, 2 rho^vee in X_*.
struct RhoVectors {
  IVec two_rho;
  IVec two_rho_vee;
};

struct WeylElement {
  std::vector<int> word;  // reduced
  IMat mat_on_costar;
  IMat mat_on_star;
  int length() const { return static_cast<int>(word.size()); }
};

/// The finite Weyl group of a root datum, its positive roots, and the lattice
/// combinatorics built on them. Elements are addressed by index; index 0 is e.
class WeylGroup {
public:
  explicit WeylGroup(RootDatum rd) : rd_(std::move(rd)) {
    enumerate_roots();
    enumerate_elements();
  }

  const RootDatum& datum() const { return rd_; }
  int rank() const { return rd_.rank(); }
  std::size_t order() const { return elems_.size(); }
  const WeylElement& element(std::size_t k) const { return elems_.at(k); }
  const std::vector<WeylElement>& elements() const { return elems_; }
  static constexpr std::size_t identity() { return 0; }

  std::size_t simple_reflection(int i) const { return simple_.at(static_cast<std::size_t>(i)); }

  std::size_t index_of(const IMat& mat_on_costar) const {
    auto it = by_matrix_.find(key(mat_on_costar));
    if (it == by_matrix_.end()) throw std::logic_error("matrix is not an element of W");
    return it->second;
  }

  std::size_t multiply(std::size_t a, std::size_t b) const {
    return index_of(elems_[a].mat_on_costar * elems_[b].mat_on_costar);
  }

  std::size_t inverse(std::size_t a) const {
    return index_of(elems_[a].mat_on_star.transpose());
  }

  /// Product of simple reflections s_{w[0]} s_{w[1]} ...; any word.
  std::size_t from_word(const std::vector<int>& word) const {
    std::size_t acc = identity();
    for (int i : word) {
      if (i < 0 || i >= rank()) throw std::invalid_argument("word letter out of range");
      acc = multiply(acc, simple_reflection(i));
    }
    return acc;
  }

  std::size_t longest() const {
    return static_cast<std::size_t>(std::distance(
        elems_.begin(), std::max_element(elems_.begin(), elems_.end(), [](const auto& a, const auto& b) {
          return a.length() < b.length();
        })));
  }

  /// A reduced word for w obtained by repeatedly stripping a left descent,
  /// taking the smallest or the largest descent index each time.
  std::vector<int> reduced_word(std::size_t w, bool largest_descent = false) const {
    std::vector<int> word;
    std::size_t cur = w;
    while (elems_.at(cur).length() > 0) {
      int pick = -1;
      for (int i = 0; i < rank(); ++i) {
        if (elems_[multiply(simple_reflection(i), cur)].length() < elems_[cur].length()) {
          pick = i;
          if (!largest_descent) break;
        }
      }
      word.push_back(pick);
      cur = multiply(simple_reflection(pick), cur);
    }
    return word;
  }

  const std::vector<Root>& positive_roots() const { return positive_; }

  /// s_beta for a positive root beta (given by index into positive_roots()).
  std::size_t reflection(std::size_t root_index) const {
    const auto& r = positive_.at(root_index);
    const auto n = rank();
    IMat m = IMat::Identity(n, n) - r.coroot * r.root.transpose();
    return index_of(m);
  }

  /// Phi(w) = w Phi^- intersected with Phi^+, i.e. the positive beta with w^{-1} beta < 0.
  /// Returns indices into positive_roots().
  std::vector<std::size_t> inversion_set(std::size_t w) const {
    const IMat winv_star = elems_[w].mat_on_costar.transpose();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < positive_.size(); ++k) {
      IVec image = winv_star * positive_[k].root;
      if (is_negative_root(image)) out.push_back(k);
    }
    return out;
  }

  RhoVectors rho_vectors() const {
    const auto n = rank();
    RhoVectors r{IVec::Zero(n), IVec::Zero(n)};
    for (const auto& beta : positive_) {
      r.two_rho += beta.root;
      r.two_rho_vee += beta.coroot;
    }
    return r;
  }

private:
  static std::vector<int> key(const IMat& m) {
    return std::vector<int>(m.data(), m.data() + m.size());
  }

  bool is_negative_root(const IVec& v) const {
    IVec neg = -v;
    for (const auto& beta : positive_)
      if (beta.root == neg) return true;
    return false;
  }

  void enumerate_roots() {
    const int n = rank();
    std::map<std::vector<int>, Root> seen;
    std::deque<Root> todo;
    for (int i = 0; i < n; ++i) {
      Root r{rd_.simple_root(i), rd_.simple_coroot(i), IVec::Unit(n, i)};
      seen.emplace(key(r.simple_coeffs), r);
      todo.push_back(r);
    }
    while (!todo.empty()) {
      Root r = todo.front();
      todo.pop_front();
      for (int i = 0; i < n; ++i) {
        const int k = pairing(r.root, rd_.simple_coroot(i));
        const int kv = pairing(rd_.simple_root(i), r.coroot);
        Root s{r.root - k * rd_.simple_root(i), r.coroot - kv * rd_.simple_coroot(i),
               r.simple_coeffs - k * IVec::Unit(n, i)};
        if (seen.emplace(key(s.simple_coeffs), s).second) todo.push_back(s);
      }
    }
    for (auto& [k, r] : seen)
      if (r.simple_coeffs.minCoeff() >= 0) positive_.push_back(r);
    std::stable_sort(positive_.begin(), positive_.end(), [](const Root& a, const Root& b) {
      return a.simple_coeffs.sum() < b.simple_coeffs.sum();
    });
  }

  // Breadth-first closure from e, right-multiplying by generators, so the first
  // word reaching an element is a shortest (reduced) one.
  void enumerate_elements() {
    const int n = rank();
    std::vector<IMat> gen_costar, gen_star;
    for (int i = 0; i < n; ++i) {
      gen_costar.push_back(rd_.reflection_on_costar(i));
      gen_star.push_back(rd_.reflection_on_star(i));
    }
    elems_.push_back({{}, IMat::Identity(n, n), IMat::Identity(n, n)});
    by_matrix_.emplace(key(elems_[0].mat_on_costar), 0);
    for (std::size_t head = 0; head < elems_.size(); ++head) {
      for (int i = 0; i < n; ++i) {
        IMat m = elems_[head].mat_on_costar * gen_costar[static_cast<std::size_t>(i)];
        if (by_matrix_.count(key(m))) continue;
        WeylElement e;
        e.word = elems_[head].word;
        e.word.push_back(i);
        e.mat_on_costar = m;
        e.mat_on_star = elems_[head].mat_on_star * gen_star[static_cast<std::size_t>(i)];
        by_matrix_.emplace(key(m), elems_.size());
        elems_.push_back(std::move(e));
        if (elems_.size() > 100000) throw std::logic_error("Weyl group is not finite");
      }
    }
    for (int i = 0; i < n; ++i) simple_.push_back(by_matrix_.at(key(gen_costar[static_cast<std::size_t>(i)])));
  }

  RootDatum rd_;
  std::vector<Root> positive_;
  std::vector<WeylElement> elems_;
  std::map<std::vector<int>, std::size_t> by_matrix_;
  std::vector<std::size_t> simple_;
};

}  // namespace ellhecke

#endif  // ELLHECKE_ROOT_DATUM_HPP
