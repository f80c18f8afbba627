// Meromorphic functions of (z, lambda, hbar) built from theta factors of
// integer linear forms, closed under sum, product, quotient and negation.
//
// Expressions are immutable trees with shared subtrees. There is no symbolic
// simplification: identities are established by evaluating at sampled points
// of the universal cover C^n x C^n.

#ifndef ELLHECKE_MEROM_EXPR_HPP
#define ELLHECKE_MEROM_EXPR_HPP

#include "ellhecke/root_datum.hpp"
#include "ellhecke/theta.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ellhecke {

using CVec = Eigen::VectorXcd;

/// <z_coeffs, z> + <lam_coeffs, lambda> + h_coeff * hbar.
/// z_coeffs lives in X* (pairs with z in X_* (x) C), lam_coeffs in X_*.
struct LinearForm {
  IVec z;
  IVec lam;
  int h = 0;

  static LinearForm zero(int rank) { return {IVec::Zero(rank), IVec::Zero(rank), 0}; }
  static LinearForm z_form(const IVec& character) {
    return {character, IVec::Zero(character.size()), 0};
  }
  static LinearForm lam_form(const IVec& cocharacter) {
    return {IVec::Zero(cocharacter.size()), cocharacter, 0};
  }
  static LinearForm hbar(int rank, int multiple = 1) {
    return {IVec::Zero(rank), IVec::Zero(rank), multiple};
  }

  int rank() const { return static_cast<int>(z.size()); }
  bool is_constant() const { return z.isZero() && lam.isZero(); }

  LinearForm operator-() const { return {-z, -lam, -h}; }
  friend LinearForm operator+(const LinearForm& a, const LinearForm& b) {
    a.check_rank(b);
    return {a.z + b.z, a.lam + b.lam, a.h + b.h};
  }
  friend LinearForm operator-(const LinearForm& a, const LinearForm& b) { return a + (-b); }
  friend LinearForm operator*(int k, const LinearForm& a) { return {k * a.z, k * a.lam, k * a.h}; }
  bool operator==(const LinearForm& o) const { return z == o.z && lam == o.lam && h == o.h; }

  std::string str() const {
    std::ostringstream os;
    os << "z[" << z.transpose() << "] lam[" << lam.transpose() << "] h " << h;
    return os.str();
  }

private:
  void check_rank(const LinearForm& b) const {
    if (z.size() != b.z.size() || lam.size() != b.lam.size())
      throw std::invalid_argument("linear form rank mismatch");
  }
};

/// A point (z, lambda, hbar) of the universal cover.
struct EvalPoint {
  CVec z;
  CVec lam;
  cplx h;

  int rank() const { return static_cast<int>(z.size()); }
};

inline cplx evaluate(const LinearForm& f, const EvalPoint& p) {
  if (f.z.size() != p.z.size() || f.lam.size() != p.lam.size())
    throw std::invalid_argument("linear form and point have different rank");
  return f.z.cast<cplx>().dot(p.z) + f.lam.cast<cplx>().dot(p.lam) + static_cast<double>(f.h) * p.h;
}

/// Raised when a denominator theta factor is smaller than the guard.
class NearDivisorError : public std::runtime_error {
public:
  NearDivisorError(LinearForm form, cplx value)
      : std::runtime_error("near-divisor evaluation: |theta(" + form.str() + ")| = " +
                           std::to_string(std::abs(value))),
        form_(std::move(form)),
        value_(value) {}
  const LinearForm& form() const { return form_; }
  cplx value() const { return value_; }

private:
  LinearForm form_;
  cplx value_;
};

class HigherOrderPoleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExprNode;

class MeroExpr {
public:
  MeroExpr() : MeroExpr(cplx{0.0}) {}
  MeroExpr(cplx c);  // NOLINT: constants convert implicitly
  MeroExpr(double c) : MeroExpr(cplx{c}) {}
  explicit MeroExpr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

  const ExprNode& node() const { return *node_; }
  bool same_node(const MeroExpr& o) const { return node_ == o.node_; }

  /// True only for a literal Const(0) node.
  bool is_literal_zero() const;

private:
  std::shared_ptr<const ExprNode> node_;
};

struct ThetaOf {
  LinearForm form;
};
struct Const {
  cplx value;
};
struct Sum {
  std::vector<MeroExpr> terms;
};
struct Prod {
  std::vector<MeroExpr> factors;
};
struct Quot {
  MeroExpr num;
  MeroExpr den;
};
struct Neg {
  MeroExpr child;
};

struct ExprNode {
  std::variant<ThetaOf, Const, Sum, Prod, Quot, Neg> v;
};

inline MeroExpr::MeroExpr(cplx c) : node_(std::make_shared<const ExprNode>(ExprNode{Const{c}})) {}

inline bool MeroExpr::is_literal_zero() const {
  const auto* c = std::get_if<Const>(&node_->v);
  return c && c->value == cplx{0.0};
}

inline MeroExpr make(ExprNode n) { return MeroExpr(std::make_shared<const ExprNode>(std::move(n))); }

inline MeroExpr theta_of(LinearForm f) { return make({ThetaOf{std::move(f)}}); }
inline MeroExpr constant(cplx c) { return MeroExpr(c); }
inline MeroExpr sum(std::vector<MeroExpr> terms) { return make({Sum{std::move(terms)}}); }
inline MeroExpr prod(std::vector<MeroExpr> factors) { return make({Prod{std::move(factors)}}); }
inline MeroExpr quot(MeroExpr num, MeroExpr den) { return make({Quot{std::move(num), std::move(den)}}); }
inline MeroExpr neg(MeroExpr e) { return make({Neg{std::move(e)}}); }

inline MeroExpr operator+(const MeroExpr& a, const MeroExpr& b) { return sum({a, b}); }
inline MeroExpr operator-(const MeroExpr& a, const MeroExpr& b) { return sum({a, neg(b)}); }
inline MeroExpr operator-(const MeroExpr& a) { return neg(a); }
inline MeroExpr operator*(const MeroExpr& a, const MeroExpr& b) { return prod({a, b}); }
inline MeroExpr operator/(const MeroExpr& a, const MeroExpr& b) { return quot(a, b); }

struct EvalOptions {
  /// Denominator theta factors with modulus below this raise NearDivisorError.
  double guard = 1e-3;
};

namespace detail {

inline cplx eval_node(const MeroExpr& e, const EvalPoint& p, const ThetaParams& params,
                      const EvalOptions& opt, bool in_den) {
  return std::visit(
      [&](const auto& n) -> cplx {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ThetaOf>) {
          cplx v = theta(evaluate(n.form, p), params);
          if (in_den && (std::abs(v) <= opt.guard || v == cplx{0.0})) throw NearDivisorError(n.form, v);
          return v;
        } else if constexpr (std::is_same_v<N, Const>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, Sum>) {
          cplx acc = 0.0;
          for (const auto& t : n.terms) acc += eval_node(t, p, params, opt, in_den);
          return acc;
        } else if constexpr (std::is_same_v<N, Prod>) {
          cplx acc = 1.0;
          for (const auto& f : n.factors) acc *= eval_node(f, p, params, opt, in_den);
          return acc;
        } else if constexpr (std::is_same_v<N, Quot>) {
          cplx den = eval_node(n.den, p, params, opt, true);
          if (den == cplx{0.0}) throw std::domain_error("division by an exact zero");
          return eval_node(n.num, p, params, opt, in_den) / den;
        } else {
          return -eval_node(n.child, p, params, opt, in_den);
        }
      },
      e.node().v);
}

}  // namespace detail

inline cplx eval(const MeroExpr& e, const EvalPoint& p, const ThetaParams& params,
                 const EvalOptions& opt = {}) {
  return detail::eval_node(e, p, params, opt, false);
}

/// Rebuild the tree with every linear form replaced by map(form).
inline MeroExpr map_forms(const MeroExpr& e, const std::function<LinearForm(const LinearForm&)>& map) {
  return std::visit(
      [&](const auto& n) -> MeroExpr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ThetaOf>) {
          return theta_of(map(n.form));
        } else if constexpr (std::is_same_v<N, Const>) {
          return e;
        } else if constexpr (std::is_same_v<N, Sum>) {
          std::vector<MeroExpr> t;
          t.reserve(n.terms.size());
          for (const auto& c : n.terms) t.push_back(map_forms(c, map));
          return sum(std::move(t));
        } else if constexpr (std::is_same_v<N, Prod>) {
          std::vector<MeroExpr> t;
          t.reserve(n.factors.size());
          for (const auto& c : n.factors) t.push_back(map_forms(c, map));
          return prod(std::move(t));
        } else if constexpr (std::is_same_v<N, Quot>) {
          return quot(map_forms(n.num, map), map_forms(n.den, map));
        } else {
          return neg(map_forms(n.child, map));
        }
      },
      e.node().v);
}

inline void visit_forms(const MeroExpr& e, const std::function<void(const LinearForm&, bool)>& fn,
                        bool in_den = false) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ThetaOf>) {
          fn(n.form, in_den);
        } else if constexpr (std::is_same_v<N, Sum>) {
          for (const auto& c : n.terms) visit_forms(c, fn, in_den);
        } else if constexpr (std::is_same_v<N, Prod>) {
          for (const auto& c : n.factors) visit_forms(c, fn, in_den);
        } else if constexpr (std::is_same_v<N, Quot>) {
          visit_forms(n.num, fn, in_den);
          visit_forms(n.den, fn, true);
        } else if constexpr (std::is_same_v<N, Neg>) {
          visit_forms(n.child, fn, in_den);
        }
      },
      e.node().v);
}

/// Distinct forms occurring inside denominators.
inline std::vector<LinearForm> denominator_forms(const MeroExpr& e) {
  std::vector<LinearForm> out;
  visit_forms(e, [&](const LinearForm& f, bool in_den) {
    if (!in_den) return;
    for (const auto& g : out)
      if (g == f) return;
    out.push_back(f);
  });
  return out;
}

/// True if no linear form in e has a nonzero lambda part.
inline bool is_z_only(const MeroExpr& e) {
  bool ok = true;
  visit_forms(e, [&](const LinearForm& f, bool) { ok = ok && f.lam.isZero(); });
  return ok;
}

/// ^{w v^d} e, i.e. (z, lambda) -> e(w^{-1} z, v^{-1} lambda): every form
/// a.z + b.lambda + c hbar becomes (w a).z + (v b).lambda + c hbar.
inline MeroExpr twist(const MeroExpr& e, const WeylElement& w, const WeylElement& v) {
  return map_forms(e, [&](const LinearForm& f) {
    if (f.z.size() != w.mat_on_star.rows() || f.lam.size() != v.mat_on_costar.rows())
      throw std::invalid_argument("twist: rank mismatch");
    return LinearForm{w.mat_on_star * f.z, v.mat_on_costar * f.lam, f.h};
  });
}

/// (w^{-1} z, v^{-1} lambda, hbar).
inline EvalPoint act_inverse(const EvalPoint& p, const WeylElement& w, const WeylElement& v) {
  return {w.mat_on_star.transpose().cast<cplx>() * p.z, v.mat_on_costar.transpose().cast<cplx>() * p.lam,
          p.h};
}

// ---------------------------------------------------------------------------
// Residues and regularity along divisors {form = 0}

/// Point-slice through `base` transverse to {form = 0}: p(t) has form value t.
/// The direction is a/<a,a> in z when the form has a z-part, b/<b,b> in lambda otherwise.
class DivisorSlice {
public:
  DivisorSlice(const LinearForm& form, const EvalPoint& base) : base_(base) {
    const int n = base.rank();
    dz_ = CVec::Zero(n);
    dlam_ = CVec::Zero(n);
    if (!form.z.isZero()) {
      dz_ = form.z.cast<cplx>() / static_cast<double>(form.z.squaredNorm());
    } else if (!form.lam.isZero()) {
      dlam_ = form.lam.cast<cplx>() / static_cast<double>(form.lam.squaredNorm());
    } else {
      throw std::invalid_argument("a constant linear form does not define a divisor");
    }
    const cplx offset = evaluate(form, base);
    base_.z -= offset * dz_;
    base_.lam -= offset * dlam_;
  }

  EvalPoint at(cplx t) const {
    EvalPoint p = base_;
    p.z += t * dz_;
    p.lam += t * dlam_;
    return p;
  }

  const EvalPoint& foot() const { return base_; }

private:
  EvalPoint base_;
  CVec dz_;
  CVec dlam_;
};

struct ResidueOptions {
  double eps0 = 1e-4;
  /// Relative disagreement between the last two first-level estimates above
  /// which a non-shrinking sequence is declared a pole of order >= 2.
  double convergence_tol = 1e-3;
};

/// lim_{t->0} theta(t) e(p(t)) along the slice through base.
///
/// With f(t) = theta(t) e(p(t)) = R + c1 t + c2 t^2 + ..., the first-level
/// estimates R(eps) = 2 f(eps/2) - f(eps) remove c1; a second Richardson level
/// (4 R(eps/2) - R(eps))/3 removes c2 and a third, (8 S(eps/2) - S(eps))/7,
/// removes c3.
struct ResidueEstimate {
  cplx value;
  double magnitude;  // largest |theta(t) e(p(t))| among the samples
};

inline ResidueEstimate residue_estimate(const MeroExpr& e, const LinearForm& form, const EvalPoint& base,
                                        const ThetaParams& params, const ResidueOptions& opt = {}) {
  const DivisorSlice slice(form, base);
  const EvalOptions no_guard{0.0};
  auto f = [&](double t) { return theta(cplx{t}, params) * eval(e, slice.at(t), params, no_guard); };
  const double h = opt.eps0;
  const cplx f1 = f(h), f2 = f(h / 2), f4 = f(h / 4), f8 = f(h / 8);
  const cplx r1 = 2.0 * f2 - f1;
  const cplx r2 = 2.0 * f4 - f2;
  const cplx r3 = 2.0 * f8 - f4;
  // A pole of order >= 2 makes the R estimates diverge like 1/eps; otherwise
  // their differences shrink by about 4 per halving.
  const double scale = std::max({1.0, std::abs(r2), std::abs(r3)});
  const double d1 = std::abs(r1 - r2), d2 = std::abs(r2 - r3);
  if (!std::isfinite(d1) || !std::isfinite(d2) || (d2 > opt.convergence_tol * scale && d2 > 0.5 * d1))
    throw HigherOrderPoleError("residue extrapolation does not converge along " + form.str() +
                               " (pole of order >= 2?)");
  const cplx s1 = (4.0 * r2 - r1) / 3.0, s2 = (4.0 * r3 - r2) / 3.0;
  return {(8.0 * s2 - s1) / 7.0, std::max({std::abs(f1), std::abs(f2), std::abs(f4), std::abs(f8)})};
}

inline cplx residue_along(const MeroExpr& e, const LinearForm& form, const EvalPoint& base,
                          const ThetaParams& params, const ResidueOptions& opt = {}) {
  return residue_estimate(e, form, base, params, opt).value;
}

struct RegularityOptions {
  double eps0 = 1e-4;
  int levels = 6;  // samples at eps0 * 2^{-k}, k = 0..levels
  double min_slope = -0.1;
};

struct RegularityDiagnostic {
  bool regular = true;
  double slope = 0.0;  // log-log slope of |e| against the distance to the divisor
};

/// Fits log|e(p(t))| against log t for t = eps0 2^{-k}. A simple pole gives
/// slope -1, a nonzero regular value 0, a simple zero +1.
inline RegularityDiagnostic is_regular_along(const MeroExpr& e, const LinearForm& form, const EvalPoint& base,
                                             const ThetaParams& params, const RegularityOptions& opt = {}) {
  const DivisorSlice slice(form, base);
  const EvalOptions no_guard{0.0};
  std::vector<double> xs, ys;
  for (int k = 0; k <= opt.levels; ++k) {
    const double t = opt.eps0 * std::ldexp(1.0, -k);
    const double mag = std::abs(eval(e, slice.at(t), params, no_guard));
    if (mag == 0.0) return {true, 1.0};
    xs.push_back(std::log(t));
    ys.push_back(std::log(mag));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (!std::isfinite(slope)) return {false, slope};
  return {slope >= opt.min_slope, slope};
}

// ---------------------------------------------------------------------------
// Generic points

/// Deterministic random stream for one (seed, task) pair.
class SampleStream {
public:
  SampleStream(std::uint64_t seed, std::uint64_t task) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
    rng_.seed(seq);
  }

  /// Uniform in [lo, hi), built from the top 53 bits so that the stream is
  /// reproducible across standard library implementations.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

private:
  std::mt19937_64 rng_;
};

class RejectionBudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SamplingOptions {
  double guard = 1e-3;
  int max_attempts = 10000;
};

inline bool is_generic(const EvalPoint& p, const std::vector<LinearForm>& guards, const ThetaParams& params,
                       double guard) {
  for (const auto& g : guards) {
    if (g.is_constant()) continue;
    if (std::abs(theta(evaluate(g, p), params)) <= guard) return false;
  }
  return true;
}

/// z_i and lambda_i uniform in the fundamental box {a + b tau : a, b in [0.05, 0.95]},
/// resampled until every guard form is away from its theta zeros.
inline EvalPoint sample_generic_point(int rank, const std::vector<LinearForm>& guards, cplx hbar,
                                      SampleStream& stream, const ThetaParams& params,
                                      const SamplingOptions& opt = {}) {
  auto box = [&]() { return stream.uniform(0.05, 0.95) + stream.uniform(0.05, 0.95) * params.tau(); };
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    EvalPoint p{CVec(rank), CVec(rank), hbar};
    for (int i = 0; i < rank; ++i) p.z(i) = box();
    for (int i = 0; i < rank; ++i) p.lam(i) = box();
    if (is_generic(p, guards, params, opt.guard)) return p;
  }
  throw RejectionBudgetError("no generic point found within the rejection budget");
}

/// True if g = k f for some rational k, i.e. g vanishes identically on {f = 0}.
inline bool proportional(const LinearForm& g, const LinearForm& f) {
  // Compare all 2x2 minors of the stacked coefficient vectors.
  std::vector<long> a, b;
  for (Eigen::Index i = 0; i < g.z.size(); ++i) a.push_back(g.z(i)), b.push_back(f.z(i));
  for (Eigen::Index i = 0; i < g.lam.size(); ++i) a.push_back(g.lam(i)), b.push_back(f.lam(i));
  a.push_back(g.h);
  b.push_back(f.h);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

/// A point of the divisor {form = 0}, generic for every guard that does not
/// vanish identically there. Box points are projected along the residue slice.
inline EvalPoint sample_on_divisor(const LinearForm& form, int rank, const std::vector<LinearForm>& guards,
                                   cplx hbar, SampleStream& stream, const ThetaParams& params,
                                   const SamplingOptions& opt = {}) {
  std::vector<LinearForm> off;
  for (const auto& g : guards)
    if (!proportional(g, form)) off.push_back(g);
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const EvalPoint p = sample_generic_point(rank, {}, hbar, stream, params, opt);
    const EvalPoint foot = DivisorSlice(form, p).foot();
    try {
      if (is_generic(foot, off, params, opt.guard)) return foot;
    } catch (const ThetaRangeError&) {
    }
  }
  throw RejectionBudgetError("no generic point found on the divisor " + form.str());
}

}  // namespace ellhecke

#endif  // ELLHECKE_MEROM_EXPR_HPP
