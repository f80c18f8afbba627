// Sampled verification of identities between Hecke elements and meromorphic
// sections. Every check evaluates both sides at generic points drawn for each
// (seed, hbar) pair and keeps the worst residual together with its location.

#ifndef ELLHECKE_VERIFY_HPP
#define ELLHECKE_VERIFY_HPP

#include "ellhecke/hecke.hpp"
#include "ellhecke/merom_expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ellhecke {

struct SampleConfig {
  ThetaParams params;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<cplx> hbars{cplx{0.3141, 0.2718}, cplx{0.1732, 0.4142}};
  int samples = 20;
  double guard = 1e-3;
};

/// |a - b| / max(1, |a|, |b|).
inline double residual(cplx a, cplx b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::string point_string(const EvalPoint& p) {
  std::ostringstream os;
  os.precision(17);
  auto vec = [&](const CVec& v) {
    os << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i).real() << "+" << v(i).imag() << "i";
    os << "]";
  };
  os << "z=";
  vec(p.z);
  os << " lam=";
  vec(p.lam);
  os << " h=" << p.h.real() << "+" << p.h.imag() << "i";
  return os.str();
}

/// Worst residual of one identity over all samples.
struct CheckResult {
  double max_residual = 0.0;
  double threshold = 0.0;
  std::string witness;  // location of the worst residual
  std::size_t evaluations = 0;

  bool pass() const { return std::isfinite(max_residual) && max_residual < threshold; }

  void record(double r, const std::string& where) {
    ++evaluations;
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    if (witness.empty() || r > max_residual) {
      max_residual = r;
      witness = where;
    }
  }

  void merge(const CheckResult& o) {
    evaluations += o.evaluations;
    if (!o.witness.empty() && (witness.empty() || o.max_residual > max_residual)) {
      max_residual = o.max_residual;
      witness = o.witness;
    }
    threshold = std::max(threshold, o.threshold);
  }
};

/// z_beta and lambda_{beta^vee} for every positive root, plus their hbar shifts.
inline std::vector<LinearForm> root_guards(const WeylGroup& g) {
  std::vector<LinearForm> out;
  const int n = g.rank();
  for (const auto& r : g.positive_roots()) {
    const auto z = LinearForm::z_form(r.root);
    const auto l = LinearForm::lam_form(r.coroot);
    const auto h = LinearForm::hbar(n);
    out.insert(out.end(), {z, l, h - z, h - l, h + z, h + l});
  }
  return out;
}

inline void add_guards(std::vector<LinearForm>& guards, const MeroExpr& e) {
  for (const auto& f : denominator_forms(e))
    if (std::find(guards.begin(), guards.end(), f) == guards.end()) guards.push_back(f);
}

inline void add_guards(std::vector<LinearForm>& guards, const HeckeElement& h) {
  for (const auto& [k, c] : h.terms()) add_guards(guards, c);
}

/// Calls fn(point, label) at every sample of every (seed, hbar) pair. The
/// stream for each pair is keyed by (seed, task) so runs are reproducible.
inline void for_each_sample(const SampleConfig& cfg, int rank, const std::vector<LinearForm>& guards,
                            std::uint64_t task, const std::function<void(const EvalPoint&)>& fn) {
  for (std::size_t hi = 0; hi < cfg.hbars.size(); ++hi) {
    for (auto seed : cfg.seeds) {
      SampleStream stream(seed, task * 16 + hi);
      for (int s = 0; s < cfg.samples; ++s)
        fn(sample_generic_point(rank, guards, cfg.hbars[hi], stream, cfg.params, {cfg.guard}));
    }
  }
}

/// Residue and slope probes step 1e-4 off the divisor, so points on it keep a
/// wider distance from the remaining poles than ordinary samples.
inline double divisor_guard(const SampleConfig& cfg) { return std::max(cfg.guard, 5e-2); }

/// Like for_each_sample, but every point lies on the divisor {form = 0}.
inline void for_each_divisor_sample(const SampleConfig& cfg, int rank, const LinearForm& form,
                                    const std::vector<LinearForm>& guards, std::uint64_t task,
                                    const std::function<void(const EvalPoint&)>& fn) {
  for (std::size_t hi = 0; hi < cfg.hbars.size(); ++hi) {
    for (auto seed : cfg.seeds) {
      SampleStream stream(seed, task * 16 + hi);
      for (int s = 0; s < cfg.samples; ++s)
        fn(sample_on_divisor(form, rank, guards, cfg.hbars[hi], stream, cfg.params, {divisor_guard(cfg)}));
    }
  }
}

inline std::uint64_t task_id(const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Coefficientwise comparison over the union of keys (absent keys are zero).
inline CheckResult compare_elements(const HeckeElement& a, const HeckeElement& b, const SampleConfig& cfg,
                                    double threshold, const std::string& task) {
  std::vector<LinearForm> guards = root_guards(a.group());
  add_guards(guards, a);
  add_guards(guards, b);
  std::vector<HeckeKey> keys = a.keys();
  for (const auto& k : b.keys())
    if (!a.contains(k.first, k.second)) keys.push_back(k);
  CheckResult res;
  res.threshold = threshold;
  for_each_sample(cfg, a.group().rank(), guards, task_id(task), [&](const EvalPoint& p) {
    for (const auto& k : keys) {
      const cplx va = eval(a.coefficient(k.first, k.second), p, cfg.params, {0.0});
      const cplx vb = eval(b.coefficient(k.first, k.second), p, cfg.params, {0.0});
      res.record(residual(va, vb), a.key_string(k) + " at " + point_string(p));
    }
  });
  return res;
}

/// Pointwise comparison of two expressions.
inline CheckResult compare_exprs(const MeroExpr& a, const MeroExpr& b, const WeylGroup& g, const SampleConfig& cfg,
                                 double threshold, const std::string& task) {
  std::vector<LinearForm> guards = root_guards(g);
  add_guards(guards, a);
  add_guards(guards, b);
  CheckResult res;
  res.threshold = threshold;
  for_each_sample(cfg, g.rank(), guards, task_id(task), [&](const EvalPoint& p) {
    res.record(residual(eval(a, p, cfg.params, {0.0}), eval(b, p, cfg.params, {0.0})), point_string(p));
  });
  return res;
}

// ---------------------------------------------------------------------------
// GKV residue conditions

struct ConditionResult {
  bool pass = true;
  double worst_residual = 0.0;  // ii, ii'
  double min_slope = 0.0;       // i, iii
  double max_slope = 0.0;       // i, iii
  std::size_t checks = 0;
  std::string witness;
};

struct ResidueReport {
  std::map<std::string, ConditionResult> conditions{{"i", {}}, {"ii", {}}, {"ii'", {}}, {"iii", {}}};

  bool pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.second.pass; });
  }
  const ConditionResult& operator[](const std::string& tag) const { return conditions.at(tag); }
};

struct ResidueCheckOptions {
  double residue_tol = 1e-6;
  double pole_order_min_slope = -1.1;  // condition i
  double regular_min_slope = -0.1;     // condition iii
  ResidueOptions residue{};
  RegularityOptions regularity{};
};

/// Checks, for every positive root beta and every key (w, v):
///   i)   slope of a_{w,v} >= -1.1 along D_beta and D_{beta^vee}
///   ii)  Res_beta(a_{w,v} + a_{s_beta w, v}) = 0
///   ii') Res_{beta^vee}(a_{w,v} + a_{w, s_beta v}) = 0
///   iii) for beta in Phi(w): a_{w,v} th(z_beta)/th(h - z_beta) regular along z_beta = h
/// Residues are normalized by max(1, |Res a| + |Res b|, max |theta(t) a|, max |theta(t) b|)
/// over the extrapolation samples.
/// Only D_beta, D_{beta^vee} and D_{h,beta} are probed; poles along other
/// divisors (e.g. D_{h,beta^vee}) are outside what this report certifies.
inline ResidueReport verify_residue_conditions(const HeckeElement& h, const SampleConfig& cfg,
                                               const ResidueCheckOptions& opt = {},
                                               const std::string& task = "residue") {
  const WeylGroup& g = h.group();
  const int n = g.rank();
  std::vector<LinearForm> guards = root_guards(g);
  add_guards(guards, h);

  ResidueReport rep;
  auto& ci = rep.conditions["i"];
  auto& cii = rep.conditions["ii"];
  auto& ciip = rep.conditions["ii'"];
  auto& ciii = rep.conditions["iii"];
  ci.min_slope = ciii.min_slope = 1e300;
  ci.max_slope = ciii.max_slope = -1e300;

  auto slope_record = [](ConditionResult& c, double slope, double min_ok, const std::string& where) {
    ++c.checks;
    if (slope < c.min_slope || !std::isfinite(slope)) {
      c.min_slope = slope;
      if (!(slope >= min_ok)) c.witness = where;
    }
    c.max_slope = std::max(c.max_slope, slope);
    if (!(slope >= min_ok)) c.pass = false;
  };
  auto res_record = [&](ConditionResult& c, const MeroExpr& a, const MeroExpr& b, const LinearForm& form,
                        const EvalPoint& p, const std::string& where) {
    ++c.checks;
    double r;
    try {
      const cplx total = residue_along(a + b, form, p, cfg.params, opt.residue);
      const auto ra = residue_estimate(a, form, p, cfg.params, opt.residue);
      const auto rb = residue_estimate(b, form, p, cfg.params, opt.residue);
      // A regular coefficient of huge modulus has an extrapolation error that
      // scales with its sampled values, so those enter the normalization too.
      const double scale = std::max({std::abs(ra.value) + std::abs(rb.value), ra.magnitude, rb.magnitude});
      r = std::abs(total) / std::max(1.0, scale);
    } catch (const HigherOrderPoleError&) {
      r = std::numeric_limits<double>::infinity();
    }
    if (c.witness.empty() || r > c.worst_residual) {
      c.worst_residual = r;
      c.witness = where;
    }
    if (!(r < opt.residue_tol)) c.pass = false;
  };

  const auto& roots = g.positive_roots();
  const std::string tag = task + "/root#";
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const LinearForm zb = LinearForm::z_form(roots[r].root);
    const LinearForm lb = LinearForm::lam_form(roots[r].coroot);
    const LinearForm hz = LinearForm::hbar(n) - zb;
    const std::size_t sb = g.reflection(r);
    const std::string rs = " root#" + std::to_string(r);

    for_each_divisor_sample(cfg, n, zb, guards, task_id(tag + std::to_string(r) + "/z"), [&](const EvalPoint& p) {
      const std::string at = " at " + point_string(p);
      for (const auto& [key, a] : h.terms()) {
        const std::string where = h.key_string(key) + rs;
        slope_record(ci, is_regular_along(a, zb, p, cfg.params, opt.regularity).slope, opt.pole_order_min_slope,
                     where + " D_beta" + at);
        // Each unordered pair once: the partner is visited with the same pair.
        const HeckeKey partner{g.multiply(sb, key.first), key.second};
        if (key <= partner || !h.contains(partner.first, partner.second))
          res_record(cii, a, h.coefficient(partner.first, partner.second), zb, p, where + " ii" + at);
      }
    });
    for_each_divisor_sample(cfg, n, lb, guards, task_id(tag + std::to_string(r) + "/l"), [&](const EvalPoint& p) {
      const std::string at = " at " + point_string(p);
      for (const auto& [key, a] : h.terms()) {
        const std::string where = h.key_string(key) + rs;
        slope_record(ci, is_regular_along(a, lb, p, cfg.params, opt.regularity).slope, opt.pole_order_min_slope,
                     where + " D_beta^vee" + at);
        const HeckeKey partner{key.first, g.multiply(key.second, sb)};
        if (key <= partner || !h.contains(partner.first, partner.second))
          res_record(ciip, a, h.coefficient(partner.first, partner.second), lb, p, where + " ii'" + at);
      }
    });
    for_each_divisor_sample(cfg, n, -hz, guards, task_id(tag + std::to_string(r) + "/h"), [&](const EvalPoint& p) {
      for (const auto& [key, a] : h.terms()) {
        const auto inv = g.inversion_set(key.first);
        if (std::find(inv.begin(), inv.end(), r) == inv.end()) continue;
        const MeroExpr probe = a * theta_of(zb) / theta_of(hz);
        slope_record(ciii, is_regular_along(probe, -hz, p, cfg.params, opt.regularity).slope,
                     opt.regular_min_slope, h.key_string(key) + rs + " D_h,beta at " + point_string(p));
      }
    });
  }
  for (auto* c : {&ci, &ciii}) {
    if (c->checks == 0) c->min_slope = c->max_slope = 0.0;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Weyl group relations

inline std::vector<int> alternating_word(int i, int j, int length) {
  std::vector<int> w;
  for (int k = 0; k < length; ++k) w.push_back(k % 2 == 0 ? i : j);
  return w;
}

/// T_i T_j T_i ... = T_j T_i T_j ... (m_ij factors each).
inline CheckResult verify_braid(const DynamicalHecke& alg, int i, int j, const SampleConfig& cfg,
                                double threshold = 1e-7) {
  const int m = braid_order(alg.group().datum(), i, j);
  const auto lhs = alg.t_w(alternating_word(i, j, m));
  const auto rhs = alg.t_w(alternating_word(j, i, m));
  return compare_elements(lhs, rhs, cfg, threshold,
                          "braid:" + alg.group().datum().label() + ":" + std::to_string(i) + std::to_string(j));
}

/// T_i^2 = 1.
inline CheckResult verify_quadratic(const DynamicalHecke& alg, int i, const SampleConfig& cfg,
                                    double threshold = 1e-7) {
  const auto t = alg.dl_dynamical(i);
  return compare_elements(t * t, alg.identity(), cfg, threshold,
                          "quadratic:" + alg.group().datum().label() + ":" + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Psi: module compatibility of the multiplication map

/// sum_{w,v} a_{w,v} ^{w v^d} g ^{w} f, the action of Psi(H) on g (x) f followed
/// by multiplication. Requires f to be z-only unless allow_lambda is set.
inline MeroExpr psi_action(const HeckeElement& h, const MeroExpr& g, const MeroExpr& f, bool allow_lambda = false) {
  if (!allow_lambda && !is_z_only(f)) throw std::invalid_argument("psi: f must depend on z only");
  const WeylGroup& grp = h.group();
  const WeylElement& e = grp.element(WeylGroup::identity());
  std::vector<MeroExpr> terms;
  for (const auto& [k, c] : h.terms()) {
    const auto& w = grp.element(k.first);
    terms.push_back(c * twist(g, w, grp.element(k.second)) * twist(f, w, e));
  }
  return terms.empty() ? MeroExpr(0.0) : sum(std::move(terms));
}

inline CheckResult verify_psi_compat(const DynamicalHecke& alg, int i, const MeroExpr& g, const MeroExpr& f,
                                     const SampleConfig& cfg, double threshold = 1e-7,
                                     bool allow_lambda = false) {
  const auto t = alg.dl_dynamical(i);
  return compare_exprs(psi_action(t, g, f, allow_lambda), act_on_section(t, f * g), alg.group(), cfg, threshold,
                       "psi:" + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Inverse identities between T_alpha and T^L_alpha

struct AdjunctionResult {
  CheckResult p_identity;  // p + q ^{s s^d} p^L = 0
  CheckResult q_identity;  // q ^{s s^d} q^L = 1
  bool pass() const { return p_identity.pass() && q_identity.pass(); }
};

inline AdjunctionResult verify_adjunction_identity(const DynamicalHecke& alg, int i, const SampleConfig& cfg,
                                                   double threshold = 1e-7, bool flip_p_sign = false) {
  const auto& g = alg.group();
  const std::size_t s = g.simple_reflection(i);
  const std::size_t e = WeylGroup::identity();
  const auto t = alg.dl_dynamical(i);
  const auto tl = alg.dl_dual_langlands(i, flip_p_sign);
  const MeroExpr p = t.coefficient(e, s), q = t.coefficient(s, s);
  const MeroExpr pl = tl.coefficient(s, e), ql = tl.coefficient(s, s);
  const auto& ws = g.element(s);
  AdjunctionResult out;
  const std::string tag = "inverse:" + std::to_string(i) + (flip_p_sign ? ":flipped" : "");
  out.p_identity = compare_exprs(p, -(q * twist(pl, ws, ws)), g, cfg, threshold, tag + ":p");
  out.q_identity = compare_exprs(q * twist(ql, ws, ws), MeroExpr(1.0), g, cfg, threshold, tag + ":q");
  return out;
}

}  // namespace ellhecke

#endif  // ELLHECKE_VERIFY_HPP
