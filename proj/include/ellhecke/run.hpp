// Batch verification: run configuration, the identity catalog, the suites,
// and the JSON report.

#ifndef ELLHECKE_RUN_HPP
#define ELLHECKE_RUN_HPP

#include "ellhecke/hecke.hpp"
#include "ellhecke/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellhecke {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s{"theta", "weyl", "residue", "gamma", "psi", "inverse"};
  return s;
}

/// Raised for invalid run configuration; `field` is the offending key.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& msg)
      : std::invalid_argument(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

struct RunConfig {
  std::string cartan_label = "A2";
  Isogeny isogeny = Isogeny::adjoint;
  cplx tau{0.0, 0.75};
  std::vector<cplx> h{cplx{0.3141, 0.2718}, cplx{0.1732, 0.4142}};
  int truncation = 64;
  double tol = 1e-7;  // threshold for sampled operator identities
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int samples_per_identity = 20;
  std::vector<std::string> suites{"theta", "weyl", "residue", "gamma", "psi", "inverse"};
  bool negative_control = false;

  void validate() const {
    if (!(tau.imag() > 0.0) || !std::isfinite(tau.real())) throw ConfigError("tau", "Im(tau) must be positive");
    try {
      build_root_datum(cartan_label, isogeny);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("type", e.what());
    }
    if (h.empty()) throw ConfigError("h", "at least one value of hbar is required");
    for (const auto& v : h)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ConfigError("h", "hbar is not finite");
    if (truncation < 1) throw ConfigError("truncation", "must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
    if (samples_per_identity < 1) throw ConfigError("samples", "must be >= 1");
    if (suites.empty()) throw ConfigError("suites", "must be nonempty");
    for (const auto& s : suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw ConfigError("suites", "unknown suite '" + s + "'");
  }

  SampleConfig sample_config() const {
    SampleConfig c;
    c.params = ThetaParams(tau, truncation);
    c.seeds = seeds;
    c.hbars = h;
    c.samples = samples_per_identity;
    return c;
  }
};

struct IdentityRecord {
  std::string name;
  std::string anchor;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string witness;
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteReport {
  RunConfig config;
  std::vector<IdentityRecord> records;  // sorted by name
  double wall_clock_seconds = 0.0;

  bool pass() const {
    return !records.empty() &&
           std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
  }
};

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string name;
  std::string suite;
  std::string anchor;
};

namespace detail {

inline const char* anchor_theta = "theta normalization and analytic identities";
inline const char* anchor_weyl = "Weyl group relations of the dynamical DL operators";
inline const char* anchor_words = "T_w is independent of the reduced word";
inline const char* anchor_assoc = "associativity of the twisted product";
inline const char* anchor_residue = "GKV residue conditions for T_alpha";
inline const char* anchor_negative = "GKV residue conditions reject a lone simple pole";
inline const char* anchor_closure = "residue conditions are closed under multiplication";
inline const char* anchor_poles = "poles of the coefficients cancel in the polynomial action";
inline const char* anchor_gamma_struct = "Gamma sends delta_alpha^d to T_alpha";
inline const char* anchor_gamma_res = "Gamma of a dual GKV generator satisfies the GKV residue conditions";
inline const char* anchor_gamma_mult = "Gamma is an algebra homomorphism";
inline const char* anchor_dual_gen = "residue conditions of the dual GKV generator";
inline const char* anchor_psi = "multiplication map is a module homomorphism via Psi";
inline const char* anchor_inverse = "inverse identities between T_alpha and T^L_alpha";

inline bool has_adjacent_pair(const RootDatum& rd) {
  for (int i = 0; i < rd.rank(); ++i)
    for (int j = i + 1; j < rd.rank(); ++j)
      if (rd.cartan()(i, j) != 0) return true;
  return false;
}

}  // namespace detail

/// Every identity the suites can produce for one Cartan type, sorted by name.
inline std::vector<CatalogEntry> identities_for(const std::string& type) {
  using namespace detail;
  const RootDatum rd = build_root_datum(type);
  const std::string t = rd.label();
  std::vector<CatalogEntry> c{
      {"theta:derivative-at-zero", "theta", anchor_theta},
      {"theta:oddness", "theta", anchor_theta},
      {"theta:period", "theta", anchor_theta},
      {"theta:quasi-period", "theta", anchor_theta},
      {"theta:simple-zero", "theta", anchor_theta},
      {"theta:truncation", "theta", anchor_theta},
      {"quadratic:" + t, "weyl", anchor_weyl},
      {"reduced-words:" + t, "weyl", anchor_words},
      {"associativity:" + t, "weyl", anchor_assoc},
      {"residue:" + t, "residue", anchor_residue},
      {"residue-negative-input:" + t, "residue", anchor_negative},
      {"pole-cancellation:" + t, "residue", anchor_poles},
      {"gamma-structural:" + t, "gamma", anchor_gamma_struct},
      {"gamma-residues", "gamma", anchor_gamma_res},
      {"gamma-multiplicative:" + t, "gamma", anchor_gamma_mult},
      {"dual-generator-residues:" + t, "gamma", anchor_dual_gen},
      {"psi-compat:" + t, "psi", anchor_psi},
      {"psi-negative-control:" + t, "psi", anchor_psi},
      {"inverse:" + t, "inverse", anchor_inverse},
      {"inverse-negative-control:" + t, "inverse", anchor_inverse},
      {"dual-quadratic:" + t, "inverse", anchor_inverse},
  };
  if (rd.rank() >= 2) c.push_back({"braid:" + t, "weyl", anchor_weyl});
  if (has_adjacent_pair(rd)) c.push_back({"closure:" + t, "residue", anchor_closure});
  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return c;
}

/// All identities over all supported types, deduplicated, in name order.
inline std::vector<CatalogEntry> list_identities() {
  std::vector<CatalogEntry> all;
  std::set<std::string> seen;
  for (const auto& t : supported_types())
    for (auto& e : identities_for(t))
      if (seen.insert(e.name).second) all.push_back(std::move(e));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return all;
}

// ---------------------------------------------------------------------------
// Suites

namespace detail {

inline IdentityRecord from_check(const CheckResult& c) {
  IdentityRecord r;
  r.max_residual = c.max_residual;
  r.threshold = c.threshold;
  r.pass = c.pass();
  r.witness = c.witness;
  r.details["evaluations"] = c.evaluations;
  return r;
}

inline IdentityRecord from_residue_report(const ResidueReport& rep, double tol) {
  IdentityRecord r;
  r.max_residual = std::max(rep["ii"].worst_residual, rep["ii'"].worst_residual);
  r.threshold = tol;
  r.pass = rep.pass();
  for (const auto& [tag, c] : rep.conditions) {
    nlohmann::json j;
    j["pass"] = c.pass;
    j["checks"] = c.checks;
    if (tag == "ii" || tag == "ii'") {
      j["worst_residual"] = c.worst_residual;
    } else {
      j["min_slope"] = c.min_slope;
      j["max_slope"] = c.max_slope;
    }
    r.details[tag] = j;
    if (!c.pass && r.witness.empty()) r.witness = "condition " + tag + ": " + c.witness;
  }
  return r;
}

/// f = th(L1) th(L2) + c th(L3) with small random integer forms: entire in (z, lambda).
inline MeroExpr random_regular_section(int rank, SampleStream& s) {
  auto coeff = [&](int lo, int hi) {
    return lo + static_cast<int>(std::floor(s.uniform(0.0, 1.0) * (hi - lo + 1)));
  };
  auto form = [&]() {
    LinearForm f = LinearForm::zero(rank);
    while (f.is_constant()) {
      for (int i = 0; i < rank; ++i) {
        f.z(i) = coeff(-2, 2);
        f.lam(i) = coeff(-1, 1);
      }
      f.h = coeff(-1, 1);
    }
    return f;
  };
  const cplx c{s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)};
  return theta_of(form()) * theta_of(form()) + MeroExpr(c) * theta_of(form());
}

inline std::vector<IdentityRecord> theta_suite(const RunConfig& cfg) {
  const ThetaParams p(cfg.tau, cfg.truncation);
  const double tol = 1e-8;
  std::vector<IdentityRecord> out;
  auto rec = [&](const std::string& name, double worst, const std::string& witness, double threshold) {
    IdentityRecord r;
    r.name = name;
    r.max_residual = worst;
    r.threshold = threshold;
    r.pass = std::isfinite(worst) && worst < threshold;
    r.witness = witness;
    out.push_back(std::move(r));
  };
  rec("theta:derivative-at-zero", std::abs(theta_derivative_at_zero(p) - 1.0), "x = 0", tol);

  // Sample x = a + b tau with a, b in [-0.95, 0.95].
  std::vector<cplx> xs;
  for (auto seed : cfg.seeds) {
    SampleStream s(seed, task_id("theta"));
    for (int k = 0; k < 100; ++k) xs.push_back(s.uniform(-0.95, 0.95) + s.uniform(-0.95, 0.95) * cfg.tau);
  }
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  auto worst_over = [&](const std::function<double(cplx)>& err) {
    std::pair<double, cplx> w{0.0, 0.0};
    for (cplx x : xs) {
      const double e = err(x);
      if (!(e <= w.first)) w = {e, x};
    }
    return w;
  };
  auto xstr = [](cplx x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "x = %.17g%+.17gi", x.real(), x.imag());
    return std::string(buf);
  };
  auto [odd, xo] = worst_over([&](cplx x) { return rel(theta(-x, p), -theta(x, p)); });
  rec("theta:oddness", odd, xstr(xo), tol);
  auto [per, xp] = worst_over([&](cplx x) { return rel(theta(x + 1.0, p), -theta(x, p)); });
  rec("theta:period", per, xstr(xp), tol);
  auto [qp, xq] = worst_over([&](cplx x) {
    const cplx factor = -std::exp(-pi * I * cfg.tau - 2.0 * pi * I * x);
    return rel(theta(x + cfg.tau, p), factor * theta(x, p));
  });
  rec("theta:quasi-period", qp, xstr(xq), tol);
  const ThetaParams doubled = p.with_truncation(2 * p.truncation());
  auto [tr, xt] = worst_over([&](cplx x) { return std::abs(theta(x, doubled) - theta(x, p)); });
  rec("theta:truncation", tr, xstr(xt), p.tol_abs());
  // theta(x)/x -> 1 along a shrinking sequence.
  double zero_worst = 0.0;
  for (int k = 0; k < 8; ++k) {
    const cplx x = cplx{1e-5, 1e-5} * std::ldexp(1.0, -k);
    zero_worst = std::max(zero_worst, std::abs(theta(x, p) / x - 1.0));
  }
  rec("theta:simple-zero", zero_worst, "x = (1+i) 1e-5 2^-k", tol);
  return out;
}

inline std::vector<IdentityRecord> weyl_suite(const RunConfig& cfg, const DynamicalHecke& alg) {
  const auto sc = cfg.sample_config();
  const std::string t = alg.group().datum().label();
  std::vector<IdentityRecord> out;

  CheckResult quad;
  for (int i = 0; i < alg.rank(); ++i) quad.merge(verify_quadratic(alg, i, sc, cfg.tol));
  quad.threshold = cfg.tol;
  out.push_back(from_check(quad));
  out.back().name = "quadratic:" + t;

  if (alg.rank() >= 2) {
    CheckResult braid;
    nlohmann::json pairs = nlohmann::json::array();
    for (int i = 0; i < alg.rank(); ++i)
      for (int j = i + 1; j < alg.rank(); ++j) {
        auto r = verify_braid(alg, i, j, sc, cfg.tol);
        pairs.push_back({{"i", i + 1}, {"j", j + 1}, {"m", braid_order(alg.group().datum(), i, j)}});
        braid.merge(r);
      }
    braid.threshold = cfg.tol;
    out.push_back(from_check(braid));
    out.back().name = "braid:" + t;
    out.back().details["pairs"] = pairs;
  }

  const auto& g = alg.group();
  const std::size_t w0 = g.longest();
  const auto w1 = g.reduced_word(w0, false), w2 = g.reduced_word(w0, true);
  auto words = from_check(compare_elements(alg.t_w(w1), alg.t_w(w2), sc, cfg.tol, "words:" + t));
  words.name = "reduced-words:" + t;
  words.details["words"] = {w1, w2};
  words.details["distinct"] = w1 != w2;
  out.push_back(std::move(words));

  const int last = alg.rank() - 1;
  const auto a = alg.dl_dynamical(0);
  const auto b = scale(theta_of(alg.lam_coroot(last) + alg.hbar()) / theta_of(alg.lam_coroot(last)),
                       alg.dl_dynamical(last));
  const auto c = alg.gamma(alg.gkv_dual_generator(0));
  auto assoc = from_check(compare_elements((a * b) * c, a * (b * c), sc, cfg.tol, "assoc:" + t));
  assoc.name = "associativity:" + t;
  out.push_back(std::move(assoc));
  return out;
}

inline std::vector<IdentityRecord> residue_suite(const RunConfig& cfg, const DynamicalHecke& alg) {
  const auto sc = cfg.sample_config();
  const std::string t = alg.group().datum().label();
  const auto& g = alg.group();
  const double rtol = 1e-6;
  std::vector<IdentityRecord> out;

  {
    ResidueReport merged;
    IdentityRecord r;
    r.threshold = rtol;
    r.pass = true;
    nlohmann::json per = nlohmann::json::array();
    for (int i = 0; i < alg.rank(); ++i) {
      auto one = from_residue_report(verify_residue_conditions(alg.dl_dynamical(i), sc, {}, "residue:T" + std::to_string(i)), rtol);
      // Condition iii must hold with a flat slope, not merely a vanishing one.
      const double iii_max = one.details["iii"]["max_slope"].get<double>();
      if (iii_max > 0.1) one.pass = false;
      r.pass = r.pass && one.pass;
      r.max_residual = std::max(r.max_residual, one.max_residual);
      if (r.witness.empty()) r.witness = one.witness;
      per.push_back(one.details);
    }
    r.name = "residue:" + t;
    r.details["per_simple_root"] = per;
    out.push_back(std::move(r));
  }
  {
    // (1/th(z_alpha)) delta_alpha must fail condition ii with residual close to 1.
    HeckeElement bad = HeckeElement::delta(alg.group_ptr(), g.simple_reflection(0), WeylGroup::identity(),
                                           MeroExpr(1.0) / theta_of(alg.z_root(0)));
    const auto rep = verify_residue_conditions(bad, sc, {}, "residue:negative");
    IdentityRecord r;
    r.name = "residue-negative-input:" + t;
    r.max_residual = std::abs(rep["ii"].worst_residual - 1.0);
    r.threshold = 0.1;
    r.pass = !rep.pass() && !rep["ii"].pass && r.max_residual < r.threshold;
    r.details["condition_ii_residual"] = rep["ii"].worst_residual;
    r.details["rejected"] = !rep.pass();
    if (!r.pass) r.witness = rep["ii"].witness;
    out.push_back(std::move(r));
  }
  if (detail::has_adjacent_pair(g.datum())) {
    IdentityRecord r;
    r.name = "closure:" + t;
    r.threshold = rtol;
    r.pass = true;
    for (int i = 0; i < alg.rank(); ++i)
      for (int j = i + 1; j < alg.rank(); ++j) {
        if (g.datum().cartan()(i, j) == 0) continue;
        auto one = from_residue_report(
            verify_residue_conditions(alg.dl_dynamical(i) * alg.dl_dynamical(j), sc, {},
                                      "closure:" + std::to_string(i) + std::to_string(j)),
            rtol);
        r.pass = r.pass && one.pass;
        r.max_residual = std::max(r.max_residual, one.max_residual);
        if (r.witness.empty()) r.witness = one.witness;
        r.details[std::to_string(i + 1) + "," + std::to_string(j + 1)] = one.details;
      }
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.name = "pole-cancellation:" + t;
    r.threshold = -0.1;  // minimum slope
    r.pass = true;
    double min_slope = 1e300;
    SampleStream fs(cfg.seeds.front(), task_id("pole-cancellation:" + t));
    std::vector<LinearForm> guards = root_guards(g);
    for (int k = 0; k < 5; ++k) {
      const MeroExpr f = random_regular_section(alg.rank(), fs);
      for (int i = 0; i < alg.rank(); ++i) {
        const auto tf = act_on_section(alg.dl_dynamical(i), f);
        std::vector<LinearForm> gd = guards;
        add_guards(gd, tf);
        for (std::size_t hi = 0; hi < cfg.h.size(); ++hi) {
          SampleStream ps(cfg.seeds.front(), task_id("pole-base:" + t) + 31 * static_cast<std::uint64_t>(k) + hi);
          const auto base = sample_on_divisor(alg.z_root(i), alg.rank(), gd, cfg.h[hi], ps, sc.params,
                                              {divisor_guard(sc)});
          const auto d = is_regular_along(tf, alg.z_root(i), base, sc.params);
          if (d.slope < min_slope) {
            min_slope = d.slope;
            if (!d.regular) r.witness = "f#" + std::to_string(k) + " alpha_" + std::to_string(i + 1) + " at " + point_string(base);
          }
          r.pass = r.pass && d.regular;
        }
      }
    }
    r.max_residual = min_slope;
    r.details["min_slope"] = min_slope;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<IdentityRecord> gamma_suite(const RunConfig& cfg, const DynamicalHecke& alg) {
  const auto sc = cfg.sample_config();
  const std::string t = alg.group().datum().label();
  const auto& g = alg.group();
  std::vector<IdentityRecord> out;
  {
    IdentityRecord r;
    r.name = "gamma-structural:" + t;
    r.threshold = 1e-9;
    r.pass = true;
    for (int i = 0; i < alg.rank(); ++i) {
      const auto img = alg.gamma(HeckeElement::delta(alg.group_ptr(), WeylGroup::identity(), g.simple_reflection(i)));
      const auto ti = alg.dl_dynamical(i);
      const bool same_keys = img.keys() == ti.keys();
      auto c = compare_elements(img, ti, sc, r.threshold, "gamma-structural:" + std::to_string(i));
      r.max_residual = std::max(r.max_residual, c.max_residual);
      r.pass = r.pass && same_keys && c.pass();
      if (!same_keys) r.witness = "key sets differ for alpha_" + std::to_string(i + 1);
      else if (!c.pass() && r.witness.empty()) r.witness = c.witness;
    }
    const auto id = alg.gamma(alg.identity());
    auto c = compare_elements(id, alg.identity(), sc, r.threshold, "gamma-identity");
    r.pass = r.pass && c.pass() && id.keys() == alg.identity().keys();
    r.max_residual = std::max(r.max_residual, c.max_residual);
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.name = "gamma-residues";
    r.threshold = 1e-6;
    r.pass = true;
    nlohmann::json per = nlohmann::json::array();
    for (int i = 0; i < alg.rank(); ++i) {
      auto one = from_residue_report(
          verify_residue_conditions(alg.gamma(alg.gkv_dual_generator(i)), sc, {}, "gamma-res:" + std::to_string(i)),
          r.threshold);
      r.pass = r.pass && one.pass;
      r.max_residual = std::max(r.max_residual, one.max_residual);
      if (r.witness.empty()) r.witness = one.witness;
      per.push_back(one.details);
    }
    r.details["type"] = t;
    r.details["per_simple_root"] = per;
    out.push_back(std::move(r));
  }
  {
    const int last = alg.rank() - 1;
    HeckeElement s1 = alg.gkv_dual_generator(0);
    HeckeElement s2 = scale(theta_of(alg.lam_coroot(last) - alg.hbar()) / theta_of(alg.lam_coroot(last) + alg.hbar()),
                            alg.gkv_dual_generator(last));
    auto r = from_check(compare_elements(alg.gamma(s1) * alg.gamma(s2), alg.gamma(s1 * s2), sc, cfg.tol,
                                         "gamma-mult:" + t));
    r.name = "gamma-multiplicative:" + t;
    out.push_back(std::move(r));
  }
  {
    // Res_{alpha^vee} of the two coefficients cancel; the delta^d coefficient
    // vanishes to first order along lambda_{alpha^vee} = hbar.
    IdentityRecord r;
    r.name = "dual-generator-residues:" + t;
    r.threshold = 1e-6;
    r.pass = true;
    double min_zero_slope = 1e300;
    std::vector<LinearForm> guards = root_guards(g);
    for (int i = 0; i < alg.rank(); ++i) {
      const auto sigma = alg.gkv_dual_generator(i);
      const MeroExpr a = sigma.coefficient(WeylGroup::identity(), WeylGroup::identity());
      const MeroExpr b = sigma.coefficient(WeylGroup::identity(), g.simple_reflection(i));
      const LinearForm l = alg.lam_coroot(i);
      const auto task = task_id(r.name + std::to_string(i));
      for_each_divisor_sample(sc, alg.rank(), l, guards, task, [&](const EvalPoint& p) {
        const cplx ra = residue_along(a, l, p, sc.params), rb = residue_along(b, l, p, sc.params);
        const double res = std::abs(ra + rb) / std::max({1.0, std::abs(ra), std::abs(rb)});
        if (res > r.max_residual) {
          r.max_residual = res;
          if (!(res < r.threshold)) r.witness = point_string(p);
        }
      });
      for_each_divisor_sample(sc, alg.rank(), l - alg.hbar(), guards, task + 1, [&](const EvalPoint& p) {
        const auto d = is_regular_along(b, l - alg.hbar(), p, sc.params);
        min_zero_slope = std::min(min_zero_slope, d.slope);
      });
    }
    r.details["min_zero_slope"] = min_zero_slope;
    r.pass = r.max_residual < r.threshold && min_zero_slope >= 0.9;
    if (min_zero_slope < 0.9 && r.witness.empty()) r.witness = "zero along lambda = hbar is not of first order";
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<IdentityRecord> psi_suite(const RunConfig& cfg, const DynamicalHecke& alg) {
  const auto sc = cfg.sample_config();
  const std::string t = alg.group().datum().label();
  std::vector<IdentityRecord> out;
  const int n = alg.rank();
  // A generic meromorphic section surrogate in (z, lambda).
  const LinearForm zsum = LinearForm::z_form(IVec::Ones(n));
  const LinearForm lsum = LinearForm::lam_form(IVec::Ones(n));
  const MeroExpr g = theta_of(zsum - lsum + alg.hbar()) * theta_of(alg.z_root(0) + alg.lam_coroot(n - 1)) /
                     theta_of(lsum + alg.hbar());
  {
    IdentityRecord r;
    r.name = "psi-compat:" + t;
    r.threshold = cfg.tol;
    r.pass = true;
    for (int i = 0; i < n; ++i) {
      for (const MeroExpr& f : {MeroExpr(1.0), theta_of(alg.z_root(i)), theta_of(zsum - alg.hbar()) * theta_of(alg.z_root(i))}) {
        const auto c = verify_psi_compat(alg, i, g, f, sc, cfg.tol);
        r.pass = r.pass && c.pass();
        if (c.max_residual > r.max_residual || r.witness.empty()) {
          r.max_residual = std::max(r.max_residual, c.max_residual);
          if (!c.pass()) r.witness = c.witness;
        }
      }
    }
    if (r.pass) r.witness.clear();
    out.push_back(std::move(r));
  }
  {
    // A lambda-dependent f is not invariant under delta^d: equality must break.
    IdentityRecord r;
    r.name = "psi-negative-control:" + t;
    r.threshold = 100.0 * cfg.tol;  // minimum residual
    double worst_min = 1e300;
    for (int i = 0; i < n; ++i) {
      const MeroExpr f = theta_of(alg.lam_coroot(i) + alg.hbar());
      const auto c = verify_psi_compat(alg, i, g, f, sc, cfg.tol, true);
      worst_min = std::min(worst_min, c.max_residual);
    }
    r.max_residual = worst_min;
    r.pass = worst_min > r.threshold;
    if (!r.pass) r.witness = "lambda-dependent f did not break the identity";
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<IdentityRecord> inverse_suite(const RunConfig& cfg, const DynamicalHecke& alg) {
  const auto sc = cfg.sample_config();
  const std::string t = alg.group().datum().label();
  std::vector<IdentityRecord> out;
  {
    CheckResult all;
    for (int i = 0; i < alg.rank(); ++i) {
      const auto r = verify_adjunction_identity(alg, i, sc, cfg.tol);
      all.merge(r.p_identity);
      all.merge(r.q_identity);
    }
    all.threshold = cfg.tol;
    auto r = from_check(all);
    r.name = "inverse:" + t;
    out.push_back(std::move(r));
  }
  {
    IdentityRecord r;
    r.name = "inverse-negative-control:" + t;
    r.threshold = 100.0 * cfg.tol;  // minimum residual
    double worst_min = 1e300;
    for (int i = 0; i < alg.rank(); ++i)
      worst_min = std::min(worst_min, verify_adjunction_identity(alg, i, sc, cfg.tol, true).p_identity.max_residual);
    r.max_residual = worst_min;
    r.pass = worst_min > r.threshold;
    if (!r.pass) r.witness = "sign-flipped p^L still satisfies the identity";
    out.push_back(std::move(r));
  }
  {
    CheckResult all;
    for (int i = 0; i < alg.rank(); ++i) {
      const auto tl = alg.dl_dual_langlands(i);
      all.merge(compare_elements(tl * tl, alg.identity(), sc, cfg.tol, "dual-quadratic:" + std::to_string(i)));
    }
    all.threshold = cfg.tol;
    auto r = from_check(all);
    r.name = "dual-quadratic:" + t;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Runs the selected suites. Each identity is isolated: an exception becomes a
/// failing record. Records are sorted by name and carry their catalog anchor.
inline SuiteReport run(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.config = cfg;
  const DynamicalHecke alg(build_root_datum(cfg.cartan_label, cfg.isogeny), cfg.negative_control);
  const auto catalog = identities_for(cfg.cartan_label);

  using SuiteFn = std::function<std::vector<IdentityRecord>()>;
  const std::map<std::string, SuiteFn> suites{
      {"theta", [&] { return detail::theta_suite(cfg); }},
      {"weyl", [&] { return detail::weyl_suite(cfg, alg); }},
      {"residue", [&] { return detail::residue_suite(cfg, alg); }},
      {"gamma", [&] { return detail::gamma_suite(cfg, alg); }},
      {"psi", [&] { return detail::psi_suite(cfg, alg); }},
      {"inverse", [&] { return detail::inverse_suite(cfg, alg); }},
  };
  std::set<std::string> selected(cfg.suites.begin(), cfg.suites.end());
  for (const auto& name : selected) {
    try {
      for (auto& r : suites.at(name)()) rep.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      IdentityRecord r;
      r.name = name + ":suite-error";
      r.pass = false;
      r.max_residual = std::numeric_limits<double>::infinity();
      r.witness = std::string("exception: ") + e.what();
      rep.records.push_back(std::move(r));
    }
  }
  for (auto& r : rep.records) {
    for (const auto& c : catalog)
      if (c.name == r.name) r.anchor = c.anchor;
    if (!r.pass && r.witness.empty()) r.witness = "failed without a recorded location";
  }
  std::sort(rep.records.begin(), rep.records.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Report serialization

inline constexpr const char* report_schema = "ellhecke.report/1";

inline std::string format_complex(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

namespace detail {
inline const std::string num_tag = "@num:";
/// Finite values become tagged strings rewritten to bare %.16e numbers by
/// dump_report; non-finite values stay JSON strings.
inline nlohmann::json sci17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return num_tag + buf;
}
}  // namespace detail

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["type"] = c.cartan_label;
  j["isogeny"] = to_string(c.isogeny);
  j["tau"] = format_complex(c.tau);
  nlohmann::json hs = nlohmann::json::array();
  for (auto h : c.h) hs.push_back(format_complex(h));
  j["h"] = hs;
  j["truncation"] = c.truncation;
  j["tol"] = detail::sci17(c.tol);
  j["seeds"] = c.seeds;
  j["samples"] = c.samples_per_identity;
  j["suites"] = c.suites;
  j["negative_control"] = c.negative_control;
  return j;
}

/// The report body: everything except wall-clock timing.
inline nlohmann::json report_body(const SuiteReport& rep) {
  nlohmann::json j;
  j["schema"] = report_schema;
  j["config"] = config_json(rep.config);
  nlohmann::json recs = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto& r : rep.records) {
    nlohmann::json x;
    x["name"] = r.name;
    x["anchor"] = r.anchor;
    x["max_residual"] = detail::sci17(r.max_residual);
    x["threshold"] = detail::sci17(r.threshold);
    x["pass"] = r.pass;
    if (!r.pass) x["witness"] = r.witness;
    if (!r.details.empty()) x["details"] = r.details;
    recs.push_back(std::move(x));
    failed += r.pass ? 0 : 1;
  }
  j["records"] = recs;
  j["summary"] = {{"records", rep.records.size()}, {"failed", failed}, {"pass", rep.pass()}};
  return j;
}

/// JSON text; residuals and thresholds appear as numbers with 17 significant digits.
inline std::string dump_report(const SuiteReport& rep, bool with_timing = true) {
  nlohmann::json j = report_body(rep);
  if (with_timing) j["timing"] = {{"wall_clock_seconds", rep.wall_clock_seconds}};
  std::string text = j.dump(2);
  static const std::regex tagged("\"" + detail::num_tag + "([^\"]*)\"");
  return std::regex_replace(text, tagged, "$1");
}

}  // namespace ellhecke

#endif  // ELLHECKE_RUN_HPP
