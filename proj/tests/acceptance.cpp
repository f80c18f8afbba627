// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ellhecke/ellhecke.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace ellhecke;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

Outcome theta_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_deriv = 0.0;
  for (cplx tau : {cplx{0.0, 0.75}, cplx{0.5, 0.9}}) {
    const ThetaParams p(tau);
    worst_deriv = std::max(worst_deriv, std::abs(theta_derivative_at_zero(p) - 1.0));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 100; ++k) {
      const cplx x{u(rng), u(rng)};
      const cplx t = theta(x, p);
      worst = std::max(worst, rel(theta(-x, p), -t));
      worst = std::max(worst, rel(theta(x + 1.0, p), -t));
      worst = std::max(worst, rel(theta(x + tau, p), -std::exp(-pi * I * tau - 2.0 * pi * I * x) * t));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && worst_deriv < 1e-8 && secs < 1.0,
          fmt("max rel err %.2e, |theta'(0)-1| %.2e, %.3f s", worst, worst_deriv, secs)};
}

Outcome weyl_relations() {
  const auto t0 = std::chrono::steady_clock::now();
  const SampleConfig cfg;  // 20 points x 3 seeds x 2 hbar
  double worst = 0.0;
  for (const auto& t : {"A1xA1", "A2", "B2", "G2"}) {
    const DynamicalHecke alg(build_root_datum(t));
    for (int i = 0; i < alg.rank(); ++i) worst = std::max(worst, verify_quadratic(alg, i, cfg).max_residual);
    worst = std::max(worst, verify_braid(alg, 0, 1, cfg).max_residual);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-7 && secs < 30.0, fmt("max residual %.2e, %.2f s", worst, secs)};
}

Outcome reduced_words() {
  const DynamicalHecke alg(build_root_datum("A3"));
  const auto& g = alg.group();
  const auto w1 = g.reduced_word(g.longest(), false);
  const auto w2 = g.reduced_word(g.longest(), true);
  if (w1 == w2) return {false, "words coincide"};
  const auto r = compare_elements(alg.t_w(w1), alg.t_w(w2), SampleConfig{}, 1e-7, "acceptance:a3");
  return {r.pass(), fmt("max residual %.2e", r.max_residual)};
}

Outcome residue_conditions() {
  const DynamicalHecke alg(build_root_datum("A2"));
  const SampleConfig cfg;
  double worst = 0.0, lo = 1e300, hi = -1e300;
  bool ok = true;
  for (int i = 0; i < alg.rank(); ++i) {
    const auto rep = verify_residue_conditions(alg.dl_dynamical(i), cfg);
    ok = ok && rep.pass();
    worst = std::max({worst, rep["ii"].worst_residual, rep["ii'"].worst_residual});
    lo = std::min(lo, rep["iii"].min_slope);
    hi = std::max(hi, rep["iii"].max_slope);
  }
  const auto& g = alg.group();
  const auto bad = HeckeElement::delta(alg.group_ptr(), g.simple_reflection(0), WeylGroup::identity(),
                                       MeroExpr(1.0) / theta_of(alg.z_root(0)));
  const auto rep_bad = verify_residue_conditions(bad, cfg);
  const double r_bad = rep_bad["ii"].worst_residual;
  ok = ok && worst < 1e-6 && lo >= -0.1 && hi <= 0.1 && !rep_bad.pass() && std::abs(r_bad - 1.0) <= 0.1;
  return {ok, fmt("worst residue %.2e, iii slopes [%.4f, %.4f]", worst, lo, hi) +
                  fmt(", lone pole residual %.4f", r_bad)};
}

Outcome closure() {
  const DynamicalHecke alg(build_root_datum("A2"));
  const auto rep = verify_residue_conditions(alg.dl_dynamical(0) * alg.dl_dynamical(1), SampleConfig{});
  return {rep.pass(), fmt("worst residue %.2e", std::max(rep["ii"].worst_residual, rep["ii'"].worst_residual))};
}

Outcome gamma_homomorphism() {
  const DynamicalHecke alg(build_root_datum("A2"));
  const SampleConfig cfg;
  bool ok = true;
  double worst = 0.0, worst_delta = 0.0;
  for (int i = 0; i < alg.rank(); ++i) {
    const auto rep = verify_residue_conditions(alg.gamma(alg.gkv_dual_generator(i)), cfg);
    ok = ok && rep.pass();
    worst = std::max({worst, rep["ii"].worst_residual, rep["ii'"].worst_residual});
    const auto gd =
        alg.gamma(HeckeElement::delta(alg.group_ptr(), WeylGroup::identity(), alg.group().simple_reflection(i)));
    const auto t = alg.dl_dynamical(i);
    ok = ok && gd.keys() == t.keys();
    const auto r = compare_elements(gd, t, cfg, 1e-9, "acceptance:gamma-delta");
    ok = ok && r.pass();
    worst_delta = std::max(worst_delta, r.max_residual);
  }
  return {ok, fmt("Gamma(sigma) worst residue %.2e, Gamma(delta^d) vs T residual %.2e", worst, worst_delta)};
}

Outcome psi_compat() {
  const DynamicalHecke alg(build_root_datum("A2"));
  SampleConfig cfg;
  cfg.seeds = {1};
  cfg.hbars = {cfg.hbars.front()};  // 20 points
  const double tol = 1e-7;
  const MeroExpr g = theta_of(alg.z_root(1) - alg.lam_coroot(0)) * theta_of(alg.z_root(0) + alg.hbar()) /
                     theta_of(alg.lam_coroot(1) + alg.hbar());
  const auto good = verify_psi_compat(alg, 0, g, theta_of(alg.z_root(0)), cfg, tol);
  const auto bad = verify_psi_compat(alg, 0, g, theta_of(alg.lam_coroot(0) + alg.hbar()), cfg, tol, true);
  return {good.pass() && bad.max_residual >= 100 * tol,
          fmt("residual %.2e, lambda-dependent control %.2e", good.max_residual, bad.max_residual)};
}

Outcome inverse_identities() {
  SampleConfig cfg;
  cfg.seeds = {1};  // 20 points x 2 hbar
  bool ok = true;
  double worst = 0.0, control = 1e300;
  for (const auto& t : {"A1", "A2", "B2", "G2"}) {
    const DynamicalHecke alg(build_root_datum(t));
    for (int i = 0; i < alg.rank(); ++i) {
      const auto r = verify_adjunction_identity(alg, i, cfg);
      ok = ok && r.pass();
      worst = std::max({worst, r.p_identity.max_residual, r.q_identity.max_residual});
      const auto f = verify_adjunction_identity(alg, i, cfg, 1e-7, true);
      ok = ok && !f.pass();
      control = std::min(control, f.p_identity.max_residual);
    }
  }
  return {ok, fmt("max residual %.2e, sign-flipped control min residual %.2e", worst, control)};
}

Outcome pole_cancellation() {
  const DynamicalHecke alg(build_root_datum("A2"));
  const ThetaParams params;
  SampleStream fs(1, task_id("acceptance:sections"));
  double lo = 1e300;
  for (int k = 0; k < 5; ++k) {
    const MeroExpr f = detail::random_regular_section(alg.rank(), fs);
    for (int i = 0; i < alg.rank(); ++i) {
      const auto tf = act_on_section(alg.dl_dynamical(i), f);
      std::vector<LinearForm> guards = root_guards(alg.group());
      add_guards(guards, tf);
      SampleStream ps(1, task_id("acceptance:base") + static_cast<std::uint64_t>(k * 8 + i));
      for (cplx h : SampleConfig{}.hbars) {
        const auto base = sample_on_divisor(alg.z_root(i), alg.rank(), guards, h, ps, params, {0.02});
        lo = std::min(lo, is_regular_along(tf, alg.z_root(i), base, params).slope);
      }
    }
  }
  return {lo >= -0.1, fmt("min slope %.4f over 5 sections", lo)};
}

Outcome determinism() {
  RunConfig cfg;
  const auto a = dump_report(run(cfg), false);
  const auto b = dump_report(run(cfg), false);
  return {a == b, fmt("report body %.0f bytes", static_cast<double>(a.size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"theta identities at two tau values", theta_identities},
      {"Weyl relations A1xA1 A2 B2 G2", weyl_relations},
      {"reduced-word independence A3", reduced_words},
      {"residue conditions of T_alpha", residue_conditions},
      {"closure of T_alpha T_beta in A2", closure},
      {"Gamma homomorphism", gamma_homomorphism},
      {"Psi module compatibility", psi_compat},
      {"inverse identities", inverse_identities},
      {"pole cancellation", pole_cancellation},
      {"determinism", determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s [%2d] %-40s %s\n", o.pass ? "PASS" : "FAIL", ++n, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
