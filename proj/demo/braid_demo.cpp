// Builds the dynamical DL operators of G2 and compares both sides of the
// order-6 braid relation at a few random points.

#include "ellhecke/ellhecke.hpp"

#include <iostream>

int main() {
  using namespace ellhecke;
  const DynamicalHecke alg(build_root_datum("G2"));
  const auto lhs = alg.t_w({0, 1, 0, 1, 0, 1});
  const auto rhs = alg.t_w({1, 0, 1, 0, 1, 0});
  std::cout << "T_w0 has " << lhs.size() << " terms\n";

  SampleConfig cfg;
  cfg.samples = 5;
  const auto res = compare_elements(lhs, rhs, cfg, 1e-7, "demo");
  std::cout << "max residual over " << res.evaluations << " coefficient evaluations: " << res.max_residual << "\n";

  const auto t = alg.dl_dynamical(0);
  const auto rep = verify_residue_conditions(t, cfg);
  for (const auto& [tag, c] : rep.conditions)
    std::cout << "condition " << tag << ": " << (c.pass ? "pass" : "FAIL") << "\n";
  return res.pass() && rep.pass() ? 0 : 1;
}
