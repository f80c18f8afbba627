// ellhecke: batch verification of elliptic dynamical Hecke algebra identities.
//
// Exit status: 0 all identities pass, 1 an identity failed, 2 configuration error.

#include "ellhecke/config.hpp"
#include "ellhecke/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

int main(int argc, char** argv) {
  using namespace ellhecke;

  CLI::App app{"Numerical verification of elliptic dynamical Hecke algebra identities"};
  app.set_help_flag("--help", "Print this help message and exit");
  std::string config_path;
  std::optional<std::string> type, isogeny, tau, h, suites, seeds;
  std::optional<int> samples, truncation;
  std::optional<double> tol;
  bool negative_control = false;
  bool list = false;
  std::string out_path;

  app.add_option("config", config_path, "Run configuration file (key = value)");
  app.add_option("--type", type, "Cartan type (A1, A1xA1, A2, A3, B2, C2, B3, C3, G2)");
  app.add_option("--isogeny", isogeny, "adjoint | simply_connected");
  app.add_option("--tau", tau, "Modular parameter, e.g. 0.75i");
  app.add_option("--h", h, "Comma-separated values of hbar");
  app.add_option("--suites", suites, "Comma-separated subset of theta,weyl,residue,gamma,psi,inverse");
  app.add_option("--seeds", seeds, "Comma-separated sampling seeds");
  app.add_option("--samples", samples, "Sample points per identity, seed and hbar");
  app.add_option("--truncation", truncation, "Theta product truncation N");
  app.add_option("--tol", tol, "Threshold for sampled operator identities");
  app.add_flag("--negative-control", negative_control, "Corrupt the DL operators; the run must fail");
  app.add_flag("--list", list, "Print the identity catalog and exit");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& e : list_identities()) std::cout << e.name << "\t" << e.suite << "\t" << e.anchor << "\n";
    return 0;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (type) apply_setting(cfg, "type", *type);
    if (isogeny) apply_setting(cfg, "isogeny", *isogeny);
    if (tau) apply_setting(cfg, "tau", *tau);
    if (h) apply_setting(cfg, "h", *h);
    if (suites) apply_setting(cfg, "suites", *suites);
    if (seeds) apply_setting(cfg, "seeds", *seeds);
    if (samples) cfg.samples_per_identity = *samples;
    if (truncation) cfg.truncation = *truncation;
    if (tol) cfg.tol = *tol;
    if (negative_control) cfg.negative_control = true;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  const SuiteReport report = run(cfg);
  const std::string text = dump_report(report);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text << "\n";
  }
  for (const auto& r : report.records)
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  max_residual=" << r.max_residual << "\n";
  return report.pass() ? 0 : 1;
}
