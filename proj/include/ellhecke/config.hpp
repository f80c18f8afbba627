// Flat `key = value` run configuration files.
//
//   # comment
//   type      = G2
//   isogeny   = adjoint
//   tau       = 0.75i
//   h         = 0.3141+0.2718i, 0.1732+0.4142i
//   seeds     = 1, 2, 3
//   samples   = 20
//   suites    = weyl, residue
//   truncation = 64
//   tol       = 1e-7
//   negative_control = false

#ifndef ELLHECKE_CONFIG_HPP
#define ELLHECKE_CONFIG_HPP

#include "ellhecke/run.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ellhecke {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  return v;
}

}  // namespace detail

/// Parses "a", "bi", "a+bi", "a-bi" (also "i" and "-i" for +-1 imaginary).
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {detail::parse_real(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return detail::parse_real(t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {detail::parse_real(s.substr(0, split)), imag_part(s.substr(split))};
}

inline bool parse_bool(const std::string& s) {
  std::string l;
  for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

/// Applies one key = value setting. Errors carry the key as their field path.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "type") {
      cfg.cartan_label = value;
    } else if (key == "isogeny") {
      cfg.isogeny = parse_isogeny(value);
    } else if (key == "tau") {
      cfg.tau = parse_complex(value);
    } else if (key == "h") {
      cfg.h.clear();
      for (const auto& v : detail::split_list(value)) cfg.h.push_back(parse_complex(v));
    } else if (key == "truncation") {
      cfg.truncation = std::stoi(value);
    } else if (key == "tol") {
      cfg.tol = detail::parse_real(value);
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& v : detail::split_list(value)) cfg.seeds.push_back(std::stoull(v));
    } else if (key == "samples") {
      cfg.samples_per_identity = std::stoi(value);
    } else if (key == "suites") {
      cfg.suites = detail::split_list(value);
    } else if (key == "negative_control") {
      cfg.negative_control = parse_bool(value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in, std::move(cfg));
}

}  // namespace ellhecke

#endif  // ELLHECKE_CONFIG_HPP
