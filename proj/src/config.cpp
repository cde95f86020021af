#include "oscchain/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace oscchain {

namespace {
std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& v) {
  try {
    size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    fail(origin, line, "value of '" + key + "' is not a number: '" + v + "'");
  }
}

int to_int(const std::string& origin, int line, const std::string& key,
           const std::string& v) {
  try {
    size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    fail(origin, line, "value of '" + key + "' is not an integer: '" + v + "'");
  }
}
}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  bool have_epsilon = false, have_sites = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(origin, line_no, "malformed section header");
      section = t.substr(1, t.size() - 2);
      if (section != "model" && section != "grid" && section != "states" &&
          section != "experiment")
        fail(origin, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (section.empty()) fail(origin, line_no, "key outside any section");

    if (section == "model") {
      if (key == "epsilon") { cfg.epsilon = to_double(origin, line_no, key, value); have_epsilon = true; }
      else if (key == "mu2") cfg.mu2 = to_double(origin, line_no, key, value);
      else if (key == "lambda") cfg.lambda = to_double(origin, line_no, key, value);
      else if (key == "z") cfg.z = to_double(origin, line_no, key, value);
      else if (key == "n_sites") { cfg.n_sites = to_int(origin, line_no, key, value); have_sites = true; }
      else fail(origin, line_no, "unknown key '" + key + "' in [model]");
    } else if (section == "grid") {
      if (key == "phi_max") cfg.phi_max = to_double(origin, line_no, key, value);
      else if (key == "n_points") cfg.n_points = to_int(origin, line_no, key, value);
      else fail(origin, line_no, "unknown key '" + key + "' in [grid]");
    } else if (section == "states") {
      if (key == "bra") cfg.bra = value;
      else if (key == "ket") cfg.ket = value;
      else fail(origin, line_no, "unknown key '" + key + "' in [states]");
    } else {
      if (!cfg.experiment.emplace(key, value).second)
        fail(origin, line_no, "duplicate key '" + key + "' in [experiment]");
    }
  }

  if (!have_epsilon) throw ConfigError(origin + ": missing [model] epsilon");
  if (!have_sites) throw ConfigError(origin + ": missing [model] n_sites");
  if (!(cfg.epsilon > 0.0)) throw ConfigError(origin + ": epsilon must be > 0");
  if (cfg.n_sites < 1) throw ConfigError(origin + ": n_sites must be >= 1");
  if (!(cfg.z > 0.0)) throw ConfigError(origin + ": z must be > 0");
  if (cfg.lambda < 0.0) throw ConfigError(origin + ": lambda must be >= 0");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

ModelParams RunConfig::make_params() const {
  return ModelParams(epsilon, n_sites, QuarticPotential{mu2, lambda}, z);
}

FieldGrid RunConfig::make_grid(const ModelParams& params) const {
  const double pm = phi_max ? *phi_max : auto_phi_max(params);
  int np;
  if (n_points) {
    np = *n_points;
  } else {
    // Resolve the one-step Gaussian comfortably: spacing = sqrt(eps/Z)/5.
    const double h = std::sqrt(params.epsilon() / params.z_site(0)) / 5.0;
    np = static_cast<int>(std::ceil(2.0 * pm / h)) + 1;
  }
  return FieldGrid(np, pm);
}

StateVector RunConfig::make_state(const std::string& spec, StateVector::Side side,
                                  const ModelParams& params,
                                  const FieldGrid& grid) const {
  const int site = (side == StateVector::Side::ket) ? params.first_site()
                                                    : params.last_site();
  if (spec == "ground") return ground_state(params, grid, site, side);
  if (spec == "uniform") return uniform_state(grid, site, side);
  if (spec.rfind("gaussian:", 0) == 0) {
    const double width = std::stod(spec.substr(9));
    return gaussian_state(grid, width, site, side);
  }
  throw ConfigError("unknown state spec '" + spec +
                    "' (want ground|uniform|gaussian:WIDTH)");
}

std::optional<std::string> RunConfig::take_experiment(const std::string& key) {
  const auto it = experiment.find(key);
  if (it == experiment.end()) return std::nullopt;
  std::string v = it->second;
  experiment.erase(it);
  return v;
}

void RunConfig::finish_experiment() const {
  if (!experiment.empty())
    throw ConfigError("unknown key '" + experiment.begin()->first +
                      "' in [experiment]");
}

}  // namespace oscchain
