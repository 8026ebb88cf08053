#include "piezoheat/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace piezoheat {

Grid RunConfig::grid() const {
  XiQuadrature rule;
  if (k_xi > 0) rule = build_xi_quadrature(fractional(), k_xi, xi_max);
  return Grid::make(n_heat, n_beam, material, std::move(rule));
}

void RunConfig::validate() const {
  material.validate();
  fractional().validate();
  sim.validate();
  if (k_xi < 0) throw std::invalid_argument("grid.k_xi must be >= 0");
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

} // namespace

std::map<std::string, std::string> RunConfig::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["material.rho"] = fmt(material.rho);
  kv["material.chi"] = fmt(material.chi);
  kv["material.gamma"] = fmt(material.gamma);
  kv["material.beta"] = fmt(material.beta);
  kv["material.mu_mag"] = fmt(material.mu_mag);
  kv["material.kappa"] = fmt(material.kappa);
  kv["material.ell1"] = fmt(material.ell1);
  kv["material.ell2"] = fmt(material.ell2);
  kv["fractional.alpha"] = fmt(alpha);
  kv["fractional.eta"] = fmt(eta);
  kv["grid.n_heat"] = std::to_string(n_heat);
  kv["grid.n_beam"] = std::to_string(n_beam);
  kv["grid.k_xi"] = std::to_string(k_xi);
  kv["grid.xi_max"] = fmt(xi_max);
  kv["sim.dt"] = fmt(sim.dt);
  kv["sim.t_end"] = fmt(sim.t_end);
  kv["sim.scheme"] = to_string(sim.scheme);
  kv["sim.trace_stride"] = std::to_string(sim.trace_stride);
  kv["sim.initial_condition"] = sim.initial_condition;
  kv["output.dir"] = out_dir;
  kv["run.seed"] = std::to_string(seed);
  return kv;
}

void apply_kv(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "material.rho") cfg.material.rho = parse_double(key, v);
    else if (key == "material.chi") cfg.material.chi = parse_double(key, v);
    else if (key == "material.gamma") cfg.material.gamma = parse_double(key, v);
    else if (key == "material.beta") cfg.material.beta = parse_double(key, v);
    else if (key == "material.mu_mag") cfg.material.mu_mag = parse_double(key, v);
    else if (key == "material.kappa") cfg.material.kappa = parse_double(key, v);
    else if (key == "material.ell1") cfg.material.ell1 = parse_double(key, v);
    else if (key == "material.ell2") cfg.material.ell2 = parse_double(key, v);
    else if (key == "fractional.alpha") cfg.alpha = parse_double(key, v);
    else if (key == "fractional.eta") cfg.eta = parse_double(key, v);
    else if (key == "grid.n_heat") cfg.n_heat = static_cast<int>(parse_int(key, v));
    else if (key == "grid.n_beam") cfg.n_beam = static_cast<int>(parse_int(key, v));
    else if (key == "grid.k_xi") cfg.k_xi = static_cast<int>(parse_int(key, v));
    else if (key == "grid.xi_max") cfg.xi_max = parse_double(key, v);
    else if (key == "sim.dt") cfg.sim.dt = parse_double(key, v);
    else if (key == "sim.t_end") cfg.sim.t_end = parse_double(key, v);
    else if (key == "sim.scheme") cfg.sim.scheme = scheme_from_string(v);
    else if (key == "sim.trace_stride") cfg.sim.trace_stride = static_cast<int>(parse_int(key, v));
    else if (key == "sim.initial_condition") cfg.sim.initial_condition = v;
    else if (key == "output.dir") cfg.out_dir = v;
    else if (key == "run.seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, v));
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::from_kv(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  apply_kv(cfg, kv);
  return cfg;
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  // Unit-scale material set; chi = 2 keeps the effective stiffness chi1 = 1.
  cfg.material = MaterialParams{1.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  cfg.eta = 1.0;
  cfg.n_heat = 20;
  cfg.n_beam = 40;
  cfg.k_xi = 24;
  cfg.sim.dt = 1e-2;
  cfg.sim.t_end = 40.0;
  cfg.sim.trace_stride = 10;
  cfg.sim.scheme = Scheme::crank_nicolson;

  if (name == "zero") {
    cfg.alpha = 0.5;
    cfg.sim.initial_condition = "zero";
  } else if (name == "standard-a03") {
    cfg.alpha = 0.3;
    cfg.sim.initial_condition = "standard";
  } else if (name == "standard-a05") {
    cfg.alpha = 0.5;
    cfg.sim.initial_condition = "standard";
  } else if (name == "standard-a07") {
    cfg.alpha = 0.7;
    cfg.sim.initial_condition = "standard";
  } else if (name == "heat-only") {
    cfg.alpha = 0.5;
    cfg.sim.initial_condition = "heat-only";
  } else if (name == "beam-only") {
    cfg.alpha = 0.5;
    cfg.sim.initial_condition = "beam-only";
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return cfg;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key or value");
    kv[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_kv(cfg, parse_config_text(ss.str()));
  return cfg;
}

} // namespace piezoheat
