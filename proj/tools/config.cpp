#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "jtl/io.hpp"

namespace jtlsim {

namespace {

using jtl::ValidationError;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"circuit", {"i_c", "c_j", "l", "r_n", "r_sub", "n_jtl", "z_in", "z_out"}},
      {"drive",
       {"protocol", "n_pairs", "spacing_multiple", "envelope_peak", "envelope_sigma",
        "pulse_fwhm", "v_tilde"}},
      {"solver", {"dt_divisor", "t_end"}},
      {"scenario",
       {"id", "alpha_out", "alpha_in", "lambda_j", "omega_p", "i_c", "n_jtl", "r_n", "r_sub",
        "n_pairs"}},
  };
  return s;
}

double number(const std::string& where, const std::string& text) {
  double v = 0.0;
  size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ValidationError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::optional<double> lookup(const std::map<std::string, std::string>& section,
                             const std::string& name, const std::string& key) {
  auto it = section.find(key);
  if (it == section.end()) return std::nullopt;
  return number(name + "." + key, it->second);
}

}  // namespace

Config parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("config parse error at line " + std::to_string(e.line()) + ": " +
                          e.message());
  }
  Config cfg;
  for (const auto& [section, body] : tree) {
    auto known = schema().find(section);
    if (known == schema().end() || body.empty()) {
      throw ValidationError("unknown config section [" + section +
                            "]; valid: circuit, drive, solver, scenario");
    }
    auto& dst = section == "circuit" ? cfg.circuit
                : section == "drive" ? cfg.drive
                : section == "solver" ? cfg.solver
                                      : cfg.scenario;
    for (const auto& [key, leaf] : body) {
      if (!known->second.count(key)) {
        std::string msg = "unknown key '" + key + "' in [" + section + "]; valid:";
        for (const auto& k : known->second) msg += " " + k;
        throw ValidationError(msg);
      }
      dst[key] = leaf.data();
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

jtl::CircuitParams circuit_from(const Config& cfg) {
  auto need = [&](const char* key) {
    auto v = lookup(cfg.circuit, "circuit", key);
    if (!v) throw ValidationError(std::string("circuit.") + key + " is required");
    return *v;
  };
  jtl::CircuitParams c;
  c.i_c = need("i_c");
  c.c_j = need("c_j");
  c.l = need("l");
  const double n = need("n_jtl");
  if (n != std::floor(n)) throw ValidationError("circuit.n_jtl must be an integer");
  c.n_jtl = static_cast<int>(n);
  c.z_in = need("z_in");
  c.z_out = need("z_out");
  c.r_n = lookup(cfg.circuit, "circuit", "r_n").value_or(jtl::default_normal_resistance());
  c.r_sub = lookup(cfg.circuit, "circuit", "r_sub").value_or(0.0);
  if (!cfg.circuit.count("r_sub") && c.i_c > 0.0) c.r_sub = jtl::default_subgap_resistance(c.i_c);
  c.validate();
  return c;
}

jtl::ScenarioSpec scenario_from(const Config& cfg, const std::optional<std::string>& cli_id,
                                const std::filesystem::path& out_dir) {
  std::string id;
  if (cli_id) {
    id = *cli_id;
  } else if (auto it = cfg.scenario.find("id"); it != cfg.scenario.end()) {
    id = it->second;
  } else {
    throw ValidationError("no scenario given; use --scenario or [scenario] id");
  }
  jtl::ScenarioSpec spec;
  spec.id = jtl::parse_scenario(id);
  spec.output_dir = out_dir;

  // [circuit] values become design targets: C_J and L are turned into the
  // plasma frequency and penetration depth they imply, terminations into
  // impedance ratios.
  const auto& c = cfg.circuit;
  auto value = [&](const char* key) { return lookup(c, "circuit", key); };
  const auto i_c = value("i_c");
  const auto c_j = value("c_j");
  const auto l = value("l");
  auto set = [&](const std::string& key, double v) { spec.overrides[key] = jtl::format_shortest(v); };
  if (i_c) set("i_c", *i_c);
  if (auto it = c.find("n_jtl"); it != c.end()) spec.overrides["n_jtl"] = it->second;
  if (auto v = value("r_n")) set("r_n", *v);
  if (auto v = value("r_sub")) set("r_sub", *v);
  if ((c_j || l) && !i_c) throw ValidationError("circuit.c_j and circuit.l need circuit.i_c");
  if (c_j) {
    if (!(*c_j > 0.0) || !(*i_c > 0.0)) throw ValidationError("circuit.c_j and circuit.i_c must be positive");
    set("omega_p", 1.0 / std::sqrt(jtl::josephson_inductance(*i_c) * *c_j));
  }
  if (l) {
    if (!(*l > 0.0) || !(*i_c > 0.0)) throw ValidationError("circuit.l and circuit.i_c must be positive");
    set("lambda_j", std::sqrt(jtl::josephson_inductance(*i_c) / *l));
  }
  for (const char* key : {"z_in", "z_out"}) {
    auto z = value(key);
    if (!z) continue;
    if (!c_j || !l) throw ValidationError(std::string("circuit.") + key + " needs circuit.c_j and circuit.l");
    if (!(*z > 0.0)) throw ValidationError(std::string("circuit.") + key + " must be positive");
    set(key == std::string("z_in") ? "alpha_in" : "alpha_out", std::sqrt(*l / *c_j) / *z);
  }
  for (const auto& [k, v] : cfg.drive) spec.overrides[k] = v;
  for (const auto& [k, v] : cfg.scenario) {
    if (k != "id") spec.overrides[k] = v;
  }
  return spec;
}

jtl::RunOptions options_from(const Config& cfg, std::optional<double> cli_divisor, int jobs) {
  jtl::RunOptions o;
  o.jobs = jobs;
  if (auto v = lookup(cfg.solver, "solver", "dt_divisor")) o.dt_divisor = *v;
  if (cli_divisor) o.dt_divisor = *cli_divisor;
  if (!(o.dt_divisor >= 100.0)) {
    throw ValidationError("solver.dt_divisor must be at least 100 (dt <= T_P / 100)");
  }
  if (auto v = lookup(cfg.solver, "solver", "t_end")) {
    if (!(*v > 0.0)) throw ValidationError("solver.t_end must be positive");
    o.fixed_t_end = *v;
  }
  return o;
}

std::string engineering(double value) {
  static const char* prefixes[] = {"y", "z", "a", "f", "p", "n", "u", "m", "", "k", "M", "G", "T"};
  if (value == 0.0 || !std::isfinite(value)) return jtl::format_sig(value) + " ";
  int exp3 = static_cast<int>(std::floor(std::log10(std::abs(value)) / 3.0));
  exp3 = std::clamp(exp3, -8, 4);
  double mantissa = value / std::pow(10.0, 3 * exp3);
  // Rounding to 6 digits can carry into the next prefix (999.9999 -> 1000).
  if (std::abs(std::stod(jtl::format_sig(mantissa))) >= 1000.0 && exp3 < 4) {
    ++exp3;
    mantissa = value / std::pow(10.0, 3 * exp3);
  }
  return jtl::format_sig(mantissa) + " " + prefixes[exp3 + 8];
}

std::string describe(const jtl::CircuitParams& circuit) {
  const jtl::DerivedParams d = jtl::derive(circuit);
  std::ostringstream out;
  out << "lambda_J = " << jtl::format_sig(d.lambda_j) << " cells\n";
  out << "omega_P/2pi = " << engineering(d.omega_p / (2.0 * std::numbers::pi)) << "Hz\n";
  out << "Z_JTL = " << engineering(d.z_jtl) << "Ohm\n";
  out << "beta_C = " << jtl::format_sig(d.beta_c) << "\n";
  out << "alpha_In = " << jtl::format_sig(d.alpha_in) << "\n";
  out << "alpha_Out = " << jtl::format_sig(d.alpha_out) << "\n";
  out << "tau_LR = " << engineering(d.tau_lr) << "s\n";
  out << "E_0 = " << engineering(d.e_0) << "J\n";
  return out.str();
}

}  // namespace jtlsim
