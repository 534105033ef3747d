#include "gpe/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpe/error.hpp"

namespace gpe {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ValidationError, "validation-error: " + key + ": " + why);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    invalid(key, "expected a real number, got '" + text + "'");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    invalid(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  invalid(key, "expected true/false, got '" + text + "'");
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse(key, item));
  }
  return out;
}

void apply_problem(const pt::ptree& section, ProblemSpec& p) {
  for (const auto& [key, node] : section) {
    const std::string full = "problem." + key;
    const std::string value = node.data();
    if (key == "preset") {
      // Already applied before the section is read.
    } else if (key == "a") {
      p.a = to_real(full, value);
    } else if (key == "b") {
      p.b = to_real(full, value);
    } else if (key == "n_cells") {
      p.n_cells = to_int<int>(full, value);
    } else if (key == "beta") {
      p.beta = to_real(full, value);
    } else if (key == "quad_coeff") {
      p.potential.quad_coeff = to_real(full, value);
    } else if (key == "sin_amp") {
      p.potential.sin_amp = to_real(full, value);
    } else if (key == "sin_k") {
      p.potential.sin_k = to_real(full, value);
    } else if (key == "offset") {
      p.potential.offset = to_real(full, value);
    } else if (key == "potential_file") {
      p.potential_file = trim(value);
    } else {
      invalid(full, "unknown key");
    }
  }
}

void apply_scheme(const pt::ptree& section, SchemeConfig& s) {
  for (const auto& [key, node] : section) {
    const std::string full = "scheme." + key;
    const std::string value = node.data();
    if (key == "name") {
      const auto scheme = parse_scheme(trim(value));
      if (!scheme) invalid(full, "expected basic|gfdn|shifted|damped");
      s.scheme = *scheme;
    } else if (key == "tau") {
      s.tau = to_real(full, value);
    } else if (key == "sigma") {
      s.sigma = to_real(full, value);
    } else if (key == "tol") {
      s.tol = to_real(full, value);
    } else if (key == "max_iter") {
      s.max_iter = to_int<int>(full, value);
    } else if (key == "line_search") {
      s.line_search = to_bool(full, value);
    } else if (key == "seed") {
      s.seed = to_int<std::uint64_t>(full, value);
    } else if (key == "rate_cutoff") {
      s.rate_cutoff = to_real(full, value);
    } else {
      invalid(full, "unknown key");
    }
  }
}

void apply_experiment(const pt::ptree& section, ExperimentSpec& e) {
  for (const auto& [key, node] : section) {
    const std::string full = "experiment." + key;
    const std::string value = node.data();
    if (key == "reference_seed") {
      e.reference_seed = to_int<std::uint64_t>(full, value);
    } else if (key == "reference_tol") {
      e.reference_tol = to_real(full, value);
    } else if (key == "sweep") {
      const std::string t = trim(value);
      if (t == "tau") {
        e.sweep = SweepParam::Tau;
      } else if (t == "sigma") {
        e.sweep = SweepParam::Sigma;
      } else if (t == "none") {
        e.sweep = SweepParam::None;
      } else {
        invalid(full, "expected tau|sigma|none");
      }
    } else if (key == "values") {
      e.values = to_list<double>(full, value, to_real);
    } else if (key == "sigmas") {
      e.sigmas = to_list<double>(full, value, to_real);
    } else if (key == "output") {
      e.output = trim(value);
    } else {
      invalid(full, "unknown key");
    }
  }
}

std::vector<double> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("problem.potential_file", "cannot open '" + path + "'");
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(to_real("problem.potential_file", token));
  return values;
}

}  // namespace

RunSpec preset_spec(const std::string& name) {
  RunSpec spec;
  spec.problem.preset = name;
  if (name == "mp1") {
    spec.problem.a = -2.0;
    spec.problem.b = 2.0;
    spec.problem.n_cells = 1000;
    spec.problem.potential.quad_coeff = 0.25;
    spec.problem.potential.sin_amp = 1.0;
    spec.problem.potential.sin_k = 2.0;
    spec.problem.beta = 5.0;
    spec.scheme.tol = 1e-11;
  } else if (name == "mp2") {
    spec.problem.a = -16.0;
    spec.problem.b = 16.0;
    spec.problem.n_cells = 1000;
    spec.problem.potential.quad_coeff = 0.5;
    spec.problem.beta = 400.0;
    spec.scheme.tol = 1e-10;
  } else {
    invalid("problem.preset", "expected mp1|mp2, got '" + name + "'");
  }
  return spec;
}

RunSpec parse_config_text(const std::string& text,
                          const std::optional<std::string>& preset) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::ParseError, "parse-error: line " +
                                           std::to_string(e.line()) + ": " +
                                           e.message());
  }

  for (const auto& [name, node] : tree) {
    if (name != "problem" && name != "scheme" && name != "experiment") {
      invalid(name, node.empty() ? "key outside of a section"
                                 : "unknown section [" + name + "]");
    }
  }

  std::string preset_name = preset.value_or("");
  if (!preset) {
    if (const auto p = tree.get_optional<std::string>("problem.preset")) {
      preset_name = trim(*p);
    }
  }
  RunSpec spec = preset_name.empty() ? RunSpec{} : preset_spec(preset_name);

  if (const auto s = tree.get_child_optional("problem")) apply_problem(*s, spec.problem);
  if (const auto s = tree.get_child_optional("scheme")) apply_scheme(*s, spec.scheme);
  if (const auto s = tree.get_child_optional("experiment")) {
    apply_experiment(*s, spec.experiment);
  }
  validate(spec);
  return spec;
}

RunSpec parse_config(const std::string& path,
                     const std::optional<std::string>& preset) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::ValidationError,
                "validation-error: config: cannot open '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), preset);
}

void validate(const RunSpec& spec) {
  const ProblemSpec& p = spec.problem;
  if (!std::isfinite(p.a)) invalid("problem.a", "must be finite");
  if (!std::isfinite(p.b) || !(p.a < p.b)) invalid("problem.b", "must exceed a");
  if (p.n_cells < 2) invalid("problem.n_cells", "must be >= 2");
  if (!(p.beta >= 0.0)) invalid("problem.beta", "must be >= 0");
  if (!p.potential_file.empty() && !std::filesystem::exists(p.potential_file)) {
    invalid("problem.potential_file", "file '" + p.potential_file + "' not found");
  }

  const SchemeConfig& s = spec.scheme;
  if (!(s.tol > 0.0)) invalid("scheme.tol", "must be > 0");
  if (s.max_iter < 1) invalid("scheme.max_iter", "must be >= 1");
  if (s.scheme == Scheme::Gfdn && !(s.tau > 0.0)) invalid("scheme.tau", "must be > 0");
  if (s.scheme == Scheme::Damped && !s.line_search && !(s.tau > 0.0 && s.tau < 2.0)) {
    invalid("scheme.tau", "must lie in (0, 2)");
  }
  if (!std::isfinite(s.sigma)) invalid("scheme.sigma", "must be finite");
  if (!(s.rate_cutoff >= 0.0)) invalid("scheme.rate_cutoff", "must be >= 0");

  const ExperimentSpec& e = spec.experiment;
  if (!(e.reference_tol > 0.0)) invalid("experiment.reference_tol", "must be > 0");
  if (e.sweep == SweepParam::Tau) {
    for (double v : e.values) {
      if (!(v > 0.0)) invalid("experiment.values", "tau values must be > 0");
      if (s.scheme == Scheme::Damped && !(v < 2.0)) {
        invalid("experiment.values", "damped tau values must lie in (0, 2)");
      }
    }
  }
  for (double v : e.values) {
    if (!std::isfinite(v)) invalid("experiment.values", "must be finite");
  }
}

GpeProblem build_problem(const RunSpec& spec) {
  const ProblemSpec& p = spec.problem;
  const Mesh1D mesh = build_mesh(p.a, p.b, p.n_cells);
  Potential potential = p.potential;
  if (!p.potential_file.empty()) {
    potential.tabulated = read_table(p.potential_file);
    if (potential.tabulated->size() != static_cast<std::size_t>(p.n_cells) + 1) {
      invalid("problem.potential_file",
              "expected " + std::to_string(p.n_cells + 1) + " values, got " +
                  std::to_string(potential.tabulated->size()));
    }
  }
  try {
    return GpeProblem(mesh, std::move(potential), p.beta);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NegativePotential) {
      invalid("problem.potential", e.what());
    }
    throw;
  }
}

}  // namespace gpe
