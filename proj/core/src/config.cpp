#include "dyonlab/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dyonlab/error.hpp"
#include "dyonlab/report.hpp"

namespace dyonlab {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

struct Value {
  enum class Type { Number, String, Boolean, Array } type;
  double number = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<double> array;
};

Value parse_value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty()) fail(line, "missing value");
  Value out{};
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
    out.type = Value::Type::String;
    out.str = v.substr(1, v.size() - 2);
    return out;
  }
  if (v == "true" || v == "false") {
    out.type = Value::Type::Boolean;
    out.boolean = v == "true";
    return out;
  }
  if (v.front() == '[') {
    if (v.back() != ']') fail(line, "unterminated array");
    out.type = Value::Type::Array;
    std::string inner = v.substr(1, v.size() - 2);
    std::istringstream is(inner);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(line, "empty array element");
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(item, &used);
      } catch (const std::exception&) {
        fail(line, "array element '" + item + "' is not a number");
      }
      if (used != item.size()) fail(line, "array element '" + item + "' is not a number");
      out.array.push_back(d);
    }
    return out;
  }
  std::size_t used = 0;
  try {
    out.number = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, "value '" + v + "' is not a number");
  }
  if (used != v.size()) fail(line, "value '" + v + "' is not a number");
  out.type = Value::Type::Number;
  return out;
}

double as_number(const Value& v, int line) {
  if (v.type != Value::Type::Number) fail(line, "expected a number");
  return v.number;
}

std::string as_string(const Value& v, int line) {
  if (v.type != Value::Type::String) fail(line, "expected a quoted string");
  return v.str;
}

Vec3 as_vec3(const Value& v, int line) {
  if (v.type != Value::Type::Array || v.array.size() != 3) {
    fail(line, "expected an array of three numbers");
  }
  return {v.array[0], v.array[1], v.array[2]};
}

int as_int(const Value& v, int line) {
  const double d = as_number(v, line);
  const double r = std::round(d);
  if (std::abs(d - r) > 1e-9) fail(line, "expected an integer");
  return static_cast<int>(r);
}

PotentialSpec parse_potential(const std::string& names, double alpha, double omega,
                              const Vec3& field, int line) {
  std::vector<PotentialSpec> terms;
  std::istringstream is(names);
  std::string part;
  while (std::getline(is, part, '+')) {
    part = trim(part);
    if (part == "zero") {
      terms.push_back(PotentialSpec::zero());
    } else if (part == "coulomb") {
      terms.push_back(PotentialSpec::coulomb(alpha));
    } else if (part == "oscillator") {
      terms.push_back(PotentialSpec::oscillator(omega));
    } else if (part == "stark") {
      terms.push_back(PotentialSpec::linear_stark(field));
    } else {
      fail(line, "unknown potential '" + part + "'");
    }
  }
  if (terms.empty()) fail(line, "empty potential");
  if (terms.size() == 1) return terms[0];
  return PotentialSpec::sum(std::move(terms));
}

}  // namespace

double ExperimentConfig::resolved_h() const {
  if (h) return *h;
  // Auto step: 1/2000 of the circular period at unit radius for the Coulomb
  // strength, else a generic small step.
  double alpha = 0.0;
  const std::function<void(const PotentialSpec&)> scan = [&](const PotentialSpec& p) {
    if (p.kind == PotentialSpec::Kind::Coulomb) alpha += std::abs(p.alpha);
    for (const auto& t : p.terms) scan(t);
  };
  scan(system.potential);
  if (alpha > 0.0) return 2.0 * std::numbers::pi * std::sqrt(system.mu / alpha) / 2000.0;
  return 1e-3;
}

double ExperimentConfig::resolved_quantum_s() const {
  return quantum_s ? *quantum_s : system.total_monopole_number();
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  // raw values gathered before assembling the potential
  std::string potential_names = "zero";
  double alpha = 0.0, omega = 1.0;
  Vec3 stark_vec{};
  int potential_line = 0;

  std::istringstream is(text);
  std::string raw;
  std::string section;  // "" = top level
  int line = 0;
  bool seen_center = false;

  while (std::getline(is, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.size() >= 4 && s[1] == '[') {
        if (s.substr(s.size() - 2) != "]]") fail(line, "malformed table header");
        const std::string name = trim(s.substr(2, s.size() - 4));
        if (name != "centers") fail(line, "unknown table array '" + name + "'");
        cfg.system.centers.emplace_back();
        seen_center = true;
        section = "centers";
        continue;
      }
      if (s.back() != ']') fail(line, "malformed section header");
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name != "system" && name != "metric" && name != "integrator" && name != "quantum" &&
          name != "output") {
        fail(line, "unknown section '" + name + "'");
      }
      section = name;
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const Value val = parse_value(s.substr(eq + 1), line);

    if (section.empty()) {
      if (key == "command") {
        const std::string c = as_string(val, line);
        if (c == "simulate") cfg.command = Command::Simulate;
        else if (c == "spectrum") cfg.command = Command::Spectrum;
        else if (c == "fields-check") cfg.command = Command::FieldsCheck;
        else if (c == "selection-rules") cfg.command = Command::SelectionRules;
        else if (c == "poincare") cfg.command = Command::Poincare;
        else if (c == "verify-all") cfg.command = Command::VerifyAll;
        else fail(line, "unknown command '" + c + "'");
      } else if (key == "seed") {
        const double d = as_number(val, line);
        if (d < 0.0) fail(line, "seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(d);
      } else {
        fail(line, "unknown top-level key '" + key + "'");
      }
    } else if (section == "metric") {
      if (key == "curvature") {
        const std::string c = as_string(val, line);
        if (c == "flat") cfg.system.metric.curvature = Curvature::Flat;
        else if (c == "sphere") cfg.system.metric.curvature = Curvature::Sphere;
        else if (c == "hyperboloid") cfg.system.metric.curvature = Curvature::Hyperboloid;
        else fail(line, "unknown curvature '" + c + "'");
      } else if (key == "r0") {
        cfg.system.metric.r0 = as_number(val, line);
      } else {
        fail(line, "unknown key '" + key + "' in [metric]");
      }
    } else if (section == "system") {
      if (key == "mu") cfg.system.mu = as_number(val, line);
      else if (key == "delta_min") cfg.system.delta_min = as_number(val, line);
      else if (key == "replacement") {
        const std::string r = as_string(val, line);
        if (r == "none") cfg.system.replacement = ReplacementMode::None;
        else if (r == "one-center") cfg.system.replacement = ReplacementMode::OneCenter;
        else if (r == "multi-center") cfg.system.replacement = ReplacementMode::MultiCenter;
        else fail(line, "unknown replacement mode '" + r + "'");
      } else if (key == "potential") {
        potential_names = as_string(val, line);
        potential_line = line;
      } else if (key == "alpha") alpha = as_number(val, line);
      else if (key == "omega") omega = as_number(val, line);
      else if (key == "stark_field") stark_vec = as_vec3(val, line);
      else if (key == "kappa") cfg.system.susy_kappa = as_number(val, line);
      else fail(line, "unknown key '" + key + "' in [system]");
    } else if (section == "centers") {
      DyonCenter& c = cfg.system.centers.back();
      if (key == "position") c.position = as_vec3(val, line);
      else if (key == "g") c.g = as_number(val, line);
      else if (key == "q") c.q = as_number(val, line);
      else fail(line, "unknown key '" + key + "' in [[centers]]");
    } else if (section == "integrator") {
      if (key == "scheme") {
        const std::string sc = as_string(val, line);
        if (sc == "rk4") cfg.scheme = Integrator::RK4;
        else if (sc == "implicit-midpoint") cfg.scheme = Integrator::ImplicitMidpoint;
        else fail(line, "unknown scheme '" + sc + "'");
      } else if (key == "h") cfg.h = as_number(val, line);
      else if (key == "t_end") cfg.t_end = as_number(val, line);
      else if (key == "stride") cfg.stride = as_int(val, line);
      else if (key == "x0") cfg.x0 = as_vec3(val, line);
      else if (key == "pi0") cfg.pi0 = as_vec3(val, line);
      else if (key == "energy") cfg.energy = as_number(val, line);
      else if (key == "jmag") cfg.jmag = as_number(val, line);
      else if (key == "branch") {
        const std::string b = as_string(val, line);
        if (b == "perihelion") cfg.branch = TurningBranch::Perihelion;
        else if (b == "aphelion") cfg.branch = TurningBranch::Aphelion;
        else fail(line, "unknown branch '" + b + "'");
      } else if (key == "section_normal") cfg.section_normal = as_vec3(val, line);
      else if (key == "section_offset") cfg.section_offset = as_number(val, line);
      else if (key == "section_direction") cfg.section_direction = as_int(val, line);
      else if (key == "crossings") cfg.crossings = as_int(val, line);
      else if (key == "t_max") cfg.section_t_max = as_number(val, line);
      else fail(line, "unknown key '" + key + "' in [integrator]");
    } else if (section == "quantum") {
      if (key == "s") cfg.quantum_s = as_number(val, line);
      else if (key == "l_max") cfg.l_max = as_number(val, line);
      else if (key == "n_max") cfg.n_max = as_number(val, line);
      else if (key == "r_min") cfg.grid.r_min = as_number(val, line);
      else if (key == "r_max") cfg.grid.r_max = as_number(val, line);
      else if (key == "nodes") cfg.grid.nodes = as_int(val, line);
      else if (key == "spacing") {
        const std::string sp = as_string(val, line);
        if (sp == "log") cfg.grid.spacing = RadialGrid::Spacing::Logarithmic;
        else if (sp == "uniform") cfg.grid.spacing = RadialGrid::Spacing::Uniform;
        else fail(line, "unknown spacing '" + sp + "'");
      } else if (key == "threshold") cfg.selection_threshold = as_number(val, line);
      else if (key == "stark_field") cfg.stark_field = as_number(val, line);
      else fail(line, "unknown key '" + key + "' in [quantum]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = as_string(val, line);
      else if (key == "prefix") cfg.prefix = as_string(val, line);
      else if (key == "format") {
        const std::string f = as_string(val, line);
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else fail(line, "unknown format '" + f + "'");
      } else {
        fail(line, "unknown key '" + key + "' in [output]");
      }
    }
  }

  cfg.system.potential = parse_potential(potential_names, alpha, omega, stark_vec,
                                         potential_line == 0 ? 1 : potential_line);

  // Semantic validation against module preconditions.
  try {
    cfg.system.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid system: ") + e.what());
  }
  if (cfg.h && !(*cfg.h > 0.0)) throw ConfigError("integrator step h must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (cfg.stride < 1) throw ConfigError("stride must be >= 1");
  if (cfg.grid.nodes < 200) throw ConfigError("quantum grid needs at least 200 nodes");
  if (!(cfg.grid.r_min > 0.0) || !(cfg.grid.r_max > cfg.grid.r_min)) {
    throw ConfigError("quantum grid requires 0 < r_min < r_max");
  }
  if (!(cfg.n_max >= 1.0)) throw ConfigError("n_max must be at least 1");
  (void)seen_center;
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Spectrum: return "spectrum";
    case Command::FieldsCheck: return "fields-check";
    case Command::SelectionRules: return "selection-rules";
    case Command::Poincare: return "poincare";
    case Command::VerifyAll: return "verify-all";
  }
  return "simulate";
}

std::string potential_names_of(const PotentialSpec& p) {
  switch (p.kind) {
    case PotentialSpec::Kind::Zero: return "zero";
    case PotentialSpec::Kind::Coulomb: return "coulomb";
    case PotentialSpec::Kind::Oscillator: return "oscillator";
    case PotentialSpec::Kind::LinearStark: return "stark";
    case PotentialSpec::Kind::Sum: {
      std::string names;
      for (const auto& t : p.terms) {
        if (!names.empty()) names += "+";
        names += potential_names_of(t);
      }
      return names;
    }
  }
  return "zero";
}

void scan_potential(const PotentialSpec& p, double& alpha, double& omega, Vec3& field) {
  switch (p.kind) {
    case PotentialSpec::Kind::Coulomb: alpha = p.alpha; break;
    case PotentialSpec::Kind::Oscillator: omega = p.omega; break;
    case PotentialSpec::Kind::LinearStark: field = p.field; break;
    case PotentialSpec::Kind::Sum:
      for (const auto& t : p.terms) scan_potential(t, alpha, omega, field);
      break;
    default: break;
  }
}

std::string vec3_str(const Vec3& v) {
  return "[" + format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z) + "]";
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "command = \"" << command_name(cfg.command) << "\"\n";
  os << "seed = " << cfg.seed << "\n\n";

  os << "[metric]\n";
  os << "curvature = \""
     << (cfg.system.metric.curvature == Curvature::Flat
             ? "flat"
             : (cfg.system.metric.curvature == Curvature::Sphere ? "sphere" : "hyperboloid"))
     << "\"\n";
  os << "r0 = " << format_double(cfg.system.metric.r0) << "\n\n";

  double alpha = 0.0, omega = 1.0;
  Vec3 stark{};
  scan_potential(cfg.system.potential, alpha, omega, stark);
  os << "[system]\n";
  os << "mu = " << format_double(cfg.system.mu) << "\n";
  os << "delta_min = " << format_double(cfg.system.delta_min) << "\n";
  os << "replacement = \""
     << (cfg.system.replacement == ReplacementMode::None
             ? "none"
             : (cfg.system.replacement == ReplacementMode::OneCenter ? "one-center"
                                                                     : "multi-center"))
     << "\"\n";
  os << "potential = \"" << potential_names_of(cfg.system.potential) << "\"\n";
  os << "alpha = " << format_double(alpha) << "\n";
  os << "omega = " << format_double(omega) << "\n";
  os << "stark_field = " << vec3_str(stark) << "\n";
  if (cfg.system.susy_kappa) os << "kappa = " << format_double(*cfg.system.susy_kappa) << "\n";
  os << "\n";

  for (const auto& c : cfg.system.centers) {
    os << "[[centers]]\n";
    os << "position = " << vec3_str(c.position) << "\n";
    os << "g = " << format_double(c.g) << "\n";
    os << "q = " << format_double(c.q) << "\n\n";
  }

  os << "[integrator]\n";
  os << "scheme = \"" << (cfg.scheme == Integrator::RK4 ? "rk4" : "implicit-midpoint")
     << "\"\n";
  if (cfg.h) os << "h = " << format_double(*cfg.h) << "\n";
  os << "t_end = " << format_double(cfg.t_end) << "\n";
  os << "stride = " << cfg.stride << "\n";
  if (cfg.x0) os << "x0 = " << vec3_str(*cfg.x0) << "\n";
  if (cfg.pi0) os << "pi0 = " << vec3_str(*cfg.pi0) << "\n";
  if (cfg.energy) os << "energy = " << format_double(*cfg.energy) << "\n";
  if (cfg.jmag) os << "jmag = " << format_double(*cfg.jmag) << "\n";
  os << "branch = \"" << (cfg.branch == TurningBranch::Perihelion ? "perihelion" : "aphelion")
     << "\"\n";
  os << "section_normal = " << vec3_str(cfg.section_normal) << "\n";
  os << "section_offset = " << format_double(cfg.section_offset) << "\n";
  os << "section_direction = " << cfg.section_direction << "\n";
  os << "crossings = " << cfg.crossings << "\n";
  os << "t_max = " << format_double(cfg.section_t_max) << "\n\n";

  os << "[quantum]\n";
  if (cfg.quantum_s) os << "s = " << format_double(*cfg.quantum_s) << "\n";
  os << "l_max = " << format_double(cfg.l_max) << "\n";
  os << "n_max = " << format_double(cfg.n_max) << "\n";
  os << "r_min = " << format_double(cfg.grid.r_min) << "\n";
  os << "r_max = " << format_double(cfg.grid.r_max) << "\n";
  os << "nodes = " << cfg.grid.nodes << "\n";
  os << "spacing = \""
     << (cfg.grid.spacing == RadialGrid::Spacing::Logarithmic ? "log" : "uniform") << "\"\n";
  os << "threshold = " << format_double(cfg.selection_threshold) << "\n";
  os << "stark_field = " << format_double(cfg.stark_field) << "\n\n";

  os << "[output]\n";
  os << "dir = \"" << cfg.out_dir << "\"\n";
  os << "prefix = \"" << cfg.prefix << "\"\n";
  os << "format = \"" << (cfg.format == OutputFormat::Csv ? "csv" : "json") << "\"\n";
  return os.str();
}

}  // namespace dyonlab
