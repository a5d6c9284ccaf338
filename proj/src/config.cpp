// config.cpp

#include "relaxhydro/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "relaxhydro/convolve.hpp"

namespace relaxhydro {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_sections(const std::string& text, SectionMap& out,
                    std::vector<Violation>& violations) {
  std::istringstream in(text);
  std::string line;
  std::string section = "";
  int lineno = 0;
  bool ok = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        violations.push_back({"parse",
                              "line " + std::to_string(lineno) +
                                  ": unterminated section header",
                              true});
        ok = false;
        continue;
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      violations.push_back({"parse",
                            "line " + std::to_string(lineno) +
                                ": expected `key = value`",
                            true});
      ok = false;
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      violations.push_back({"parse",
                            "line " + std::to_string(lineno) + ", column 1: empty key",
                            true});
      ok = false;
      continue;
    }
    out[section][key] = Entry{value, lineno, static_cast<int>(eq) + 2};
  }
  return ok;
}

class Reader {
 public:
  Reader(const SectionMap& map, std::vector<Violation>& violations)
      : map_(map), violations_(&violations) {}

  bool has(const std::string& sec, const std::string& key) const {
    const auto s = map_.find(sec);
    return s != map_.end() && s->second.count(key) > 0;
  }

  std::string str(const std::string& sec, const std::string& key,
                  const std::string& fallback) const {
    const auto s = map_.find(sec);
    if (s == map_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second.value;
  }

  double num(const std::string& sec, const std::string& key, double fallback) {
    if (!has(sec, key)) return fallback;
    const Entry& e = map_.at(sec).at(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::exception&) {
      fail(sec, key, e, "not a number");
      return fallback;
    }
  }

  long integer(const std::string& sec, const std::string& key, long fallback) {
    if (!has(sec, key)) return fallback;
    const Entry& e = map_.at(sec).at(key);
    try {
      std::size_t pos = 0;
      const long v = std::stol(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("trailing text");
      return v;
    } catch (const std::exception&) {
      fail(sec, key, e, "not an integer");
      return fallback;
    }
  }

  std::vector<double> num_list(const std::string& sec, const std::string& key) {
    std::vector<double> out;
    if (!has(sec, key)) return out;
    const Entry& e = map_.at(sec).at(key);
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        fail(sec, key, e, "not a list of numbers");
        return {};
      }
    }
    return out;
  }

  void fail(const std::string& sec, const std::string& key, const Entry& e,
            const std::string& why) {
    violations_->push_back({"parse",
                            "line " + std::to_string(e.line) + ", column " +
                                std::to_string(e.column) + ": [" + sec + "] " +
                                key + " " + why,
                            true});
  }

 private:
  const SectionMap& map_;
  std::vector<Violation>* violations_;
};

PotentialSpec read_potential(Reader& r, const std::string& sec,
                             std::vector<Violation>& violations) {
  const std::string kind = r.str(sec, "kind", "zero");
  const double amplitude = r.num(sec, "amplitude", 1.0);
  if (kind == "zero") return PotentialSpec::zero();
  if (kind == "wrapped-gaussian") {
    const double width = r.num(sec, "width", 0.25);
    if (!(width > 0.0)) {
      violations.push_back(
          {"positivity.width", "[" + sec + "] width must be positive", true});
      return PotentialSpec::zero();
    }
    return PotentialSpec::wrapped_gaussian(amplitude, width);
  }
  if (kind == "cosine-mode") {
    std::array<int, 3> modes{1, 1, 1};
    const auto list = r.num_list(sec, "modes");
    for (std::size_t i = 0; i < list.size() && i < 3; ++i)
      modes[i] = static_cast<int>(list[i]);
    return PotentialSpec::cosine_mode(amplitude, modes);
  }
  violations.push_back({"potential.kind",
                        "[" + sec + "] unknown kind `" + kind +
                            "` (zero | wrapped-gaussian | cosine-mode)",
                        true});
  return PotentialSpec::zero();
}

void validate(RunConfig& cfg, std::vector<Violation>& violations) {
  auto fatal = [&](const std::string& rule, const std::string& msg) {
    violations.push_back({rule, msg, true});
  };
  auto warn = [&](const std::string& rule, const std::string& msg) {
    violations.push_back({rule, msg, false});
  };

  if (cfg.dim < 1 || cfg.dim > 3) fatal("grid.dim", "dim must be 1, 2 or 3");
  if (cfg.n < 2) fatal("grid.n", "n must be at least 2");
  if (!(cfg.half_width > 0.0)) fatal("grid.half_width", "half_width must be positive");
  if (!(cfg.m >= 1.0)) fatal("entropy.exponent", "m must satisfy m >= 1");
  if (!(cfg.k > 0.0)) fatal("entropy.coefficient", "k must be positive");
  if (cfg.c_k < 0.0) fatal("interaction.strength", "c_k must be nonnegative");
  for (double eps : cfg.epsilons)
    if (!(eps > 0.0)) fatal("positivity.epsilon", "epsilon must be positive");
  if (cfg.epsilons.empty()) fatal("positivity.epsilon", "no epsilon given");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fatal("cfl.range", "cfl must lie in (0, 1]");
  if (!(cfg.t_end >= 0.0)) fatal("solver.t_end", "t_end must be nonnegative");
  if (cfg.snapshot_stride < 1) fatal("solver.snapshot_stride", "stride must be >= 1");
  if (!(cfg.rho_floor > 0.0)) fatal("solver.rho_floor", "rho_floor must be positive");
  if (cfg.limit_snapshots < 1) fatal("solver.limit_snapshots", "needs >= 1");
  if (!(cfg.initial_baseline > 0.0))
    fatal("initial.baseline", "baseline density must be positive");
  if (cfg.initial_kind != InitialKind::Uniform &&
      cfg.initial_baseline - std::fabs(cfg.initial_amplitude) <= 0.0)
    warn("initial.positivity",
         "baseline - |amplitude| <= 0: the initial density may touch zero");

  // pressure-exponent restriction behind the interaction-energy bound
  if (cfg.dim >= 2 && cfg.m < 2.0 - 2.0 / cfg.dim)
    warn("restrict-m",
         "m = " + std::to_string(cfg.m) + " < 2 - 2/d = " +
             std::to_string(2.0 - 2.0 / cfg.dim) +
             ": the interaction-energy bound may fail in d = " +
             std::to_string(cfg.dim));

  // coercivity advisory (computable for the tail-free quadratic law)
  if (cfg.m == 2.0 && cfg.c_k > 0.0 &&
      cfg.interaction.kind != PotentialKind::Zero && cfg.dim <= 3 && cfg.n <= 512) {
    try {
      const PeriodicGrid g = PeriodicGrid::make(cfg.dim, cfg.n, cfg.half_width);
      const ScalarField kf = cfg.interaction.sample_kernel(g);
      double l1 = 0.0, w = 1.0;
      for (int a = 0; a < g.dim; ++a) w *= g.dx;
      for (double v : kf.values) l1 += std::fabs(v);
      l1 *= w;
      if (l1 > 0.0 && cfg.c_k >= 2.0 * cfg.k / l1)
        warn("coercivity.smallness",
             "c_k >= 2k/||K||_1 = " + std::to_string(2.0 * cfg.k / l1) +
                 ": the modulated energy may lose coercivity");
    } catch (const std::exception&) {
      // grid construction failures are reported by the grid rules
    }
  }
}

}  // namespace

std::vector<Violation> LoadResult::warnings() const {
  std::vector<Violation> out;
  for (const auto& v : violations)
    if (!v.fatal) out.push_back(v);
  return out;
}

LoadResult parse_config(const std::string& text) {
  LoadResult result;
  SectionMap map;
  if (!parse_sections(text, map, result.violations)) return result;

  Reader r(map, result.violations);
  RunConfig cfg;
  cfg.schema = static_cast<int>(r.integer("", "schema", 1));
  if (cfg.schema != 1) {
    result.violations.push_back(
        {"schema", "unsupported schema version " + std::to_string(cfg.schema), true});
    return result;
  }
  cfg.scenario = r.str("run", "scenario", cfg.scenario);

  cfg.dim = static_cast<int>(r.integer("grid", "dim", cfg.dim));
  cfg.n = static_cast<int>(r.integer("grid", "n", cfg.n));
  cfg.half_width = r.num("grid", "half_width", cfg.half_width);

  cfg.m = r.num("entropy", "m", cfg.m);
  cfg.k = r.num("entropy", "k", cfg.k);

  cfg.interaction = read_potential(r, "interaction", result.violations);
  cfg.c_k = r.num("interaction", "c_k", cfg.c_k);
  cfg.confinement = read_potential(r, "confinement", result.violations);

  const std::string ik = r.str("initial", "kind", "gaussian");
  if (ik == "uniform")
    cfg.initial_kind = InitialKind::Uniform;
  else if (ik == "gaussian")
    cfg.initial_kind = InitialKind::GaussianBump;
  else if (ik == "cosine")
    cfg.initial_kind = InitialKind::CosineBump;
  else
    result.violations.push_back(
        {"initial.kind", "unknown kind `" + ik + "` (uniform | gaussian | cosine)",
         true});
  cfg.initial_baseline = r.num("initial", "baseline", cfg.initial_baseline);
  cfg.initial_amplitude = r.num("initial", "amplitude", cfg.initial_amplitude);
  cfg.initial_width = r.num("initial", "width", cfg.initial_width);
  {
    const auto list = r.num_list("initial", "modes");
    for (std::size_t i = 0; i < list.size() && i < 3; ++i)
      cfg.initial_modes[i] = static_cast<int>(list[i]);
  }
  const std::string vi = r.str("initial", "velocity", "well-prepared");
  if (vi == "zero")
    cfg.velocity_init = VelocityInit::Zero;
  else if (vi == "well-prepared")
    cfg.velocity_init = VelocityInit::WellPrepared;
  else
    result.violations.push_back(
        {"initial.velocity", "unknown velocity `" + vi + "` (zero | well-prepared)",
         true});

  if (r.has("solver", "epsilon_list"))
    cfg.epsilons = r.num_list("solver", "epsilon_list");
  else
    cfg.epsilons = {r.num("solver", "epsilon", 0.1)};
  cfg.cfl = r.num("solver", "cfl", cfg.cfl);
  cfg.t_end = r.num("solver", "t_end", cfg.t_end);
  cfg.snapshot_stride =
      static_cast<int>(r.integer("solver", "snapshot_stride", cfg.snapshot_stride));
  cfg.rho_floor = r.num("solver", "rho_floor", cfg.rho_floor);
  cfg.limit_snapshots =
      static_cast<int>(r.integer("solver", "limit_snapshots", cfg.limit_snapshots));

  cfg.output_directory = r.str("output", "directory", cfg.output_directory);
  const std::string fmt = r.str("output", "format", "csv");
  if (fmt == "csv")
    cfg.snapshot_format = SnapshotFormat::Csv;
  else if (fmt == "binary")
    cfg.snapshot_format = SnapshotFormat::Binary;
  else
    result.violations.push_back(
        {"output.format", "unknown format `" + fmt + "` (csv | binary)", true});

  cfg.seed = static_cast<unsigned long long>(r.integer("random", "seed", 42));

  validate(cfg, result.violations);
  for (const auto& v : result.violations)
    if (v.fatal) return result;
  result.config = cfg;
  return result;
}

LoadResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    LoadResult r;
    r.violations.push_back({"io", "cannot open config file: " + path, true});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_potential(std::ostringstream& out, const std::string& sec,
                     const PotentialSpec& p) {
  out << "[" << sec << "]\n";
  out << "kind = " << p.kind_name() << "\n";
  if (p.kind == PotentialKind::Zero) return;
  out << "amplitude = " << fmt_num(p.amplitude) << "\n";
  if (p.kind == PotentialKind::WrappedGaussian)
    out << "width = " << fmt_num(p.width) << "\n";
  if (p.kind == PotentialKind::CosineMode)
    out << "modes = " << p.modes[0] << " " << p.modes[1] << " " << p.modes[2]
        << "\n";
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "schema = " << cfg.schema << "\n\n";
  out << "[run]\nscenario = " << cfg.scenario << "\n\n";
  out << "[grid]\ndim = " << cfg.dim << "\nn = " << cfg.n
      << "\nhalf_width = " << fmt_num(cfg.half_width) << "\n\n";
  out << serialize_entropy_law(cfg.law()) << "\n";
  write_potential(out, "interaction", cfg.interaction);
  out << "c_k = " << fmt_num(cfg.c_k) << "\n\n";
  write_potential(out, "confinement", cfg.confinement);
  out << "\n[initial]\nkind = "
      << (cfg.initial_kind == InitialKind::Uniform
              ? "uniform"
              : cfg.initial_kind == InitialKind::GaussianBump ? "gaussian"
                                                              : "cosine")
      << "\nbaseline = " << fmt_num(cfg.initial_baseline)
      << "\namplitude = " << fmt_num(cfg.initial_amplitude)
      << "\nwidth = " << fmt_num(cfg.initial_width) << "\nmodes = "
      << cfg.initial_modes[0] << " " << cfg.initial_modes[1] << " "
      << cfg.initial_modes[2] << "\nvelocity = "
      << (cfg.velocity_init == VelocityInit::Zero ? "zero" : "well-prepared")
      << "\n\n";
  out << "[solver]\n";
  if (cfg.epsilons.size() == 1)
    out << "epsilon = " << fmt_num(cfg.epsilons[0]) << "\n";
  else {
    out << "epsilon_list =";
    for (double e : cfg.epsilons) out << " " << fmt_num(e);
    out << "\n";
  }
  out << "cfl = " << fmt_num(cfg.cfl) << "\nt_end = " << fmt_num(cfg.t_end)
      << "\nsnapshot_stride = " << cfg.snapshot_stride
      << "\nrho_floor = " << fmt_num(cfg.rho_floor)
      << "\nlimit_snapshots = " << cfg.limit_snapshots << "\n\n";
  out << "[output]\ndirectory = " << cfg.output_directory << "\nformat = "
      << (cfg.snapshot_format == SnapshotFormat::Csv ? "csv" : "binary")
      << "\n\n";
  out << "[random]\nseed = " << cfg.seed << "\n";
  return out.str();
}

std::string serialize_entropy_law(const EntropyLaw& law) {
  std::ostringstream out;
  out << "[entropy]\nm = " << fmt_num(law.exponent())
      << "\nk = " << fmt_num(law.coefficient()) << "\n";
  return out.str();
}

EntropyLaw parse_entropy_law(const std::string& section_text) {
  SectionMap map;
  std::vector<Violation> violations;
  if (!parse_sections(section_text, map, violations))
    throw std::invalid_argument("entropy section: " + violations.front().message);
  Reader r(map, violations);
  const double m = r.num("entropy", "m", 2.0);
  const double k = r.num("entropy", "k", 1.0);
  if (!violations.empty())
    throw std::invalid_argument("entropy section: " + violations.front().message);
  return EntropyLaw::power_law(m, k);
}

}  // namespace relaxhydro
