#include "oscent/cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "oscent/closedform.hpp"
#include "oscent/error.hpp"
#include "oscent/fockspace.hpp"
#include "oscent/thermal.hpp"
#include "oscent/visibility.hpp"

namespace oscent::cli {

void Range::validate(const char* what) const {
  const std::string name = what;
  if (!std::isfinite(first) || !std::isfinite(last)) throw InvalidArgument(name + " range must be finite");
  if (first > last) throw InvalidArgument(name + " range must be ascending");
  if (points < 1) throw InvalidArgument(name + " range needs at least one point");
  if (points == 1 && first != last) throw InvalidArgument(name + " range with distinct ends needs two points");
  if (log && !(first > 0.0)) throw InvalidArgument(name + " log range must be positive");
}

std::vector<double> Range::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    if (log) {
      out[static_cast<std::size_t>(i)] = std::exp(std::log(first) + t * (std::log(last) - std::log(first)));
    } else {
      out[static_cast<std::size_t>(i)] = first + t * (last - first);
    }
  }
  out.front() = first;
  out.back() = last;
  return out;
}

Range parse_range(const std::string& text, std::int64_t default_points) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  for (std::string part; std::getline(stream, part, ':');) parts.push_back(part);
  if (parts.size() < 2 || parts.size() > 3) throw InvalidArgument("range '" + text + "' is not of the form a:b[:n]");
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument("range '" + text + "' has a malformed number");
    return value;
  };
  Range range;
  range.first = number(parts[0]);
  range.last = number(parts[1]);
  if (parts.size() == 3) {
    const double n = number(parts[2]);
    if (n != std::floor(n) || n < 1) throw InvalidArgument("range '" + text + "' needs a positive integer count");
    range.points = static_cast<std::int64_t>(n);
  } else if (default_points > 0) {
    range.points = default_points;
  } else {
    const double span = range.last - range.first;
    if (span != std::floor(span)) throw InvalidArgument("range '" + text + "' does not split into unit steps");
    range.points = static_cast<std::int64_t>(span) + 1;
  }
  return range;
}

double CommandSpec::resolved_coupling_ratio() const {
  if (physical) return oscent::coupling_ratio(*physical);
  return coupling_ratio;
}

void CommandSpec::validate() const {
  if (physical) physical->validate();
  const double r = resolved_coupling_ratio();
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("coupling ratio must be finite and nonnegative");
  if (command == "bipartite-visibility") {
    if (!(r_min > 0.0) || !(r_max >= r_min) || !std::isfinite(r_max)) {
      throw InvalidArgument("need 0 < r-min <= r-max");
    }
    Range{r_min, r_max, points, true}.validate("R");
  } else if (command == "spectrum") {
    if (n_particles < 1) throw InvalidArgument("particle number must be at least 1");
    if (levels < 1) throw InvalidArgument("level count must be positive");
    if (blocks < 0 || (blocks > 0 && n_particles % blocks != 0)) {
      throw InvalidArgument("block count must divide the particle number");
    }
  } else if (command == "wavefunction-grid") {
    if (kind != "standard" && kind != "separable") throw InvalidArgument("kind must be standard or separable");
    if (quanta.size() != 2 || quanta[0] < 0 || quanta[1] < 0) {
      throw InvalidArgument("wavefunction needs two nonnegative quantum numbers");
    }
    Range{x_min, x_max, grid_points, false}.validate("coordinate");
  } else if (command == "visibility-vs-n") {
    if (n_min < 1 || n_max < n_min) throw InvalidArgument("need 1 <= n-min <= n-max");
  } else if (command == "partition-scan") {
    if (n_particles < 1) throw InvalidArgument("particle number must be at least 1");
  } else if (command == "mean-n-visibility") {
    mean_n.validate("mean particle number");
    if (mean_n.first < 0.0) throw InvalidArgument("mean particle number must be nonnegative");
  } else if (command == "thermal-grid") {
    mean_n.validate("mean particle number");
    temperature.validate("temperature");
    if (mean_n.first < 0.0) throw InvalidArgument("mean particle number must be nonnegative");
    if (!(temperature.first > 0.0)) throw InvalidArgument("temperatures must be positive");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (threads < 1) throw InvalidArgument("thread count must be positive");
  } else if (command == "verify") {
    if (verify.max_basis_dim < 2 || verify.max_rows < 4) throw InvalidArgument("basis limits too small");
  } else {
    throw InvalidArgument("unknown command '" + command + "'");
  }
}

namespace {

Table bipartite_visibility_table(const CommandSpec& spec) {
  Table table{{"R", "V_max"}, {}};
  for (double r : Range{spec.r_min, spec.r_max, spec.points, true}.values()) {
    table.add_row({r, max_visibility(EnsembleSpec(2, r)).visibility});
  }
  return table;
}

Table spectrum_table(const CommandSpec& spec) {
  const EnsembleSpec ensemble(spec.n_particles, spec.resolved_coupling_ratio());
  Table table{{"kind", "level", "E [u_E]"}, {}};
  std::optional<UnitSystem> units;
  if (spec.physical) {
    units = natural_units(*spec.physical);
    table.columns.push_back("E [J]");
  }
  const std::int64_t k = spec.blocks == 0 ? spec.n_particles : spec.blocks;
  for (const auto& partition : {Partition::trivial(spec.n_particles), Partition::equal_blocks(spec.n_particles, k)}) {
    const auto levels = enumerate_levels(ensemble, partition, spec.levels);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::vector<Cell> row{std::string(to_string(levels[i].kind)), static_cast<std::int64_t>(i), levels[i].value};
      if (units) row.emplace_back(levels[i].value * units->energy);
      table.add_row(std::move(row));
    }
  }
  return table;
}

Table wavefunction_table(const CommandSpec& spec) {
  const EnsembleSpec ensemble(2, spec.resolved_coupling_ratio());
  const bool standard = spec.kind == "standard";
  WavefunctionQuery query{standard ? Partition::trivial(2) : Partition::full(2), {}, {}, spec.normalized};
  if (standard) {
    query.label.blocks = {BlockExcitation{spec.quanta[0], {spec.quanta[1]}}};
  } else {
    query.label.blocks = {BlockExcitation{spec.quanta[0], {}}, BlockExcitation{spec.quanta[1], {}}};
  }
  const auto axis = Range{spec.x_min, spec.x_max, spec.grid_points, false}.values();
  for (double x1 : axis) {
    for (double x2 : axis) query.points.push_back({x1, x2});
  }
  const auto values = wavefunction_eval(query, ensemble);
  Table table{{"x1 [u_x]", "x2 [u_x]", "psi"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    table.add_row({query.points[i][0], query.points[i][1], values[i]});
  }
  return table;
}

Table visibility_vs_n_table(const CommandSpec& spec) {
  const double r = spec.resolved_coupling_ratio();
  double n_opt = std::numeric_limits<double>::infinity();
  if (r > 0.0) n_opt = optimal_particle_number(r);
  Table table{{"N", "V_max", "N_opt", "opt_neighbor"}, {}};
  for (std::int64_t n = spec.n_min; n <= spec.n_max; ++n) {
    const auto nd = static_cast<double>(n);
    const bool neighbor = std::isfinite(n_opt) && (nd == std::floor(n_opt) || nd == std::ceil(n_opt));
    table.add_row({n, max_visibility(EnsembleSpec(n, r)).visibility, n_opt, static_cast<std::int64_t>(neighbor)});
  }
  return table;
}

Table partition_scan_table(const CommandSpec& spec) {
  const EnsembleSpec ensemble(spec.n_particles, spec.resolved_coupling_ratio());
  const double ground = ground_energy(ensemble);
  Table table{{"K", "block_size", "E_ground [u_E]", "E_sep [u_E]", "V"}, {}};
  for (std::int64_t k = 1; k <= spec.n_particles; ++k) {
    if (spec.n_particles % k != 0) continue;
    const std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), spec.n_particles / k);
    const auto report = partition_visibility(ensemble, sizes);
    table.add_row({k, spec.n_particles / k, ground, report.separable_bound, report.visibility});
  }
  return table;
}

Table mean_n_table(const CommandSpec& spec) {
  const double r = spec.resolved_coupling_ratio();
  Table table{{"Nbar", "E_ground [u_E]", "E_sep [u_E]", "V"}, {}};
  for (double mean : spec.mean_n.values()) {
    const auto report = mean_n_visibility(r, mean);
    table.add_row({mean, report.expectation, report.separable_bound, report.visibility});
  }
  return table;
}

Table thermal_table(const CommandSpec& spec) {
  const double r = spec.resolved_coupling_ratio();
  const auto means = spec.mean_n.values();
  const auto temps = spec.temperature.values();
  const auto points = thermal_grid(r, means, temps, spec.tolerance, spec.threads);
  Table table{{"Nbar", "T [u_T]", "alpha", "<N>", "<H> [u_E]", "V"}, {}};
  std::optional<UnitSystem> units;
  if (spec.physical) {
    units = natural_units(*spec.physical);
    table.columns.push_back("T [K]");
    table.columns.push_back("<H> [J]");
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t j = 0; j < temps.size(); ++j) {
      const auto& p = points[i * temps.size() + j];
      std::vector<Cell> row{means[i], p.temperature, p.alpha, p.mean_n, p.mean_energy, p.visibility};
      if (units) {
        row.emplace_back(p.temperature * units->temperature);
        row.emplace_back(p.mean_energy * units->energy);
      }
      table.add_row(std::move(row));
    }
  }
  return table;
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::json) {
    write_json(table, out);
  } else {
    write_csv(table, out);
  }
}

}  // namespace

Table build_table(const CommandSpec& spec) {
  spec.validate();
  if (spec.command == "bipartite-visibility") return bipartite_visibility_table(spec);
  if (spec.command == "spectrum") return spectrum_table(spec);
  if (spec.command == "wavefunction-grid") return wavefunction_table(spec);
  if (spec.command == "visibility-vs-n") return visibility_vs_n_table(spec);
  if (spec.command == "partition-scan") return partition_scan_table(spec);
  if (spec.command == "mean-n-visibility") return mean_n_table(spec);
  if (spec.command == "thermal-grid") return thermal_table(spec);
  throw InvalidArgument("command '" + spec.command + "' does not produce a data table");
}

Table verification_table(const std::vector<VerificationCheck>& checks) {
  Table table{{"check", "expected", "computed", "tolerance", "mode", "status"}, {}};
  for (const auto& check : checks) {
    table.add_row({check.name, check.expected, check.computed, check.tolerance,
                   std::string(check.relative ? "relative" : "absolute"), std::string(check.passed ? "ok" : "MISMATCH")});
  }
  return table;
}

int execute(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    Table table;
    bool mismatch = false;
    if (spec.command == "verify") {
      spec.validate();
      const auto checks = run_verification_suite(spec.verify);
      table = verification_table(checks);
      for (const auto& check : checks) {
        if (!check.passed) {
          mismatch = true;
          err << "verification mismatch: " << check.name << ": expected " << format_number(check.expected)
              << ", computed " << format_number(check.computed) << '\n';
        }
      }
    } else {
      table = build_table(spec);
    }
    std::ostringstream buffer;
    write_table(table, spec.format, buffer);
    if (spec.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(spec.output, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open output file '" + spec.output + "'");
      file << buffer.str();
      if (!file.flush()) throw InvalidArgument("failed writing output file '" + spec.output + "'");
    }
    return mismatch ? kVerificationMismatch : kSuccess;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const DivergentOptimum& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

namespace {

unsigned threads_from_environment() {
  const char* value = std::getenv("OSCENT_THREADS");
  if (value == nullptr || *value == '\0') return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long parsed = std::strtol(value, &end, 10);
  if (*end != '\0' || parsed < 1 || parsed > 1024) throw InvalidArgument("OSCENT_THREADS must be a positive integer");
  return static_cast<unsigned>(parsed);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandSpec spec;
  std::string format = "csv";
  std::string nbar_text, t_text;
  bool log_t = false;
  double mass = 0.0, omega = 0.0, kappa = 0.0;

  CLI::App app{"Entanglement witnesses and visibility for pairwise-coupled harmonic oscillators", "oscent"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", spec.output, "Output file (default: standard output)");

  auto add_ratio = [&](CLI::App* sub) { return sub->add_option("--r", spec.coupling_ratio, "Coupling ratio R"); };
  auto add_physical = [&](CLI::App* sub) {
    auto* m = sub->add_option("--mass", mass, "Particle mass [kg]");
    auto* w = sub->add_option("--omega", omega, "Trap angular frequency [rad/s]");
    auto* k = sub->add_option("--kappa", kappa, "Coupling constant [N/m]");
    m->needs(w)->needs(k);
    w->needs(m)->needs(k);
    k->needs(m)->needs(w);
    return m;
  };

  auto* bipartite = app.add_subcommand("bipartite-visibility", "Maximal visibility of two particles against R");
  bipartite->add_option("--r-min", spec.r_min, "Smallest R");
  bipartite->add_option("--r-max", spec.r_max, "Largest R");
  bipartite->add_option("--points", spec.points, "Number of log-spaced R values");

  auto* spectrum = app.add_subcommand("spectrum", "Lowest standard and partition-separable energy levels");
  auto* spectrum_r = add_ratio(spectrum);
  spectrum->add_option("--n", spec.n_particles, "Particle number");
  spectrum->add_option("--levels", spec.levels, "Levels per kind, with degeneracy");
  spectrum->add_option("--blocks", spec.blocks, "Number of equal blocks (default: one per particle)");
  auto* spectrum_mass = add_physical(spectrum);
  spectrum_r->excludes(spectrum_mass);

  auto* wave = app.add_subcommand("wavefunction-grid", "Two-particle wavefunction on a square grid");
  add_ratio(wave);
  wave->add_option("--kind", spec.kind, "standard or separable")->check(CLI::IsMember({"standard", "separable"}));
  wave->add_option("--quanta", spec.quanta,
                   "Quantum numbers: (parallel, relative) for standard, (particle 1, particle 2) for separable")
      ->expected(2)
      ->delimiter(',');
  wave->add_option("--x-min", spec.x_min, "Grid start [u_x]");
  wave->add_option("--x-max", spec.x_max, "Grid end [u_x]");
  wave->add_option("--points", spec.grid_points, "Grid points per axis");
  wave->add_flag("--normalized", spec.normalized, "Include the normalization constant");

  auto* vs_n = app.add_subcommand("visibility-vs-n", "Maximal visibility against particle number");
  add_ratio(vs_n);
  vs_n->add_option("--n-min", spec.n_min, "Smallest N");
  vs_n->add_option("--n-max", spec.n_max, "Largest N");

  auto* scan = app.add_subcommand("partition-scan", "Visibility for every equal-block partition");
  add_ratio(scan);
  scan->add_option("--n", spec.n_particles, "Particle number");

  auto* mean_n = app.add_subcommand("mean-n-visibility", "Fock-space visibility at real mean particle number");
  add_ratio(mean_n);
  mean_n->add_option("--nbar", nbar_text, "Mean particle numbers a:b[:n] (default 0:5:501)");

  auto* thermal = app.add_subcommand("thermal-grid", "Thermal-state visibility over mean N and temperature");
  auto* thermal_r = add_ratio(thermal);
  thermal->add_option("--nbar", nbar_text, "Mean particle numbers a:b[:n] (default 1:100, unit steps)");
  thermal->add_option("--t", t_text, "Temperatures a:b[:n] in u_T (default 0.01:100:100)");
  thermal->add_flag("--log", log_t, "Log-spaced temperatures");
  thermal->add_option("--tol", spec.tolerance, "Series truncation tolerance");
  auto* thermal_mass = add_physical(thermal);
  thermal_r->excludes(thermal_mass);

  auto* verify = app.add_subcommand("verify", "Oracle suite against the closed forms");
  verify->add_option("--basis-dim", spec.verify.max_basis_dim, "Largest per-particle basis size");
  verify->add_option("--max-rows", spec.verify.max_rows, "Largest matrix dimension");
  verify->add_flag("--quick", spec.verify.quick, "Only N = 2, 3 at R = 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kParameterError;
  }

  try {
    spec.command = app.get_subcommands().front()->get_name();
    spec.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (mass != 0.0 || omega != 0.0 || kappa != 0.0) {
      PhysicalParams params;
      params.mass = mass;
      params.trap_frequency = omega;
      params.coupling_constant = kappa;
      spec.physical = params;
    }
    if (spec.command == "mean-n-visibility") {
      spec.mean_n = parse_range(nbar_text.empty() ? "0:5:501" : nbar_text, 0);
    }
    if (spec.command == "thermal-grid") {
      spec.mean_n = parse_range(nbar_text.empty() ? "1:100" : nbar_text, 0);
      spec.temperature = parse_range(t_text.empty() ? "0.01:100:100" : t_text, 100);
      spec.temperature.log = log_t;
      spec.threads = threads_from_environment();
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kParameterError;
  }
  return execute(spec, out, err);
}

}  // namespace oscent::cli
