#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oscent/cli/commands.hpp"
#include "oscent/closedform.hpp"
#include "oscent/fockspace.hpp"
#include "oscent/thermal.hpp"
#include "oscent/visibility.hpp"

using namespace oscent;
using namespace oscent::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "oscent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream stream(text);
  for (std::string line; std::getline(stream, line);) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting and CSV quoting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(6.02214076e23) == "6.02214076e+23");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");

  Table t{{"name", "E [u_E]"}, {}};
  t.add_row({std::string("a,b"), 1.5});
  t.add_row({std::string("say \"hi\""), std::int64_t{7}});
  std::ostringstream out;
  write_csv(t, out);
  CHECK(out.str() == "name,E [u_E]\n\"a,b\",1.5\n\"say \"\"hi\"\"\",7\n");
  const auto parsed = parse_csv(out.str());
  CHECK(parsed[1][0] == "a,b");
  CHECK(parsed[2][0] == "say \"hi\"");
  CHECK_THROWS(t.add_row({1.0}));

  std::ostringstream json;
  Table numbers{{"x", "y"}, {}};
  numbers.add_row({0.1 + 0.2, NAN});
  write_json(numbers, json);
  const auto records = nlohmann::json::parse(json.str());
  CHECK(records[0]["x"].get<double>() == 0.3);
  CHECK(records[0]["y"].is_null());
}

TEST_CASE("range parsing") {
  const auto unit = parse_range("1:100", 0);
  CHECK(unit.points == 100);
  CHECK(unit.values()[41] == 42.0);
  const auto counted = parse_range("0.01:100:5", 100);
  CHECK(counted.points == 5);
  auto logged = parse_range("0.01:100", 5);
  logged.log = true;
  const auto v = logged.values();
  CHECK(v.front() == 0.01);
  CHECK(v[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.back() == 100.0);
  CHECK_THROWS(parse_range("1", 0));
  CHECK_THROWS(parse_range("1:x", 0));
  CHECK_THROWS(parse_range("0:2.5", 0));
  CHECK_THROWS(parse_range("0:1:0", 0));
  CHECK_THROWS(parse_range("0:1:2.5", 0));
}

TEST_CASE("bipartite-visibility matches the library") {
  const auto r = invoke({"bipartite-visibility", "--r-min", "1e-3", "--r-max", "1e3", "--points", "200"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == std::vector<std::string>{"R", "V_max"});
  const auto ratios = Range{1e-3, 1e3, 200, true}.values();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ratio = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i - 1) / 199.0);
    CHECK(std::stod(rows[i][0]) == doctest::Approx(ratio).epsilon(1e-11));
    CHECK(rows[i][0] == format_number(ratios[i - 1]));
    CHECK(rows[i][1] == format_number(max_visibility(EnsembleSpec(2, ratios[i - 1])).visibility));
  }
  CHECK(std::stod(rows[1][1]) < 1e-6);
  CHECK(std::stod(rows.back()[1]) > 0.9 * (3.0 - 2.0 * std::sqrt(2.0)));
  CHECK(std::stod(rows.back()[1]) < 3.0 - 2.0 * std::sqrt(2.0));
}

TEST_CASE("visibility-vs-n peaks at the optimum") {
  const auto r = invoke({"visibility-vs-n", "--r", "1", "--n-max", "1000"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1001);
  CHECK(rows[0] == std::vector<std::string>{"N", "V_max", "N_opt", "opt_neighbor"});
  std::size_t best = 1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][0] == std::to_string(i));
    CHECK(rows[i][1] == format_number(max_visibility(EnsembleSpec(static_cast<std::int64_t>(i), 1.0)).visibility));
    CHECK(rows[i][2] == "3");
    CHECK(rows[i][3] == (i == 3 ? "1" : "0"));
    if (std::stod(rows[i][1]) > std::stod(rows[best][1])) best = i;
  }
  CHECK(best == 3);

  const auto free = parse_csv(invoke({"visibility-vs-n", "--r", "0", "--n-max", "3"}).out);
  CHECK(free[1][2] == "inf");
}

TEST_CASE("spectrum matches the library") {
  const auto r = invoke({"spectrum", "--n", "4", "--r", "1.5", "--levels", "6", "--blocks", "2"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 13);
  const EnsembleSpec spec(4, 1.5);
  const auto standard = enumerate_levels(spec, Partition::trivial(4), 6);
  const auto blocks = enumerate_levels(spec, Partition::equal_blocks(4, 2), 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(rows[1 + i][0] == "standard");
    CHECK(rows[1 + i][2] == format_number(standard[i].value));
    CHECK(rows[7 + i][0] == "partition-separable");
    CHECK(rows[7 + i][2] == format_number(blocks[i].value));
  }

  const double m = 1e-25, omega = 1e5, kappa = 1.5 * m * omega * omega;
  const auto si = invoke({"spectrum", "--mass", "1e-25", "--omega", "1e5", "--kappa", format_number(kappa), "--levels",
                          "1"});
  REQUIRE(si.code == 0);
  const auto si_rows = parse_csv(si.out);
  CHECK(si_rows[0].back() == "E [J]");
  CHECK(std::stod(si_rows[1][2]) == doctest::Approx(1.5).epsilon(1e-11));
  CHECK(std::stod(si_rows[1][3]) == doctest::Approx(1.5 * kReducedPlanck * omega).epsilon(1e-11));
  CHECK(invoke({"spectrum", "--mass", "1e-25"}).code == 1);
  CHECK(invoke({"spectrum", "--r", "1", "--mass", "1e-25", "--omega", "1", "--kappa", "1"}).code == 1);
}

TEST_CASE("wavefunction-grid matches the library") {
  const auto r = invoke({"wavefunction-grid", "--r", "1.5", "--kind", "separable", "--quanta", "1,2", "--points", "9",
                         "--normalized"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 82);
  const auto full = Partition::full(2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x1 = std::stod(rows[i][0]), x2 = std::stod(rows[i][1]);
    WavefunctionQuery q{full, ExcitationLabel{{BlockExcitation{1, {}}, BlockExcitation{2, {}}}}, {{x1, x2}}, true};
    CHECK(rows[i][2] == format_number(wavefunction_eval(q, EnsembleSpec(2, 1.5)).front()));
  }
  CHECK(invoke({"wavefunction-grid", "--kind", "other"}).code == 1);
  CHECK(invoke({"wavefunction-grid", "--quanta", "1,-1"}).code == 1);
}

TEST_CASE("partition-scan matches the library") {
  const auto r = invoke({"partition-scan", "--n", "1024", "--r", "1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 12);
  const EnsembleSpec spec(1024, 1.0);
  double previous = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto k = std::stoll(rows[i][0]);
    CHECK(k == (std::int64_t{1} << (i - 1)));
    const double v = partition_visibility(spec, Partition::equal_blocks(1024, k)).visibility;
    CHECK(rows[i][4] == format_number(v));
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("mean-n-visibility matches the library") {
  const auto r = invoke({"mean-n-visibility", "--r", "10", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto records = nlohmann::json::parse(r.out);
  REQUIRE(records.size() == 501);
  const auto means = Range{0.0, 5.0, 501, false}.values();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const double nbar = means[i];
    CHECK(rec["Nbar"].get<double>() == std::stod(format_number(nbar)));
    const auto report = mean_n_visibility(10.0, nbar);
    CHECK(rec["V"].get<double>() == std::stod(format_number(report.visibility)));
    CHECK(rec["E_sep [u_E]"].get<double>() == std::stod(format_number(report.separable_bound)));
  }
  CHECK(invoke({"mean-n-visibility", "--nbar", "-1:2"}).code == 1);
}

TEST_CASE("thermal-grid matches the library") {
  const auto r = invoke({"thermal-grid", "--r", "1", "--nbar", "1:100:12", "--t", "0.01:100:15", "--log"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 12 * 15);
  CHECK(rows[0] == std::vector<std::string>{"Nbar", "T [u_T]", "alpha", "<N>", "<H> [u_E]", "V"});
  const auto means = Range{1.0, 100.0, 12, false}.values();
  const auto temps = Range{0.01, 100.0, 15, true}.values();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double nbar = means[(i - 1) / 15], t = temps[(i - 1) % 15];
    CHECK(rows[i][0] == format_number(nbar));
    CHECK(rows[i][1] == format_number(t));
    const auto p = thermal_visibility(1.0, t, nbar);
    CHECK(rows[i][5] == format_number(p.visibility));
    CHECK(rows[i][4] == format_number(p.mean_energy));
    // Every column ends in the undetectable region at the hottest point.
    if ((i - 1) % 15 == 14) CHECK(p.visibility <= 0.0);
  }
}

TEST_CASE("thermal-grid thread count does not change output") {
  const std::vector<std::string> args{"thermal-grid", "--r", "2", "--nbar", "1:9:5", "--t", "0.05:20:7", "--log"};
  setenv("OSCENT_THREADS", "1", 1);
  const auto one = invoke(args);
  setenv("OSCENT_THREADS", "4", 1);
  const auto four = invoke(args);
  CHECK(one.code == 0);
  CHECK(one.out == four.out);
  setenv("OSCENT_THREADS", "zero", 1);
  CHECK(invoke(args).code == 1);
  unsetenv("OSCENT_THREADS");
}

TEST_CASE("output file and determinism") {
  const std::string path = "oscent_cli_test_output.csv";
  const auto first = invoke({"--output", path, "partition-scan", "--n", "12"});
  REQUIRE(first.code == 0);
  CHECK(first.out.empty());
  std::ifstream file(path, std::ios::binary);
  const std::string contents((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  CHECK(contents == invoke({"partition-scan", "--n", "12"}).out);
  CHECK(contents == invoke({"partition-scan", "--n", "12", "--output", path}).out + contents);
  std::remove(path.c_str());
  CHECK(invoke({"partition-scan", "--output", "/nonexistent-dir/x.csv"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"no-such-command"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"bipartite-visibility", "--r-min", "0"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "4", "--blocks", "3"}).code == 1);
  CHECK(invoke({"visibility-vs-n", "--r", "-1"}).code == 1);
  CHECK(invoke({"--format", "xml", "partition-scan"}).code == 1);
  const auto failure = invoke({"thermal-grid", "--nbar", "1:1:1", "--t", "1e-300:1e-300:1"});
  CHECK(failure.code == 2);
  CHECK_FALSE(failure.err.empty());
}

TEST_CASE("verify runs the oracle suite") {
  const auto r = invoke({"verify", "--quick"});
  CHECK(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() > 10);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == "ok");

  // A basis too small to resolve the ground energy must be reported.
  const auto coarse = invoke({"verify", "--quick", "--basis-dim", "3"});
  CHECK(coarse.code == 3);
  CHECK(coarse.err.find("verification mismatch") != std::string::npos);
}
