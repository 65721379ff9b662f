#include "helpers.hpp"

#include "jetex/cli/commands.hpp"
#include "jetex/cli/parallel.hpp"
#include "jetex/errors.hpp"
#include "jetex/jet_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace jetex;
using namespace jetex::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jetex");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "jetex_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p.string();
}

const char* kAbsJet = R"({"dimension": 1, "norm": "euclidean",
  "points": [{"x": [-1], "f": 1, "g": [-1]}, {"x": [1], "f": 1, "g": [1]}]})";
const char* kStepJet = R"({"dimension": 1,
  "points": [{"x": [0], "f": 0, "g": [0]}, {"x": [1], "f": 1, "g": [0]}]})";
const char* kBadJet = R"({"dimension": 1,
  "points": [{"x": [0], "f": 0, "g": [0]}, {"x": [1], "f": -1, "g": [0]}]})";
const char* kOneJet = R"({"dimension": 1, "points": [{"x": [0], "f": 0, "g": [0]}]})";
const char* kOne2d = R"({"dimension": 2, "points": [{"x": [0, 0], "f": 0, "g": [0, 0]}]})";

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("class names") {
    CHECK(cli::parse_class("w11") == ExtensionClass::C11);
    CHECK(cli::parse_class("C11_CONV") == ExtensionClass::C11Conv);
    CHECK(cli::parse_class("cw1omega") == ExtensionClass::C1OmegaConv);
    CHECK(cli::parse_class("c1alpha_conv_lp") == ExtensionClass::C1AlphaConvLp);
    CHECK_THROWS_AS(cli::parse_class("c2"), ParseError);
  }

  TEST_CASE("jet file parsing") {
    const RawJet r = parse_jet_json(R"({"dimension": 2, "norm": {"kind": "lp", "p": 1.5, "C": 2.5},
      "points": [{"x": [1, 2], "f": 3, "g": [4, 5]}]})");
    CHECK(r.norm.kind == NormKind::Lp);
    CHECK(r.norm.smoothness == 2.5);
    CHECK(r.points[0].g[1] == 5);
    CHECK_THROWS_AS(parse_jet_json("{"), ParseError);
    CHECK_THROWS_AS(parse_jet_json(R"({"points": []})"), ParseError);
    CHECK_THROWS_AS(parse_jet_json(R"({"dimension": 1, "norm": "l7", "points": []})"), ParseError);
    CHECK_THROWS_AS(parse_jet_json(R"({"dimension": 1, "points": [{"x": [0], "g": [0]}]})"),
                    ParseError);
    const RawJet est = parse_jet_json(R"({"dimension": 2, "norm": {"kind": "lp", "p": 1.5},
      "points": [{"x": [1, 2], "f": 3, "g": [4, 5]}]})", 3);
    CHECK(est.norm.smoothness >= 2.0);
  }

  TEST_CASE("points file parsing") {
    const auto pts = parse_points("# header\n1, 2\n3 4 # trailing\n\n  5\t6\n", 2);
    REQUIRE(pts.size() == 3);
    CHECK(pts[2][1] == 6);
    CHECK_THROWS_AS(parse_points("1 2 3\n", 2), ParseError);
    CHECK_THROWS_AS(parse_points("1 x\n", 2), ParseError);
  }

  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
      CHECK(std::stod(format_number(v)) == v);
    }
  }

  TEST_CASE("check command") {
    const std::string abs = write_temp("abs.json", kAbsJet);
    Run r = run_cli({"check", "--jet", abs, "--class", "cw11", "--M", "1"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["condition"]["satisfied"] == true);
    CHECK(std::abs(j["condition"]["margin"].get<double>()) <= 1e-12);

    r = run_cli({"check", "--jet", write_temp("step.json", kStepJet), "--class", "w11", "--auto-M"});
    CHECK(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["M"].get<double>() == doctest::Approx(4.0));
    CHECK(j["gamma"]["gamma"].get<double>() == doctest::Approx(4.0));

    r = run_cli({"check", "--jet", write_temp("bad.json", kBadJet), "--class", "cw11", "--M", "1"});
    CHECK(r.code == 2);
    j = nlohmann::json::parse(r.out);
    CHECK(j["condition"]["worst_pair"] == nlohmann::json::array({1, 0}));
    CHECK(r.err.find("(1, 0)") != std::string::npos);

    r = run_cli({"check", "--jet", write_temp("bad.json", kBadJet), "--class", "cw11", "--auto-M"});
    CHECK(r.code == 2);
  }

  TEST_CASE("usage and I/O errors exit 1") {
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"check", "--jet", "/nonexistent/jet.json", "--M", "1"}).code == 1);
    CHECK(run_cli({"check", "--jet", write_temp("abs.json", kAbsJet)}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"--help"}).code == 0);
  }

  TEST_CASE("constants command") {
    const Run r = run_cli({"constants", "--jet", write_temp("abs.json", kAbsJet)});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["c11_conv"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["gamma"]["gamma"].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("eval command") {
    const std::string abs = write_temp("abs.json", kAbsJet);
    const std::string pts = write_temp("pts.txt", "0\n1\n");
    Run r = run_cli({"eval", "--jet", abs, "--class", "c11_conv", "--M", "1", "--points", pts});
    CHECK(r.code == 0);
    std::string header;
    auto rows = parse_csv(r.out, &header);
    CHECK(header == "x0,F,g0,residual");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][1] == doctest::Approx(0.5));
    CHECK(std::abs(rows[0][2]) <= 1e-12);
    CHECK(rows[1][1] == doctest::Approx(1.0));
    CHECK(rows[1][2] == doctest::Approx(1.0));

    r = run_cli({"eval", "--jet", write_temp("one.json", kOneJet), "--class", "c1omega_conv",
                 "--alpha", "0.5", "--M", "1", "--points", write_temp("p1.txt", "1\n")});
    CHECK(r.code == 0);
    rows = parse_csv(r.out, nullptr);
    CHECK(rows[0][1] == doctest::Approx(2.0 / 3.0));
    CHECK(rows[0][2] == doctest::Approx(1.0));
    CHECK(r.out.find("0.66666666666666") != std::string::npos);

    r = run_cli({"eval", "--jet", write_temp("bad.json", kBadJet), "--class", "cw11", "--M", "1",
                 "--points", pts});
    CHECK(r.code == 2);
  }

  TEST_CASE("grid command") {
    const std::string abs = write_temp("abs.json", kAbsJet);
    Run r = run_cli({"grid", "--jet", abs, "--class", "c11_conv", "--M", "1", "--bbox", "-2", "2",
                     "--resolution", "101"});
    CHECK(r.code == 0);
    std::string header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == "x0,F,g0,g_upper,m_lower,residual");
    REQUIRE(rows.size() == 101);
    for (const auto& row : rows) {
      CHECK(row[4] <= row[1] + 1e-12);
      CHECK(row[1] <= row[3] + 1e-12);
    }
    CHECK(rows.front()[0] == -2.0);
    CHECK(rows.back()[0] == 2.0);

    r = run_cli({"grid", "--jet", abs, "--M", "1", "--bbox", "1", "1"});
    CHECK(r.code == 1);

    r = run_cli({"grid", "--jet", write_temp("one2.json", kOne2d), "--M", "1", "--bbox", "-1", "1",
                 "0", "2", "--resolution", "2"});
    CHECK(r.code == 0);
    const auto corners = parse_csv(r.out, nullptr);
    REQUIRE(corners.size() == 4);
    CHECK(corners[1][0] == -1.0);
    CHECK(corners[1][1] == 2.0);
    CHECK(corners[2][0] == 1.0);
  }

  TEST_CASE("grid output is deterministic across thread counts") {
    const std::string abs = write_temp("abs.json", kAbsJet);
    std::vector<std::string> args = {"grid", "--jet", abs, "--class", "c11", "--M", "1",
                                     "--bbox", "-3", "3", "--resolution", "257"};
    setenv("JETEX_THREADS", "1", 1);
    const Run one = run_cli(args);
    setenv("JETEX_THREADS", "4", 1);
    const Run four = run_cli(args);
    unsetenv("JETEX_THREADS");
    CHECK(one.code == 0);
    CHECK(one.out == four.out);
  }

  TEST_CASE("oracle-check command") {
    Run r = run_cli({"oracle-check", "--jet", write_temp("abs.json", kAbsJet), "--class", "c11_conv",
                     "--M", "1", "--bbox", "-2", "2"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["oracle"]["pass"] == true);
    CHECK(j["oracle"]["max_gap"].get<double>() <= j["oracle"]["grid_chord_bound"].get<double>());

    r = run_cli({"oracle-check", "--jet", write_temp("one2.json", kOne2d), "--M", "1", "--bbox", "-1",
                 "1", "-1", "1", "--resolution", "41"});
    CHECK(r.code == 0);

    r = run_cli({"oracle-check", "--jet", write_temp("abs.json", kAbsJet), "--M", "1", "--bbox", "-2",
                 "2", "--resolution", "5"});
    CHECK(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["oracle"]["grid_chord_bound"].get<double>() > 0.1);
  }

  TEST_CASE("selftest command") {
    const Run r = run_cli({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }

  TEST_CASE("parallel_for covers every index and propagates errors") {
    std::vector<std::atomic<int>> hits(1000);
    cli::parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(cli::parallel_for(100,
                                      [](std::size_t i) {
                                        if (i == 57) throw ParseError("boom");
                                      }),
                    ParseError);
  }
}
