#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "krein/errors.hpp"
#include "krein_cli/config.hpp"
#include "krein_cli/run.hpp"

using namespace krein;
using namespace krein::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int line_count(const fs::path& p) {
  const std::string text = slurp(p);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("krein_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_error(const std::string& text, Command c) {
  try {
    parse_config(text, c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const fs::path kConfigs = KREIN_CONFIG_DIR;

}  // namespace

TEST_SUITE("config validation") {
  TEST_CASE("missing segment length names the field") {
    const std::string msg =
        config_error(R"({"model": {"kind": "segment"}, "energies": [[0, 1]]})", Command::verify);
    CHECK(msg.find("model.l") != std::string::npos);
    CHECK(msg.find("missing") != std::string::npos);
  }

  TEST_CASE("malformed input") {
    CHECK(config_error("{not json", Command::verify).rfind("config:", 0) == 0);
    CHECK(config_error(R"({"model": {"kind": "finite"}, "colour": 1})", Command::verify).find("colour") !=
          std::string::npos);
    CHECK(config_error(R"({"model": {"kind": "blob"}})", Command::verify).find("model.kind") !=
          std::string::npos);
    CHECK(config_error(R"({"command": "green", "model": {"kind": "finite"}})", Command::verify)
              .find("command") != std::string::npos);
    CHECK(config_error(R"({"model": {"kind": "points", "centers": [[0,0,0]], "alphas": [1, 2]},
                           "kappa_range": [0.1, 1]})",
                       Command::bound_states)
              .find("model.alphas") != std::string::npos);
    CHECK(config_error(R"({"model": {"kind": "points", "centers": [[0,0,0]], "alphas": [1]},
                           "kappa_range": [1, 0.1]})",
                       Command::bound_states)
              .find("kappa_range") != std::string::npos);
    CHECK(config_error(R"({"model": {"kind": "finite"}, "tolerances": {"gstar_g": 1}})", Command::verify)
              .find("tolerances.gstar_g") != std::string::npos);
    CHECK(config_error(R"({"model": {"kind": "segment", "l": 1}, "energy": [0, 1],
                           "source": {"kind": "gaussian", "center": [0, 1, 0], "sigma": 0.1}})",
                       Command::green)
              .find("grid") != std::string::npos);
  }

  TEST_CASE("seed override and tolerance table") {
    const std::string text = R"({"model": {"kind": "finite"}, "seed": 3, "tolerances": {"hilbert": 1e-9}})";
    const RunConfig a = parse_config(text, Command::verify);
    CHECK(a.seed == 3);
    CHECK(a.tolerances.at("hilbert") == 1e-9);
    CHECK(a.tolerances.at("oracle_relative") == 1e-10);
    CHECK(parse_config(text, Command::verify, 11).seed == 11);
  }

  TEST_CASE("grids follow declaration order") {
    const RunConfig c = parse_config(R"({"model": {"kind": "points", "centers": [[0,0,0]], "alphas": [0.1]},
        "energy": -1, "pole": [0, 0, 1],
        "grid": {"plane": {"origin": [1, 1, 0], "u": [1, 0, 0], "v": [0, 2, 0], "n": [10, 10]}}})",
                                     Command::green);
    REQUIRE(c.grid.size() == 100);
    CHECK(c.grid[1].isApprox(Point(1.0 + 1.0 / 9.0, 1.0, 0.0)));
    CHECK(c.grid[10].isApprox(Point(1.0, 1.0 + 2.0 / 9.0, 0.0)));
    CHECK(c.grid[99].isApprox(Point(2.0, 3.0, 0.0)));
  }

  TEST_CASE("energies") {
    const RunConfig c = parse_config(
        R"({"model": {"kind": "segment", "l": 1}, "energies": [-2, [0.5, 1], {"kappa": 3}]})", Command::verify);
    REQUIRE(c.energies.size() == 3);
    CHECK(c.energies[0].z() == cplx(-2.0, 0.0));
    CHECK(c.energies[1].z() == cplx(0.5, 1.0));
    CHECK(c.energies[2].z() == cplx(-9.0, 0.0));
  }
}

TEST_SUITE("emit_grid") {
  TEST_CASE("single point") {
    const fs::path dir = scratch("single");
    fs::create_directories(dir);
    GridFunction g;
    g.points = {Point(0.1, 0.2, 0.3)};
    g.values = {cplx(1.0 / 3.0, -2.0)};
    emit_grid(g, dir / "g.csv");
    CHECK(slurp(dir / "g.csv") ==
          "x,y,z,re,im\n0.10000000000000001,0.20000000000000001,0.29999999999999999,"
          "0.33333333333333331,-2\n");
  }

  TEST_CASE("plane grid has one row per point") {
    const fs::path dir = scratch("plane");
    fs::create_directories(dir);
    GridFunction g;
    for (int i = 0; i < 100; ++i) {
      g.points.emplace_back(i % 10, i / 10, 0.0);
      g.values.emplace_back(i, -i);
    }
    emit_grid(g, dir / "g.csv");
    CHECK(line_count(dir / "g.csv") == 101);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(emit_grid(GridFunction{}, scratch("empty") / "g.csv"), ConfigError);
    GridFunction g;
    g.points = {Point::Zero()};
    g.values = {cplx{}};
    CHECK_THROWS_AS(emit_grid(g, fs::path("/nonexistent-dir/g.csv")), IoError);
  }
}

TEST_SUITE("run") {
  TEST_CASE("single center bound state") {
    const fs::path out = scratch("points");
    std::ostringstream log;
    const RunConfig c = load_config(kConfigs / "points_n1.json", Command::bound_states);
    CHECK(run(c, out, log) == kOk);
    std::istringstream csv(slurp(out / "bound_states.csv"));
    std::string header;
    std::string row;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "kappa,E");
    const double kappa = std::stod(row.substr(0, row.find(',')));
    const double energy = std::stod(row.substr(row.find(',') + 1));
    CHECK(std::abs(kappa - 1.0) < 1e-8);
    CHECK(std::abs(energy + 1.0) < 1e-8);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary.at("convention").get<std::string>() == kConventionNote);
  }

  TEST_CASE("finite verify with seed 7") {
    const fs::path out = scratch("finite");
    std::ostringstream log;
    const RunConfig c = load_config(kConfigs / "finite_verify.json", Command::verify);
    CHECK(c.seed == 7);
    CHECK(run(c, out, log) == kOk);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary.at("residuals").at("oracle_relative").at("max").get<double>() < 1e-10);
    CHECK(summary.at("tolerances").at("oracle_relative").get<double>() == 1e-10);
    CHECK(summary.at("pass").get<bool>());
  }

  TEST_CASE("segment trace") {
    const fs::path out = scratch("trace");
    std::ostringstream log;
    const RunConfig c = load_config(kConfigs / "segment_trace.json", Command::trace);
    CHECK(run(c, out, log) == kOk);
    CHECK(line_count(out / "u_f.csv") == 4);
    CHECK(line_count(out / "trace.csv") == 10);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    for (const auto& r : summary.at("residuals")) CHECK(r.at("relative_deviation").get<double>() < 1e-3);
  }

  TEST_CASE("tightened tolerance fails verification") {
    const fs::path out = scratch("tight");
    std::ostringstream log;
    const RunConfig c = parse_config(
        R"({"model": {"kind": "finite", "models": 2}, "tolerances": {"oracle_relative": 1e-30}})", Command::verify);
    CHECK(run(c, out, log) == kVerifyFailed);
  }

  TEST_CASE("model errors propagate") {
    const RunConfig c = parse_config(
        R"({"model": {"kind": "points", "centers": [[0,0,0], [0,0,0]], "alphas": [0.1, 0.1]},
            "kappa_range": [0.1, 1]})",
        Command::bound_states);
    std::ostringstream log;
    CHECK_THROWS_AS(run(c, scratch("coincident"), log), CoincidentCenters);
  }

  TEST_CASE("segment Green grid") {
    const fs::path out = scratch("green");
    std::ostringstream log;
    const RunConfig c = parse_config(R"({"model": {"kind": "segment", "l": 1, "nodes": 64}, "energy": -1,
        "source": {"kind": "gaussian", "center": [0.5, 1, 0], "sigma": 0.2},
        "grid": {"box": {"min": [0, 0.5, -0.5], "max": [1, 1.5, 0.5], "n": [3, 3, 2]}}})",
                                     Command::green);
    CHECK(run(c, out, log) == kOk);
    CHECK(line_count(out / "green.csv") == 19);
  }
}
