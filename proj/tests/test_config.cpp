#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "elgrat/config.hpp"
#include "elgrat/errors.hpp"

using namespace elgrat;

namespace {

// Writes the content to a fresh file in the system temp directory.
std::string write_config(const std::string& content) {
  static int counter = 0;
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "elgrat-config-tests";
  fs::create_directories(dir);
  fs::path file = dir / ("case-" + std::to_string(counter++) + ".cfg");
  std::ofstream out(file);
  out << content;
  out.close();
  return file.string();
}

const std::string kRequired =
    "medium.lambda = 2.0\n"
    "medium.mu = 1.0\n"
    "medium.omega = 2.0\n"
    "incidence.kind = p\n"
    "incidence.theta = 0.5\n"
    "geometry.period = 0.5\n"
    "geometry.b = 0.25\n";

// Asserts that loading fails with a config_error whose message contains every
// given fragment.
void expect_error(const std::string& content, const std::vector<std::string>& fragments) {
  const std::string path = write_config(content);
  try {
    load_config(path);
    FAIL("expected a config_error for:\n" << content);
  } catch (const config_error& err) {
    const std::string msg = err.what();
    for (const std::string& fragment : fragments) {
      INFO("message: " << msg);
      CHECK(msg.find(fragment) != std::string::npos);
    }
  }
}

}  // namespace

TEST_CASE("full configuration round trip") {
  const std::string path = write_config(
      "mode = adapt\n"
      "medium.lambda = 2.0\n"
      "medium.mu = 1.0\n"
      "medium.omega = 2.0\n"
      "incidence.kind = p\n"
      "incidence.theta = 1.0471975511965976\n"
      "geometry.period = 0.5\n"
      "geometry.b = 0.25\n"
      "adapt.tolerance = 1e-4\n"
      "adapt.tau = 0.6\n"
      "adapt.dtn_tol = 1e-9\n"
      "adapt.max_iterations = 30\n"
      "adapt.max_dof = 50000\n"
      "adapt.h0 = 0.05\n"
      "adapt.retighten = true\n"
      "study.levels = 5\n"
      "output.directory = results\n"
      "output.vtk = false\n"
      "output.csv = true\n"
      "output.matrix = true\n");
  RunConfig c = load_config(path);
  CHECK(c.mode == RunMode::Adapt);
  CHECK(c.problem.medium.lambda == 2.0);
  CHECK(c.problem.medium.mu == 1.0);
  CHECK(c.problem.medium.omega == 2.0);
  CHECK(c.problem.medium.kappa1() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.problem.medium.kappa2() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.problem.wave.kind == WaveKind::Compressional);
  CHECK(c.problem.wave.theta == 1.0471975511965976);
  CHECK(c.problem.b == 0.25);
  REQUIRE(c.problem.profile.points.size() == 2);  // flat by default
  CHECK(c.problem.profile.points.back().x() == 0.5);
  CHECK(c.problem.profile.flat());
  CHECK(c.adapt.tolerance == 1e-4);
  CHECK(c.adapt.tau == 0.6);
  CHECK(c.adapt.dtn_tol == 1e-9);
  CHECK(c.adapt.max_iterations == 30);
  CHECK(c.adapt.max_dof == 50000);
  CHECK(c.adapt.h0 == 0.05);
  CHECK(c.adapt.retighten == true);
  CHECK(c.study_levels == 5);
  CHECK(c.output.directory == "results");
  CHECK(c.output.vtk == false);
  CHECK(c.output.csv == true);
  CHECK(c.output.matrix == true);
}

TEST_CASE("defaults cover every optional key") {
  RunConfig c = load_config(write_config(kRequired));
  CHECK(c.mode == RunMode::Adapt);
  CHECK(c.adapt.tolerance == 1e-3);
  CHECK(c.adapt.tau == 0.5);
  CHECK(c.adapt.dtn_tol == 1e-8);
  CHECK(c.adapt.max_iterations == 50);
  CHECK(c.adapt.max_dof == 200000);
  CHECK(c.adapt.h0 == 0.1);
  CHECK(c.adapt.retighten == false);
  CHECK(c.study_levels == 4);
  CHECK(c.output.directory == "out");
  CHECK(c.output.vtk == true);
  CHECK(c.output.csv == true);
  CHECK(c.output.matrix == false);
  CHECK(c.problem.profile.flat());
}

TEST_CASE("modes and incidence kinds") {
  RunConfig solve = load_config(write_config("mode = solve\n" + kRequired));
  CHECK(solve.mode == RunMode::Solve);
  RunConfig study = load_config(write_config("mode = study\n" + kRequired));
  CHECK(study.mode == RunMode::Study);

  const std::string base =
      "medium.lambda = 2.0\nmedium.mu = 1.0\nmedium.omega = 2.0\n"
      "incidence.theta = 0.5\ngeometry.period = 0.5\ngeometry.b = 0.25\n";
  CHECK(load_config(write_config(base + "incidence.kind = s\n")).problem.wave.kind ==
        WaveKind::Shear);
  CHECK(load_config(write_config(base + "incidence.kind = shear\n")).problem.wave.kind ==
        WaveKind::Shear);
  CHECK(load_config(write_config(base + "incidence.kind = compressional\n")).problem.wave.kind ==
        WaveKind::Compressional);
}

TEST_CASE("profile parsing") {
  RunConfig c = load_config(write_config(
      kRequired + "geometry.profile = 0 0; 0.125 0.1; 0.25 0; 0.375 0.1; 0.5 0\n"));
  REQUIRE(c.problem.profile.points.size() == 5);
  const double want[5][2] = {{0.0, 0.0}, {0.125, 0.1}, {0.25, 0.0}, {0.375, 0.1}, {0.5, 0.0}};
  for (int k = 0; k < 5; ++k) {
    CHECK(c.problem.profile.points[k].x() == want[k][0]);
    CHECK(c.problem.profile.points[k].y() == want[k][1]);
  }
  CHECK(!c.problem.profile.flat());
  CHECK(c.problem.profile.max_height() == 0.1);
}

TEST_CASE("comments and stray whitespace are tolerated") {
  RunConfig c = load_config(write_config(
      "# a full-line comment\n"
      "\n"
      "   mode = solve   # trailing comment\n"
      "\t medium.lambda\t=\t2.0\n"
      "medium.mu = 1.0\n"
      "medium.omega = 2.0\n"
      "incidence.kind = p\n"
      "incidence.theta = 0.5\n"
      "geometry.period = 0.5\n"
      "geometry.b = 0.25\n"
      "\n"));
  CHECK(c.mode == RunMode::Solve);
  CHECK(c.problem.medium.lambda == 2.0);
}

TEST_CASE("missing file and missing keys") {
  CHECK_THROWS_AS(load_config("/nonexistent/elgrat.cfg"), config_error);
  expect_error(
      "medium.lambda = 2.0\nmedium.omega = 2.0\nincidence.kind = p\n"
      "incidence.theta = 0.5\ngeometry.period = 0.5\ngeometry.b = 0.25\n",
      {"missing required key 'medium.mu'"});
  expect_error(
      "medium.lambda = 2.0\nmedium.mu = 1.0\nmedium.omega = 2.0\n"
      "incidence.theta = 0.5\ngeometry.period = 0.5\ngeometry.b = 0.25\n",
      {"missing required key 'incidence.kind'"});
}

TEST_CASE("syntax diagnostics carry the line number") {
  expect_error(kRequired + "this line has no equals sign\n", {":8: expected 'key = value'"});
  expect_error(kRequired + " = 1.0\n", {":8: empty key"});
  expect_error(kRequired + "adapt.tau =\n", {":8: key 'adapt.tau' has an empty value"});
  expect_error(kRequired + "adapt.tau = 0.5\nadapt.tau = 0.7\n",
               {":9: duplicate key 'adapt.tau' (first at line 8)"});
  expect_error(kRequired + "adapt.taw = 0.5\n", {":8: unknown key 'adapt.taw'"});
  expect_error(kRequired + "adapt.tolerance = tiny\n",
               {":8: key 'adapt.tolerance': expected a number, got 'tiny'"});
  expect_error(kRequired + "adapt.max_iterations = 2.5\n",
               {":8: key 'adapt.max_iterations': expected an integer, got '2.5'"});
  expect_error(kRequired + "output.vtk = yes\n",
               {":8: key 'output.vtk': expected true or false, got 'yes'"});
}

TEST_CASE("semantic validation") {
  expect_error("mode = fast\n" + kRequired, {"mode must be solve, adapt, or study, got 'fast'"});
  expect_error(kRequired + "adapt.tau = 1.0\n", {"adapt.tau out of (0,1)"});
  expect_error(kRequired + "adapt.tolerance = -1\n", {"adapt.tolerance must be positive"});
  expect_error(kRequired + "adapt.dtn_tol = 0\n", {"adapt.dtn_tol must be positive"});
  expect_error(kRequired + "adapt.max_iterations = 0\n",
               {"adapt.max_iterations must be at least 1"});
  expect_error(kRequired + "adapt.max_dof = -5\n", {"adapt.max_dof must be at least 1"});
  expect_error(kRequired + "adapt.h0 = 0\n", {"adapt.h0 must be positive"});
  expect_error(kRequired + "study.levels = 0\n", {"study.levels must be at least 1"});

  expect_error(
      "medium.lambda = 2.0\nmedium.mu = -1.0\nmedium.omega = 2.0\n"
      "incidence.kind = p\nincidence.theta = 0.5\n"
      "geometry.period = 0.5\ngeometry.b = 0.25\n",
      {".cfg: "});  // medium construction failure is rethrown with the path

  expect_error(
      "medium.lambda = 2.0\nmedium.mu = 1.0\nmedium.omega = 2.0\n"
      "incidence.kind = p\nincidence.theta = 1.5707963267948966\n"
      "geometry.period = 0.5\ngeometry.b = 0.25\n",
      {"incidence.theta out of (-pi/2, pi/2)"});

  expect_error(
      "medium.lambda = 2.0\nmedium.mu = 1.0\nmedium.omega = 2.0\n"
      "incidence.kind = p\nincidence.theta = 0.5\n"
      "geometry.period = -0.5\ngeometry.b = 0.25\n",
      {"geometry.period must be positive"});
}

TEST_CASE("profile diagnostics") {
  expect_error(kRequired + "geometry.profile = 0 0; 0.4 0\n",
               {"last breakpoint x must equal geometry.period"});
  expect_error(kRequired + "geometry.profile = 0 0\n", {"need at least two breakpoints"});
  expect_error(kRequired + "geometry.profile = 0 0; 0.25 zero; 0.5 0\n",
               {"expected 'x y' breakpoints"});
  // validate_profile failures are rethrown with context: height above b
  expect_error(kRequired + "geometry.profile = 0 0; 0.25 0.3; 0.5 0\n", {"geometry.profile"});
  // non-monotone x
  expect_error(kRequired + "geometry.profile = 0 0; 0.3 0.1; 0.2 0.1; 0.5 0\n",
               {"geometry.profile"});
}
