#include "doctest.h"

#include "rmono/report.hpp"

#include <filesystem>
#include <fstream>

using namespace rmono;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("rmono_test_" + name);
  std::ofstream(p) << text;
  return p;
}

RunConfig ex21_config() {
  RunConfig c;
  c.system = "ex21";
  c.res = {41};
  return c;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("floats are written with 17 significant digits") {
    Json j = {{"a", 0.1}, {"b", 1}, {"c", std::numeric_limits<double>::infinity()}};
    const auto s = dump_json(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("\"c\": null") != std::string::npos);
    CHECK(Json::parse(s)["a"].get<double>() == 0.1);
  }

  TEST_CASE("strip_timing removes only the wall time") {
    Json j = {{"x", 1}, {"wall_time_s", 0.5}};
    const auto s = strip_timing(j);
    CHECK_FALSE(s.contains("wall_time_s"));
    CHECK(s["x"] == 1);
  }

  TEST_CASE("invalid configurations") {
    auto with = [](auto edit) {
      RunConfig c = ex21_config();
      edit(c);
      return c;
    };
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.res = {5}; })), InvalidArgument);
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.res = {41, 41, 41}; })), InvalidArgument);
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.base = {1.0}; })), InvalidArgument);
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.window = {0.0, 1.0}; })), InvalidArgument);
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.tol_real = -1.0; })), InvalidArgument);
    CHECK_THROWS_AS(Session(with([](RunConfig& c) { c.system = "/nonexistent/file.sys"; })), InvalidArgument);
    Session outside(with([](RunConfig& c) { c.window = {2.0, 2.0, 3.0, 3.0}; }));
    CHECK_THROWS_AS(outside.window(), InvalidArgument);
    Session flipped(with([](RunConfig& c) { c.window = {2.0, -2.0, -2.0, 2.0}; }));
    CHECK_THROWS_AS(flipped.window(), InvalidArgument);
  }

  TEST_CASE("DSL systems need a base point and parse errors surface") {
    const auto good = temp_file("ex21.sys", "var x1 x2; par p1 p2; eq x1^2 - x2^2 - p1; eq 2*x1*x2 - p2;\n");
    RunConfig c;
    c.system = good.string();
    CHECK_THROWS_AS(Session{c}, InvalidArgument);
    c.base = {1.0, 0.0};
    Session s(c);
    CHECK(s.base().num_real() == 2);
    CHECK_THROWS_AS(s.window(), InvalidArgument);

    c.system = temp_file("bad.sys", "var x; par p; eq x + * 2;\n").string();
    c.base = {1.0};
    CHECK_THROWS_AS(Session{c}, ParseError);
  }

  TEST_CASE("DSL system runs the whole pipeline") {
    RunConfig c;
    c.system = temp_file("ex21b.sys", "var x1 x2; par p1 p2; eq x1^2 - x2^2 - p1; eq 2*x1*x2 - p2;\n").string();
    c.base = {1.0, 0.0};
    c.window = {-2.0, -2.0, 2.0, 2.0};
    c.res = {41};
    Session s(c);
    CHECK(real_monodromy_group(s.rstruct().structure).size() == 2);
  }

  TEST_CASE("label file reorders the labels") {
    RunConfig c = ex21_config();
    c.labels_file = temp_file("labels.json", "[[1, 0], [-1, 0]]").string();
    Session s(c);
    CHECK(s.base().labels[0][0] == doctest::Approx(1.0));
    CHECK(s.base().labels[1][0] == doctest::Approx(-1.0));

    c.labels_file = temp_file("labels_bad.json", "[[1, 0], [5, 5]]").string();
    Session bad(c);
    CHECK_THROWS(bad.base());
  }

  TEST_CASE("loop file") {
    const auto loops = read_loops_file(
        temp_file("loops.json", "{\"loops\": [[[1, 0], [0, 1], [-1, 0], [0, -1], [1, 0]]]}").string());
    REQUIRE(loops.size() == 1);
    CHECK(loops[0].num_segments() == 4);
    CHECK(loops[0].is_real());

    const auto cx = read_loops_file(temp_file("loops_c.json", "[[[1, 0], [[0, 1], 0], [1, 0]]]").string());
    CHECK_FALSE(cx[0].is_real());

    CHECK_THROWS_AS(read_loops_file(temp_file("loops_bad.json", "[[[1, 0]]]").string()), InvalidArgument);
    CHECK_THROWS_AS(read_loops_file(temp_file("loops_bad2.json", "{\"x\": 1}").string()), InvalidArgument);

    RunConfig c = ex21_config();
    c.loops_file = temp_file("loops_off.json", "[[[1.5, 0], [1.5, 0.5], [1.5, 0]]]").string();
    Session off(c);
    CHECK_THROWS_AS(off.rstruct(), InvalidArgument);
  }

  TEST_CASE("artifacts") {
    Session s(ex21_config());
    const auto solve = s.solve_json();
    CHECK(solve["schema"] == kSchemaVersion);
    CHECK(solve["command"] == "solve");
    CHECK(solve.contains("wall_time_s"));

    const auto rs = s.rstruct_json();
    for (const auto& g : rs["G"])
      for (const auto& e : g["entries"])
        for (const auto& img : e["images"])
          if (img.contains("witness")) CHECK_FALSE(img["witness"].is_null());
    const auto svg = s.regions_svg();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
  }

  TEST_CASE("reruns are byte identical up to the wall time") {
    Session a(ex21_config()), b(ex21_config());
    CHECK(dump_json(strip_timing(a.regions_json())) == dump_json(strip_timing(b.regions_json())));
    CHECK(dump_json(strip_timing(a.rstruct_json())) == dump_json(strip_timing(b.rstruct_json())));
    CHECK(dump_json(strip_timing(a.cgroup_json())) == dump_json(strip_timing(b.cgroup_json())));
  }
}
