#include "doctest.h"

#include "../checks.hpp"

using namespace rmono;

namespace {

CPoint pt(std::initializer_list<Complex> v) {
  CPoint p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) p[i++] = c;
  return p;
}

const RegionMapResult& kuramoto_map() {
  static const RegionMapResult m = [] {
    const auto k = builtin(Builtin::kuramoto3);
    const auto base = solve_labeled(k, builtin_base(Builtin::kuramoto3), 7, builtin_label_override(Builtin::kuramoto3));
    return build_region_map(k, base, builtin_window(Builtin::kuramoto3), 201, 201, 11);
  }();
  return m;
}

RegionMapResult map_for(Builtin b, int n) {
  const auto sys = builtin(b);
  const auto base = solve_labeled(sys, builtin_base(b), 7, builtin_label_override(b));
  const int n2 = sys.num_params() == 1 ? 1 : n;
  return build_region_map(sys, base, builtin_window(b), n, n2, 11);
}

}  // namespace

TEST_SUITE("regionmap") {
  TEST_CASE("univariate scan counts") {
    const auto u = builtin(Builtin::univariate);
    const auto base = solve_labeled(u, pt({2.0}), 1);
    const Grid g = grid_scan(u, base, {{-3.0}, {3.0}}, 61, 1, 3);
    for (int i = 0; i < g.size(); ++i) {
      const double p = g.point(i)[0];
      if (std::abs(std::abs(p) - 1.0) < 1e-9) continue;
      CHECK(g.counts[i] == (std::abs(p) > 1.0 ? 2 : 0));
    }
  }

  TEST_CASE("kuramoto3 scan at the centre and a corner") {
    const auto k = builtin(Builtin::kuramoto3);
    const auto base = solve_labeled(k, builtin_base(Builtin::kuramoto3), 1);
    const Grid g = grid_scan(k, base, builtin_window(Builtin::kuramoto3), 21, 21, 3);
    CHECK(g.counts[g.index(10, 10)] == 6);
    CHECK(g.counts[g.index(20, 20)] == 0);
  }

  TEST_CASE("kuramoto3 census") {
    const auto& m = kuramoto_map();
    const std::vector<std::pair<int, int>> want = {{0, 1}, {2, 1}, {4, 6}, {6, 1}};
    CHECK(m.census() == want);
    CHECK(m.regions[m.base_region].count == 6);
  }

  TEST_CASE("univariate has three intervals") {
    const auto m = map_for(Builtin::univariate, 201);
    CHECK(m.regions.size() == 3);
    for (const auto& r : m.regions) CHECK(r.punctures.empty());
  }

  TEST_CASE("a window of constant count is one region without sites") {
    const auto u = builtin(Builtin::univariate);
    const auto base = solve_labeled(u, pt({2.0}), 1);
    const auto m = build_region_map(u, base, {{1.5}, {3.0}}, 41, 1, 3);
    CHECK(m.regions.size() == 1);
    CHECK(m.sites.empty());
  }

  TEST_CASE("modified34 boundary p1 = 0 is split at the origin") {
    const auto m = map_for(Builtin::modified34, 201);
    bool above = false, below = false;
    for (const auto& s : m.sites) {
      const auto& a = m.regions[s.region_a];
      const auto& b = m.regions[s.region_b];
      if (std::min(a.count, b.count) != 2 || std::max(a.count, b.count) != 4) continue;
      if (std::abs(s.location[0]) > 0.1) continue;
      if (s.location[1] > 0) above = true;
      if (s.location[1] < 0) below = true;
    }
    CHECK(above);
    CHECK(below);
  }

  TEST_CASE("ex21 puncture at the origin") {
    const auto ex = builtin(Builtin::ex21);
    const auto base = solve_labeled(ex, pt({1.0, 0.0}), 1);
    const auto m = build_region_map(ex, base, builtin_window(Builtin::ex21), 81, 81, 3);
    int punctures = 0;
    for (const auto& r : m.regions)
      for (const auto& p : r.punctures) {
        ++punctures;
        CHECK(p.center.norm() < 0.1);
      }
    CHECK(punctures == 1);
  }

  TEST_CASE("kuramoto3 count-2 region has the hexagram as a hole") {
    const auto& m = kuramoto_map();
    for (const auto& r : m.regions) {
      if (r.count != 2) continue;
      CHECK(r.holes.size() == 1);
      CHECK(r.punctures.empty());
    }
  }

  TEST_CASE("routes stay inside their regions") {
    const auto& m = kuramoto_map();
    for (const auto& s : m.sites) {
      for (auto [r, cell] : {std::pair{s.region_a, s.approach_a}, std::pair{s.region_b, s.approach_b}}) {
        const auto path = m.route_to(r, cell);
        for (const auto& w : path.waypoints) CHECK(m.region_of[m.grid.nearest(RVector(w.real()))] == r);
      }
    }
    for (const auto& r : m.regions)
      for (const auto& h : r.holes)
        for (const auto& w : h.loop.waypoints) CHECK(m.region_of[m.grid.nearest(RVector(w.real()))] == r.id);
  }

  TEST_CASE("counts have the parity of D and marked counts are confirmed") {
    const auto& m = kuramoto_map();
    for (int c : m.grid.counts)
      if (c != kSingular) CHECK((m.grid.degree - c) % 2 == 0);
    const auto k = builtin(Builtin::kuramoto3);
    for (const auto& r : m.regions) {
      const auto s = solve_labeled(k, r.marked_point.cast<Complex>(), 5);
      CHECK(s.num_real() == r.count);
    }
  }

  TEST_CASE("univariate census is stable under doubling") {
    CHECK(map_for(Builtin::univariate, 101).census() == map_for(Builtin::univariate, 201).census());
  }

  TEST_CASE("adjacency is symmetric") {
    const auto& m = kuramoto_map();
    for (std::size_t a = 0; a < m.adjacency.size(); ++a)
      for (int b : m.adjacency[a]) {
        const auto& nb = m.adjacency[b];
        CHECK(std::find(nb.begin(), nb.end(), static_cast<int>(a)) != nb.end());
      }
  }
}
