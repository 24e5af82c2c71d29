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

Session& session(const std::string& name) {
  static std::map<std::string, std::unique_ptr<Session>> cache;
  auto& s = cache[name];
  if (!s) {
    RunConfig cfg;
    cfg.system = name;
    s = std::make_unique<Session>(cfg);
  }
  return *s;
}

PartialPermutation pp(int n, std::vector<int> img) { return PartialPermutation(n, std::move(img)); }

}  // namespace

TEST_SUITE("rms") {
  TEST_CASE("compose, invert, restrict") {
    const auto swap = pp(3, {1, 0, -1});
    const auto id1 = pp(3, {0, -1, -1});
    const auto c = compose(swap, id1);
    CHECK(c.domain() == std::vector<int>{1});
    CHECK(c(1) == 0);
    CHECK(invert(swap) == swap);
    CHECK(restrict(PartialPermutation::identity(3), {1}) == pp(3, {-1, 1, -1}));
    CHECK_THROWS(pp(3, {0, 0, -1}));
  }

  TEST_CASE("modified34 crossing into the count-2 region keeps labels 1 and 2") {
    Session& s = session("modified34");
    const auto& m = s.regions();
    const auto& rs = s.rstruct();
    bool swap_above = false, id_below = false;
    for (const auto& c : rs.correspondences) {
      if (c.from_region != m.base_region || m.regions[c.to_region].count != 2) continue;
      CHECK(c.map.domain() == std::vector<int>{0, 1});
      const double p2 = m.sites.at(c.site).location[1];
      if (p2 > 0 && c.map == pp(2, {1, 0, -1, -1})) swap_above = true;
      if (p2 < 0 && c.map == pp(2, {0, 1, -1, -1})) id_below = true;
    }
    CHECK(swap_above);
    CHECK(id_below);
  }

  TEST_CASE("a direct crossing from the base matches the repaired pipeline") {
    Session& s = session("modified34");
    const auto& m = s.regions();
    // Far from the origin the route meets no branch collision at a bad spot.
    int found = 0;
    for (const auto& site : m.sites) {
      if (site.region_a != m.base_region || std::abs(site.location[1] - 1.5) > 1e-6) continue;
      const auto c = crossing_generator(s.system(), m, site, s.rstruct().labels, s.rms_options());
      CHECK(c.map == pp(2, {1, 0, -1, -1}));
      ++found;
    }
    CHECK(found == 1);
  }

  TEST_CASE("hole generators") {
    Session& ex = session("ex21");
    const auto& m = ex.regions();
    const auto& rs = ex.rstruct();
    const auto& base = m.regions[m.base_region];
    REQUIRE(base.punctures.size() == 1);
    const auto g = hole_generator(ex.system(), base.punctures[0].loop, rs.labels[m.base_region]);
    CHECK(g == pp(2, {1, 0}));
    // A small triangle next to the base point encloses nothing.
    const ParamPath tiny({pt({1.0, 0.0}), pt({1.05, 0.0}), pt({1.0, 0.05}), pt({1.0, 0.0})});
    CHECK(hole_generator(ex.system(), tiny, rs.labels[m.base_region]).is_identity());

    Session& k = session("kuramoto3");
    for (const auto& l : k.rstruct().loops) {
      if (k.regions().regions[l.region].count != 2) continue;
      CHECK(l.map.is_identity());
      CHECK(l.map.full());
    }
  }

  TEST_CASE("closure without generators is the identity and its restrictions") {
    Session& ex = session("ex21");
    const auto g = groupoid_closure(ex.regions(), ex.rstruct().labels, {}, {}, ex.regions().base_region);
    for (const auto& pi : g.closure) CHECK(pi.is_identity());
    CHECK(g.closure.count(PartialPermutation::identity(2)));
  }

  TEST_CASE("modified34 closure moves only labels 1 and 2") {
    const auto& rs = session("modified34").rstruct();
    CHECK(rs.groupoid.closure.count(pp(4, {1, 0, -1, -1})));
    for (const auto& pi : rs.groupoid.closure) {
      if (pi.defined(2)) CHECK(pi(2) == 2);
      if (pi.defined(3)) CHECK(pi(3) == 3);
    }
  }

  TEST_CASE("ex21 closure holds all of S_2") {
    const auto& rs = session("ex21").rstruct();
    CHECK(rs.groupoid.closure.count(pp(2, {1, 0})));
    CHECK(rs.groupoid.closure.count(pp(2, {0, 1})));
    CHECK(real_monodromy_group(rs.structure).size() == 2);
  }

  TEST_CASE("ex21 structure and its listing") {
    const auto& st = session("ex21").rstruct().structure;
    CHECK(format_structure(st) == "G_1\n  {1},{2} ↦ {{1},{2}}\nG_2\n  {1,2} ↦ {{1,2},{2,1}}\n");
    CHECK(is_k_transitive(st, 2));
    CHECK(is_k_transitive(st, 1));
    CHECK(assembly_mode_changes(st) == std::set<std::pair<int, int>>{{0, 1}});
    const auto swapped = relabel(st, Permutation::from_cycles("(1 2)", 2));
    CHECK(swapped.G == st.G);
  }

  TEST_CASE("modified34 is not transitive") {
    const auto& st = session("modified34").rstruct().structure;
    CHECK_FALSE(is_k_transitive(st, 1));
    CHECK(format_partition(label_partition(st)) == "{1,2} | {3,4}");
  }

  TEST_CASE("kuramoto3: leaving the count-6 region can lose label 6") {
    Session& k = session("kuramoto3");
    bool drops6 = false;
    for (const auto& c : k.rstruct().correspondences) {
      if (c.from_region != k.regions().base_region) continue;
      CHECK(c.map.domain_size() == 4);
      if (!c.map.defined(5)) drops6 = true;
    }
    CHECK(drops6);
    CHECK(format_partition(label_partition(k.rstruct().structure)) == "{1} | {2,3,4} | {5,6}");
  }

  TEST_CASE("closure laws, downward consistency and witnesses") {
    for (const char* name : {"ex21", "modified34", "kuramoto3"}) {
      Session& s = session(name);
      const auto& rs = s.rstruct();
      INFO(name);
      CHECK(checks::partial_closure_laws(rs.groupoid.closure, rs.structure.R).ok);
      CHECK(checks::downward_consistent(rs.structure).ok);
      const auto w = checks::witness_replay(s.system(), rs, s.base(), 10, 77);
      INFO(w.detail);
      CHECK(w.ok);
    }
  }

  TEST_CASE("simply connected base region gives a trivial group") {
    Session& u = session("univariate");
    const auto& m = u.regions();
    const auto& base = m.regions[m.base_region];
    CHECK(base.holes.empty());
    CHECK(base.punctures.empty());
    CHECK(real_monodromy_group(u.rstruct().structure).size() == 1);
  }
}
