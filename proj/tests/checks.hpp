#pragma once

#include "rmono/report.hpp"

#include <string>
#include <vector>

namespace rmono::checks {

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (!ok) detail += "; ";
    else detail.clear();
    ok = false;
    detail += why;
  }
};

// One printed listing line: every source maps onto the same image set.
struct ListingLine {
  std::vector<std::vector<int>> sources;  // 1-based
  std::vector<std::vector<int>> images;   // 1-based
};
using Listing = std::vector<std::vector<ListingLine>>;  // per k, nontrivial lines only

/// Expected ordered G maps from a listing; unlisted tuples map to themselves.
std::vector<TupleMap> expand(const Listing& listing, int R);

/// Exact comparison of ordered G maps.
Check equal_ordered(const RealMonodromyStructure& s, const std::vector<TupleMap>& expected);

/// G maps with every image replaced by its sorted set, as printed listings show them.
std::vector<std::map<std::vector<int>, std::set<std::vector<int>>>> unordered(const std::vector<TupleMap>& g);

/// Relabellings sigma that carry the two given label blocks (0-based) onto
/// {0,1,2} and {3,4,5} in either order: 72 for two 3-blocks.
std::vector<Permutation> block_relabellings(const std::vector<int>& a, const std::vector<int>& b);

/// Random real parameter inside the builtin's window.
RPoint random_parameter(Builtin b, Rng& rng);

// Property suites.
Check conjugate_parity(Builtin b, int samples, std::uint64_t seed);
Check round_trip(Builtin b, int segments, std::uint64_t seed);
Check jacobian_vs_differences(const PolySystem& sys, int samples, std::uint64_t seed, double rel_tol = 1e-5);
Check group_closed(const MonodromyGroup& g);
Check partial_closure_laws(const std::set<PartialPermutation>& closure, int R);
Check downward_consistent(const RealMonodromyStructure& s);
/// Replays the witness word of `count` closure elements (chosen with `seed`)
/// and checks the tracked labels land where the element says.
Check witness_replay(const PolySystem& sys, const RealStructureResult& rs, const SolutionSet& base, int count,
                     std::uint64_t seed);

/// Full-domain members of the closure at region r (the real monodromy group
/// with r's marked point as base).
std::set<Permutation> region_group(const RegionMapResult& map, const RealStructureResult& rs, int r);

std::string census_string(const RegionMapResult& map);

}  // namespace rmono::checks
