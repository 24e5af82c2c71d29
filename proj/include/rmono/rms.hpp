#pragma once

#include "rmono/cmono.hpp"
#include "rmono/regionmap.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rmono {

/// Injective map from a subset of {0..source-1} into {0..target-1}; printed
/// 1-based. Source and target differ for correspondences between regions.
class PartialPermutation {
 public:
  PartialPermutation() = default;
  // image[i] = -1 where undefined.
  PartialPermutation(int target_size, std::vector<int> image);

  static PartialPermutation identity(int n);
  static PartialPermutation empty(int source, int target);
  static PartialPermutation from_permutation(const Permutation& p);

  int source_size() const { return static_cast<int>(image_.size()); }
  int target_size() const { return target_; }
  int operator()(int i) const { return image_[i]; }
  bool defined(int i) const { return image_[i] >= 0; }
  const std::vector<int>& image() const { return image_; }
  std::vector<int> domain() const;
  int domain_size() const;
  bool full() const { return domain_size() == source_size() && source_size() == target_; }
  bool is_identity() const;

  std::string str() const;  // e.g. "{1->2, 2->1}"

  auto operator<=>(const PartialPermutation&) const = default;

 private:
  int target_ = 0;
  std::vector<int> image_;
};

/// Apply a, then b; defined where a(q) is in the domain of b.
PartialPermutation compose(const PartialPermutation& a, const PartialPermutation& b);
PartialPermutation invert(const PartialPermutation& a);
/// Keeps the domain points listed in `keep` (0-based).
PartialPermutation restrict(const PartialPermutation& a, const std::vector<int>& keep);

struct Correspondence {
  int from_region = 0;
  int to_region = 0;
  PartialPermutation map;
  ParamPath witness;  // marked point of from_region to marked point of to_region
  int site = -1;
};

struct RmsOptions {
  TrackOptions track;
  double match_radius = 1e-6;
  std::size_t max_states = 10'000'000;
  // A label failing inside a region means its route clipped a feature finer
  // than the grid; nodes within repair_radius cells of the failure are then
  // avoided and the route rebuilt, at most route_repairs times per route.
  int route_repairs = 8;
  double repair_radius = 2.5;
};

/// Labelled real solutions at every region's marked point. The base region
/// reuses `base`; others come from a fresh solve. `mismatch` collects region
/// ids whose fresh count disagrees with the grid.
std::vector<SolutionSet> label_regions(const PolySystem& sys, const RegionMapResult& map, const SolutionSet& base,
                                       std::uint64_t seed, std::vector<int>* mismatch = nullptr);

/// Tracks every label of region A along marked A -> approach A -> approach B
/// -> marked B in real arithmetic; failed labels leave the domain.
Correspondence crossing_generator(const PolySystem& sys, const RegionMapResult& map, const CrossingSite& site,
                                  const std::vector<SolutionSet>& labels, const RmsOptions& opts = {});

/// Tracks region r's labels along its route to `cell` and reroutes around
/// failures (see RmsOptions::route_repairs). Returns the number of repairs.
int repair_route(const PolySystem& sys, RegionMapResult& map, int r, int cell, const SolutionSet& labels,
                 const RmsOptions& opts = {});

/// Action of a closed real loop at a region's marked point on its labels.
PartialPermutation hole_generator(const PolySystem& sys, const ParamPath& loop, const SolutionSet& labels,
                                  const RmsOptions& opts = {});

/// One step of the groupoid search: a correspondence or loop, possibly reversed.
struct GeneratorRef {
  enum class Kind { crossing, loop } kind = Kind::crossing;
  int index = 0;
  bool inverse = false;
};

struct LoopGenerator {
  int region = 0;
  PartialPermutation map;
  ParamPath loop;
  std::string origin;  // "hole", "puncture" or "user"
};

struct GroupoidResult {
  std::set<PartialPermutation> closure;
  // Generator word realising each closure element (restrictions reuse their
  // parent's word).
  std::map<PartialPermutation, std::vector<GeneratorRef>> witness;
  std::size_t states = 0;
};

GroupoidResult groupoid_closure(const RegionMapResult& map, const std::vector<SolutionSet>& labels,
                                const std::vector<Correspondence>& correspondences,
                                const std::vector<LoopGenerator>& loops, int base_region,
                                std::size_t max_states = 10'000'000);

/// Concatenated parameter path of a generator word.
ParamPath witness_path(const std::vector<GeneratorRef>& word, const std::vector<Correspondence>& correspondences,
                       const std::vector<LoopGenerator>& loops);

/// G_k for k = 1..R: increasing k-tuple Q -> set of ordered images.
using TupleMap = std::map<std::vector<int>, std::set<std::vector<int>>>;

struct RealMonodromyStructure {
  int R = 0;
  std::set<PartialPermutation> closure;
  std::vector<TupleMap> G;  // G[k - 1]

  const TupleMap& g(int k) const { return G.at(k - 1); }
};

RealMonodromyStructure build_structure(const std::set<PartialPermutation>& closure, int R);

bool is_k_transitive(const RealMonodromyStructure& s, int k);
std::set<Permutation> real_monodromy_group(const RealMonodromyStructure& s);
/// Unordered pairs {i, j} (0-based, i < j) with {j} in G_1({i}).
std::set<std::pair<int, int>> assembly_mode_changes(const RealMonodromyStructure& s);

/// Orbits of G_k with identical image sets, for k = 1..R: (Q list, images).
struct OrbitLine {
  std::vector<std::vector<int>> sources;
  std::set<std::vector<int>> images;
};
std::vector<OrbitLine> nontrivial_lines(const RealMonodromyStructure& s, int k);

/// Condensed listing: orbits grouped, trivial entries elided as "for all others".
std::string format_structure(const RealMonodromyStructure& s);

/// Label classes: nontrivial G_1 orbits, then fixed labels that take part in
/// a nontrivial higher G_k, then the labels on which everything is trivial.
std::vector<std::vector<int>> label_partition(const RealMonodromyStructure& s);
std::string format_partition(const std::vector<std::vector<int>>& parts);

/// Applies a relabelling sigma (label i becomes sigma(i)) to a structure.
RealMonodromyStructure relabel(const RealMonodromyStructure& s, const Permutation& sigma);

struct RealStructureResult {
  std::vector<SolutionSet> labels;
  std::vector<int> count_mismatch;
  std::vector<Correspondence> correspondences;  // deduplicated
  int sites_tracked = 0;
  int routes_repaired = 0;
  std::vector<LoopGenerator> loops;
  GroupoidResult groupoid;
  RealMonodromyStructure structure;
};

/// Labels, generators, closure and structure for a region map. `user_loops`
/// are closed real loops at the base point.
RealStructureResult real_structure(const PolySystem& sys, const RegionMapResult& map, const SolutionSet& base,
                                   std::uint64_t seed, const std::vector<ParamPath>& user_loops = {},
                                   const RmsOptions& opts = {});

}  // namespace rmono
