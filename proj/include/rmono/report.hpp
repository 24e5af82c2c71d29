#pragma once

#include "rmono/cmono.hpp"
#include "rmono/regionmap.hpp"
#include "rmono/rms.hpp"

#include "json.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace rmono {

// Insertion-ordered so that artifacts are byte-stable across runs.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
std::string version_string();

/// Everything a pipeline run depends on. Empty fields fall back to the
/// builtin's documented defaults.
struct RunConfig {
  std::string system = "ex21";  // builtin name or path to a DSL file
  std::vector<double> base;
  std::vector<double> window;  // lo_1..lo_P, hi_1..hi_P
  std::vector<int> res;        // one value for every axis, or one per axis
  std::uint64_t seed = 7;
  std::optional<double> tol_real;
  std::optional<double> tol_sing;
  std::optional<double> match_radius;
  std::string labels_file;
  std::string loops_file;

  Json echo() const;
};

/// Lazily computed pipeline stages over one validated configuration. Each
/// stage runs at most once; later stages reuse earlier ones.
class Session {
 public:
  // Throws InvalidArgument / ParseError on bad input.
  explicit Session(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const PolySystem& system() const { return *sys_; }
  const std::string& system_name() const { return name_; }
  std::optional<Builtin> builtin_system() const { return builtin_; }

  RPoint base_point() const { return base_point_; }
  Window window() const;
  std::pair<int, int> resolution() const;

  const SolutionSet& base();
  const MonodromyGroup& cgroup();
  const RegionMapResult& regions();
  const RealStructureResult& rstruct();

  Json solve_json();
  Json cgroup_json();
  Json regions_json();
  Json rstruct_json();
  std::string regions_svg();
  std::string rstruct_text();

  TrackOptions track_options() const;
  RmsOptions rms_options() const;

 private:
  Json header(const std::string& command) const;
  void finish(Json& j) const;

  RunConfig cfg_;
  std::optional<PolySystem> sys_;
  std::optional<Builtin> builtin_;
  std::string name_;
  RPoint base_point_;
  std::optional<SolutionSet> base_;
  std::optional<MonodromyGroup> cgroup_;
  std::optional<RegionMapResult> map_;
  std::optional<RealStructureResult> rs_;
  std::chrono::steady_clock::time_point start_;
};

/// Pretty JSON with every float written to 17 significant digits; non-finite
/// values become null.
std::string dump_json(const Json& j);

/// Drops the wall-time field, for comparing reruns.
Json strip_timing(Json j);

Json to_json(const ParamPath& path);
Json to_json(const PartialPermutation& p);  // [[from, to], ...], 1-based
Json to_json(const std::vector<GeneratorRef>& word);

/// Label file: JSON array of coordinate tuples in the desired label order.
std::vector<RVector> read_labels_file(const std::string& path);
/// Loop file: JSON array of loops, each an array of parameter waypoints.
/// A coordinate is a number or a [re, im] pair.
std::vector<ParamPath> read_loops_file(const std::string& path);

/// Region map colored by real-solution count (fixed palette per count).
std::string region_svg(const RegionMapResult& map);

/// Witness for each nontrivial G_k entry: (Q, image) -> generator word.
std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<GeneratorRef>> entry_witnesses(
    const RealStructureResult& rs);

}  // namespace rmono
