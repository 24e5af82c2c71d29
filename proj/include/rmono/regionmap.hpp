#pragma once

#include "rmono/solver.hpp"

#include <limits>
#include <vector>

namespace rmono {

/// Axis-aligned window of the real parameter space (P = 1 or 2).
struct Window {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const RVector& p) const;
};

inline constexpr int kSingular = -1;

/// Real-solution counts sampled on a regular lattice of nodes. Nodes are
/// indexed i + n1 * j with i along the first parameter axis.
struct Grid {
  Window window;
  int n1 = 0;
  int n2 = 1;
  std::vector<int> counts;     // kSingular where the count could not be certified
  std::vector<double> min_sv;  // smallest singular value over the real solutions (inf when none)
  // Per 2x2 block (indexed by its lower-left node): which diagonal pair is
  // joined when the block is a checkerboard of two counts, decided by the
  // count at the block centre. 0 none, 1 (i,j)-(i+1,j+1), 2 (i+1,j)-(i,j+1).
  std::vector<signed char> diagonal;
  // Per node: bit 1 cuts the edge to (i+1, j), bit 2 the edge to (i, j+1).
  // A cut edge joins equal counts whose real solutions do not continue into
  // each other along it (a feature thinner than the lattice lies between).
  std::vector<unsigned char> cut;
  int degree = 0;  // D
  std::uint64_t seed = 0;

  int size() const { return n1 * n2; }
  int index(int i, int j) const { return i + n1 * j; }
  int col(int node) const { return node % n1; }
  int row(int node) const { return node / n1; }
  RVector point(int node) const;
  RVector point(double fi, double fj) const;  // fractional lattice coordinates
  double spacing(int axis) const;
  int nearest(const RVector& p) const;
  bool on_edge(int node) const;
  // 4-neighbours (2 in the one-parameter case), in a fixed order.
  std::vector<int> neighbors4(int node) const;
  std::vector<int> neighbors8(int node) const;
  // True for 4-adjacent a, b whose edge is cut.
  bool is_cut(int a, int b) const;
  // Uncut 4-neighbours plus diagonal neighbours joined through a resolved block.
  std::vector<int> linked(int node) const;
  // True when the diagonal step a -> b (8-adjacent) is blocked by the other
  // diagonal of its block being joined.
  bool diagonal_blocked(int a, int b) const;
};

struct ScanOptions {
  SolveOptions solve;
  double real_tol = 1e-6;
  // Newton iterations allowed when seeding a node from its neighbour.
  int seed_newton_iters = 8;
  // Distinctness radius (relative to 1 + |x|) for certifying a node.
  double distinct_radius = 1e-7;
  // Edges between equal counts are tracked in real arithmetic when either end
  // has min_sv below this fraction of the grid median; 0 disables.
  double edge_check_ratio = 0.3;
};

Grid grid_scan(const PolySystem& sys, const SolutionSet& base, const Window& window, int n1, int n2,
               std::uint64_t seed, const ScanOptions& opts = {});

/// A closed loop around a bounded complement component (a hole, or a
/// puncture when the component is only singular nodes), attached to the
/// region's marked point.
struct EncirclingLoop {
  std::vector<int> component;  // nodes of the enclosed component
  RVector center;
  ParamPath loop;              // starts and ends at the marked point
  bool puncture = false;
};

struct Region {
  int id = 0;
  int count = 0;
  std::vector<int> cells;
  int marked_cell = -1;
  RVector marked_point;
  std::vector<RVector> intermediate_points;
  std::vector<EncirclingLoop> holes;
  std::vector<EncirclingLoop> punctures;
  int skipped_holes = 0;  // complement components that touch the window edge

  // Routing tree over member cells rooted at the marked cell (parent cell,
  // -1 at the root and for non-members) and distance to the region boundary.
  std::vector<int> parent;
  std::vector<int> depth;
  // Members the routing tree avoids where it can (empty when none); set by
  // route repair.
  std::vector<char> blocked;
};

struct CrossingSite {
  int id = 0;
  int region_a = 0;
  int region_b = 0;
  RVector location;  // midpoint of the hop
  int approach_a = -1;
  int approach_b = -1;
  bool special = false;  // next to a junction or a singular node
  // Singular nodes between the approach cells; such hops are shifted half a
  // cell sideways (by `offset` cells) so they do not run through them.
  int gap = 0;
  int offset = 0;
};

struct RegionMapResult {
  Grid grid;
  std::vector<int> region_of;  // per node, -1 for singular nodes
  std::vector<Region> regions;
  std::vector<CrossingSite> sites;
  std::vector<std::vector<int>> adjacency;  // region id -> sorted neighbour ids
  int base_region = -1;
  RVector base_point;

  // Route inside region r from its marked point to `cell` (a member).
  ParamPath route_to(int r, int cell) const;
  // Hop across a site from its approach cell in A to its approach cell in B.
  ParamPath hop(const CrossingSite& s) const;
  // Marks region r's members within `radius` cells of p as blocked, except
  // the marked cell and `keep`, and rebuilds its routing tree. False when
  // nothing new was blocked.
  bool block_near(int r, const RVector& p, double radius, int keep);
  // Census: count -> number of regions.
  std::vector<std::pair<int, int>> census() const;
};

/// 4-connected flood fill on equal counts, marked points, routing trees.
/// Marked point of the region holding `base_point` is the base point itself.
std::vector<Region> components(const Grid& grid, const RVector& base_point, std::vector<int>& region_of);

std::vector<CrossingSite> crossing_sites(const Grid& grid, const std::vector<Region>& regions,
                                         const std::vector<int>& region_of, int spacing = 5);

/// Adds encircling loops for singular-only bounded complement components and
/// isolated min_sv dips below `sv_threshold`, plus user-declared points.
void detect_punctures(const Grid& grid, std::vector<Region>& regions, const std::vector<int>& region_of,
                      const std::vector<RVector>& declared = {}, double sv_threshold = 1e-3);

/// Adds encircling loops for bounded complement components holding other
/// regions.
void hole_loops(const Grid& grid, std::vector<Region>& regions, const std::vector<int>& region_of);

struct RegionMapOptions {
  ScanOptions scan;
  int site_spacing = 5;
  std::vector<RVector> declared_singular_points;
};

/// Full decomposition: scan, components, punctures, holes, crossing sites.
RegionMapResult build_region_map(const PolySystem& sys, const SolutionSet& base, const Window& window, int n1,
                                 int n2, std::uint64_t seed, const RegionMapOptions& opts = {});

/// Default windows for the builtins.
Window builtin_window(Builtin which);

}  // namespace rmono
