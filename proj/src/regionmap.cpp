#include "rmono/regionmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace rmono {

bool Window::contains(const RVector& p) const {
  if (p.size() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (p[k] < lo[k] || p[k] > hi[k]) return false;
  }
  return true;
}

RVector Grid::point(int node) const { return point(col(node), row(node)); }

RVector Grid::point(double fi, double fj) const {
  RVector p(window.dim());
  p[0] = window.lo[0] + (window.hi[0] - window.lo[0]) * fi / std::max(1, n1 - 1);
  if (window.dim() > 1) p[1] = window.lo[1] + (window.hi[1] - window.lo[1]) * fj / std::max(1, n2 - 1);
  return p;
}

double Grid::spacing(int axis) const {
  const int n = axis == 0 ? n1 : n2;
  return (window.hi[axis] - window.lo[axis]) / std::max(1, n - 1);
}

int Grid::nearest(const RVector& p) const {
  auto idx = [&](int axis, int n) {
    const double f = (p[axis] - window.lo[axis]) / spacing(axis);
    return std::clamp(static_cast<int>(std::lround(f)), 0, n - 1);
  };
  return index(idx(0, n1), window.dim() > 1 ? idx(1, n2) : 0);
}

bool Grid::on_edge(int node) const {
  const int i = col(node), j = row(node);
  if (i == 0 || i == n1 - 1) return true;
  return n2 > 1 && (j == 0 || j == n2 - 1);
}

std::vector<int> Grid::neighbors4(int node) const {
  std::vector<int> out;
  const int i = col(node), j = row(node);
  if (i > 0) out.push_back(index(i - 1, j));
  if (i + 1 < n1) out.push_back(index(i + 1, j));
  if (j > 0) out.push_back(index(i, j - 1));
  if (j + 1 < n2) out.push_back(index(i, j + 1));
  return out;
}

std::vector<int> Grid::neighbors8(int node) const {
  std::vector<int> out;
  const int i = col(node), j = row(node);
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      if (di == 0 && dj == 0) continue;
      const int a = i + di, b = j + dj;
      if (a >= 0 && a < n1 && b >= 0 && b < n2) out.push_back(index(a, b));
    }
  }
  return out;
}

bool Grid::is_cut(int a, int b) const {
  if (cut.empty()) return false;
  const int lo = std::min(a, b), hi = std::max(a, b);
  return (cut[lo] & (hi - lo == 1 && row(lo) == row(hi) ? 1 : 2)) != 0;
}

std::vector<int> Grid::linked(int node) const {
  std::vector<int> out = neighbors4(node);
  std::erase_if(out, [&](int w) { return is_cut(node, w); });
  if (diagonal.empty()) return out;
  const int i = col(node), j = row(node);
  for (int dj : {-1, 1}) {
    for (int di : {-1, 1}) {
      const int a = i + di, b = j + dj;
      if (a < 0 || a >= n1 || b < 0 || b >= n2) continue;
      const int block = index(std::min(i, a), std::min(j, b));
      const bool main = di == dj;
      if (diagonal[block] == (main ? 1 : 2)) out.push_back(index(a, b));
    }
  }
  return out;
}

bool Grid::diagonal_blocked(int a, int b) const {
  if (diagonal.empty()) return false;
  const int ia = col(a), ja = row(a), ib = col(b), jb = row(b);
  if (std::abs(ia - ib) != 1 || std::abs(ja - jb) != 1) return false;
  const bool main = (ib - ia) == (jb - ja);
  return diagonal[index(std::min(ia, ib), std::min(ja, jb))] == (main ? 2 : 1);
}

// ---------------------------------------------------------------------------
// Scan

namespace {

std::uint64_t node_seed(std::uint64_t seed, int node, int attempt) {
  Rng r(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(node + 1)) ^
        (0xBF58476D1CE4E5B9ULL * static_cast<std::uint64_t>(attempt + 1)));
  return r.next_seed();
}

// Newton from each neighbour solution; succeeds only with D distinct
// nonsingular solutions, which is then the whole solution set.
bool seed_by_newton(const PolySystem& sys, const std::vector<CPoint>& from, const CPoint& p, const ScanOptions& opts,
                    const TrackOptions& to, std::vector<CPoint>& out) {
  out.clear();
  for (const auto& x0 : from) {
    CPoint x = x0;
    if (!newton_refine(sys, x, p, opts.seed_newton_iters, 1e-12)) return false;
    if (!x.allFinite() || x.norm() > to.collapse_divergence_norm) return false;
    const auto sv = jacobian_singular_values(sys, x, p);
    if (sv.min < to.singular_svd_tol) return false;
    for (const auto& y : out) {
      if ((x - y).cwiseAbs().maxCoeff() < opts.distinct_radius * (1.0 + x.norm())) return false;
    }
    out.push_back(std::move(x));
  }
  return true;
}

// Cuts low-sigma edges along which the real solutions of one end do not
// track onto those of the other.
void cut_edges(const PolySystem& sys, Grid& g, const std::vector<std::vector<CPoint>>& reals,
               const ScanOptions& opts, TrackOptions to) {
  std::vector<double> sv;
  for (double x : g.min_sv) {
    if (std::isfinite(x)) sv.push_back(x);
  }
  g.cut.assign(g.size(), 0);
  if (sv.empty()) return;
  std::nth_element(sv.begin(), sv.begin() + static_cast<long>(sv.size() / 2), sv.end());
  const double threshold = opts.edge_check_ratio * sv[sv.size() / 2];
  to.real_mode = true;
  for (int u = 0; u < g.size(); ++u) {
    const int i = g.col(u), j = g.row(u);
    const std::array<std::pair<int, unsigned char>, 2> next{
        {{i + 1 < g.n1 ? g.index(i + 1, j) : -1, 1}, {j + 1 < g.n2 ? g.index(i, j + 1) : -1, 2}}};
    for (const auto& [v, bit] : next) {
      if (v < 0 || g.counts[u] <= 0 || g.counts[u] != g.counts[v]) continue;
      if (std::min(g.min_sv[u], g.min_sv[v]) >= threshold) continue;
      const RVector pv = g.point(v);
      const auto out = track_all(sys, ParamPath::segment(g.point(u).cast<Complex>(), pv.cast<Complex>()), reals[u], to);
      std::vector<bool> hit(reals[v].size(), false);
      bool ok = true;
      for (const auto& o : out) {
        if (!o.ok() || max_abs_imag(*o.endpoint) > opts.real_tol) {
          ok = false;
          break;
        }
        const auto m = match_endpoint(*o.endpoint, reals[v], 1e-6);
        if (!m || hit[*m]) {
          ok = false;
          break;
        }
        hit[*m] = true;
      }
      if (!ok) g.cut[u] |= bit;
    }
  }
}

}  // namespace

Grid grid_scan(const PolySystem& sys, const SolutionSet& base, const Window& window, int n1, int n2,
               std::uint64_t seed, const ScanOptions& opts) {
  const int P = sys.num_params();
  if (window.dim() != P || static_cast<int>(window.hi.size()) != P) throw DimensionError("window dimension differs from P");
  if (P > 2) throw InvalidArgument("region maps need one or two parameters");
  if (P == 1) n2 = 1;
  if (n1 < 2 || (P == 2 && n2 < 2)) throw InvalidArgument("grid needs at least 2 nodes per axis");
  for (int k = 0; k < P; ++k) {
    if (!(window.hi[k] > window.lo[k]) || !std::isfinite(window.lo[k]) || !std::isfinite(window.hi[k])) {
      throw InvalidArgument("window must have lo < hi");
    }
  }
  if (max_abs_imag(base.param) != 0.0) throw InvalidArgument("base parameter must be real");

  Grid g;
  g.window = window;
  g.n1 = n1;
  g.n2 = n2;
  g.degree = base.degree();
  g.seed = seed;
  g.counts.assign(g.size(), kSingular);
  g.min_sv.assign(g.size(), std::numeric_limits<double>::infinity());

  SolveOptions so = opts.solve;
  so.retries = std::min(so.retries, 1);

  SolutionSet last;  // last certified node
  bool have_last = false;
  std::vector<std::vector<CPoint>> row_start(n2);  // certified set at the first node of each row
  std::vector<std::vector<CPoint>> reals(g.size());
  std::vector<CPoint> sols;

  for (int j = 0; j < n2; ++j) {
    for (int s = 0; s < n1; ++s) {
      const int i = (j % 2 == 0) ? s : n1 - 1 - s;  // serpentine
      const int node = g.index(i, j);
      const CPoint p = g.point(node).cast<Complex>();

      // Neighbour seed: previous node in scan order, or the node below at a row start.
      const SolutionSet* nb = have_last ? &last : nullptr;
      SolutionSet below;
      if (s == 0 && j > 0 && !row_start[j - 1].empty()) {
        below.param = g.point(g.index(i, j - 1)).cast<Complex>();
        below.all_complex = row_start[j - 1];
        nb = &below;
      }

      std::optional<SolutionSet> got;
      for (int attempt = 0; attempt < 4 && !got; ++attempt) {
        try {
          SolutionSet cand;
          if (attempt == 0) {
            if (!nb || !seed_by_newton(sys, nb->all_complex, p, opts, so.track, sols)) continue;
            cand.param = p;
            cand.all_complex = sols;
          } else if (attempt == 1) {
            if (!nb) continue;
            cand = transport(sys, *nb, p, node_seed(seed, node, attempt), so);
          } else {
            cand = transport(sys, base, p, node_seed(seed, node, attempt), so);
          }
          got = classify_real(std::move(cand), sys, opts.real_tol);
        } catch (const NonGenericParameter&) {
        } catch (const BorderlineReal&) {
        }
      }
      if (!got) continue;
      g.counts[node] = got->num_real();
      for (int k : got->real_indices) {
        g.min_sv[node] = std::min(g.min_sv[node], jacobian_singular_values(sys, got->all_complex[k], p).min);
        reals[node].push_back(got->all_complex[k]);
      }
      if (s == 0) row_start[j] = got->all_complex;
      last = std::move(*got);
      have_last = true;
    }
  }

  // Checkerboard blocks: a region narrower than the lattice along a diagonal
  // (a cusp) shows up as diagonal-only contact; the centre count decides.
  if (n2 > 1) {
    g.diagonal.assign(g.size(), 0);
    for (int j = 0; j + 1 < n2; ++j) {
      for (int i = 0; i + 1 < n1; ++i) {
        const int a = g.counts[g.index(i, j)], b = g.counts[g.index(i + 1, j)];
        const int c = g.counts[g.index(i, j + 1)], d = g.counts[g.index(i + 1, j + 1)];
        if (a < 0 || b < 0 || c < 0 || d < 0 || a != d || b != c || a == b) continue;
        const int block = g.index(i, j);
        const CPoint p = g.point(i + 0.5, j + 0.5).cast<Complex>();
        for (int attempt = 0; attempt < 2; ++attempt) {
          try {
            const SolutionSet at =
                classify_real(transport(sys, base, p, node_seed(seed, block, 10 + attempt), so), sys, opts.real_tol);
            if (at.num_real() == a) g.diagonal[block] = 1;
            if (at.num_real() == b) g.diagonal[block] = 2;
            break;
          } catch (const NonGenericParameter&) {
          } catch (const BorderlineReal&) {
          }
        }
      }
    }
  }
  if (opts.edge_check_ratio > 0.0) cut_edges(sys, g, reals, opts, so.track);
  return g;
}

// ---------------------------------------------------------------------------
// Components and routing

namespace {

// Distance (in cells) to the nearest non-member node or window edge.
std::vector<int> boundary_depth(const Grid& g, const std::vector<int>& region_of, int r) {
  std::vector<int> depth(g.size(), -1);
  std::deque<int> q;
  for (int v = 0; v < g.size(); ++v) {
    if (region_of[v] != r) continue;
    bool border = g.on_edge(v);
    for (int u : g.neighbors4(v)) border = border || region_of[u] != r || g.is_cut(u, v);
    if (border) {
      depth[v] = 0;
      q.push_back(v);
    }
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int u : g.linked(v)) {
      if (region_of[u] == r && depth[u] < 0) {
        depth[u] = depth[v] + 1;
        q.push_back(u);
      }
    }
  }
  return depth;
}

void build_routing(const Grid& g, const std::vector<int>& region_of, Region& reg) {
  reg.parent.assign(g.size(), -1);
  std::vector<double> dist(g.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[reg.marked_cell] = 0.0;
  pq.push({0.0, reg.marked_cell});
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int u : g.linked(v)) {
      if (region_of[u] != reg.id) continue;
      // Stay away from the region boundary where the cell classification is least reliable.
      double w = 1.0 + 4.0 / (1.0 + reg.depth[u]);
      if (!reg.blocked.empty() && reg.blocked[u]) w += 1e4;
      if (d + w < dist[u]) {
        dist[u] = d + w;
        reg.parent[u] = v;
        pq.push({dist[u], u});
      }
    }
  }
}

// True when the lattice cell holding fractional coordinates (fi, fj) has all
// its corner nodes in region r and none of them blocked.
bool cell_clear(const Grid& g, const std::vector<int>& region_of, const Region& reg, double fi, double fj) {
  const int r = reg.id;
  const int i0 = static_cast<int>(std::floor(fi + 1e-9)), i1 = static_cast<int>(std::ceil(fi - 1e-9));
  const int j0 = static_cast<int>(std::floor(fj + 1e-9)), j1 = static_cast<int>(std::ceil(fj - 1e-9));
  for (int i : {i0, i1}) {
    for (int j : {j0, j1}) {
      if (i < 0 || i >= g.n1 || j < 0 || j >= g.n2) return false;
      const int n = g.index(i, j);
      if (region_of[n] != r || (!reg.blocked.empty() && reg.blocked[n])) return false;
    }
  }
  if (i0 != i1 && g.is_cut(g.index(i0, j0), g.index(i1, j0))) return false;
  if (i0 != i1 && g.is_cut(g.index(i0, j1), g.index(i1, j1))) return false;
  if (j0 != j1 && g.is_cut(g.index(i0, j0), g.index(i0, j1))) return false;
  if (j0 != j1 && g.is_cut(g.index(i1, j0), g.index(i1, j1))) return false;
  return true;
}

bool segment_clear(const Grid& g, const std::vector<int>& region_of, const Region& r, int a, int b) {
  const double ai = g.col(a), aj = g.row(a), bi = g.col(b), bj = g.row(b);
  const double len = std::hypot(bi - ai, bj - aj);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    if (!cell_clear(g, region_of, r, ai + t * (bi - ai), aj + t * (bj - aj))) return false;
  }
  return true;
}

// Greedy line-of-sight thinning of a cell chain; consecutive cells always
// stay, so the result never leaves the chain's cells.
std::vector<int> simplify(const Grid& g, const std::vector<int>& region_of, const Region& r,
                          const std::vector<int>& chain) {
  if (chain.size() <= 2) return chain;
  std::vector<int> out{chain.front()};
  size_t i = 0;
  while (i + 1 < chain.size()) {
    size_t best = i + 1;
    for (size_t j = chain.size() - 1; j > i + 1; --j) {
      if (segment_clear(g, region_of, r, chain[i], chain[j])) {
        best = j;
        break;
      }
    }
    out.push_back(chain[best]);
    i = best;
  }
  return out;
}

std::vector<int> chain_to(const Region& reg, int cell) {
  std::vector<int> chain;
  for (int v = cell; v >= 0; v = reg.parent[v]) {
    chain.push_back(v);
    if (v == reg.marked_cell) break;
  }
  if (chain.back() != reg.marked_cell) throw InvalidArgument("cell is not reachable inside its region");
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace

std::vector<Region> components(const Grid& g, const RVector& base_point, std::vector<int>& region_of) {
  region_of.assign(g.size(), -1);
  std::vector<Region> regions;
  for (int v = 0; v < g.size(); ++v) {
    if (g.counts[v] == kSingular || region_of[v] >= 0) continue;
    Region reg;
    reg.id = static_cast<int>(regions.size());
    reg.count = g.counts[v];
    std::deque<int> q{v};
    region_of[v] = reg.id;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      reg.cells.push_back(u);
      for (int w : g.linked(u)) {
        if (region_of[w] < 0 && g.counts[w] == reg.count) {
          region_of[w] = reg.id;
          q.push_back(w);
        }
      }
    }
    std::sort(reg.cells.begin(), reg.cells.end());
    regions.push_back(std::move(reg));
  }

  int base_region = -1;
  if (base_point.size() == g.window.dim() && g.window.contains(base_point)) {
    base_region = region_of[g.nearest(base_point)];
  }
  for (auto& reg : regions) {
    reg.depth = boundary_depth(g, region_of, reg.id);
    if (reg.id == base_region) {
      reg.marked_cell = g.nearest(base_point);
      reg.marked_point = base_point;
    } else {
      int best = reg.cells.front();
      for (int c : reg.cells) {
        if (reg.depth[c] > reg.depth[best]) best = c;
      }
      reg.marked_cell = best;
      reg.marked_point = g.point(best);
    }
    build_routing(g, region_of, reg);
  }
  return regions;
}

ParamPath RegionMapResult::route_to(int r, int cell) const {
  const Region& reg = regions.at(r);
  const std::vector<int> cells = simplify(grid, region_of, reg, chain_to(reg, cell));
  std::vector<CPoint> pts;
  const RVector first = grid.point(cells.front());
  if ((reg.marked_point - first).norm() > 0.0) pts.push_back(reg.marked_point.cast<Complex>());
  for (int c : cells) pts.push_back(grid.point(c).cast<Complex>());
  if (pts.size() == 1) pts.push_back(pts.front());
  return ParamPath(std::move(pts));
}

bool RegionMapResult::block_near(int r, const RVector& p, double radius, int keep) {
  Region& reg = regions.at(r);
  const std::vector<char> saved_blocked = reg.blocked;
  if (reg.blocked.empty()) reg.blocked.assign(grid.size(), 0);
  const double fi = (p[0] - grid.window.lo[0]) / grid.spacing(0);
  const double fj = grid.window.dim() > 1 ? (p[1] - grid.window.lo[1]) / grid.spacing(1) : 0.0;
  bool changed = false;
  for (int c : reg.cells) {
    if (c == reg.marked_cell || c == keep || reg.blocked[c]) continue;
    if (std::hypot(grid.col(c) - fi, grid.row(c) - fj) <= radius) {
      reg.blocked[c] = 1;
      changed = true;
    }
  }
  if (!changed) {
    reg.blocked = saved_blocked;
    return false;
  }
  build_routing(grid, region_of, reg);
  return true;
}

ParamPath RegionMapResult::hop(const CrossingSite& s) const {
  const CPoint a = grid.point(s.approach_a).cast<Complex>();
  const CPoint b = grid.point(s.approach_b).cast<Complex>();
  if (grid.window.dim() < 2) return ParamPath::segment(a, b);
  // Lattice lines can be symmetry axes of the system, and a hop along one may
  // run straight through a cusp point; every hop is nudged off the lattice.
  constexpr double kNudge = 0.173;
  const bool horizontal = grid.row(s.approach_a) == grid.row(s.approach_b);
  const int axis = horizontal ? 1 : 0;
  CPoint shift = CPoint::Zero(a.size());
  shift[axis] = (0.5 * s.offset + (s.offset < 0 ? -kNudge : kNudge)) * grid.spacing(axis);
  return ParamPath({a, a + shift, b + shift, b});
}

std::vector<std::pair<int, int>> RegionMapResult::census() const {
  std::map<int, int> m;
  for (const auto& r : regions) ++m[r.count];
  return {m.begin(), m.end()};
}

// ---------------------------------------------------------------------------
// Crossing sites

namespace {

struct Edge {
  int u, v;       // approach cells, region_of[u] < region_of[v]
  int hx, hy;     // doubled midpoint lattice coordinates
  bool special;
};

}  // namespace

std::vector<CrossingSite> crossing_sites(const Grid& g, const std::vector<Region>& regions,
                                         const std::vector<int>& region_of, int spacing) {
  (void)regions;
  if (spacing < 1) throw InvalidArgument("site spacing must be positive");
  auto special_cell = [&](int v, int gap_a, int gap_b) {
    std::set<int> seen{region_of[v]};
    for (int w : g.neighbors8(v)) {
      if (region_of[w] >= 0) {
        seen.insert(region_of[w]);
      } else if (w != gap_a && w != gap_b) {
        return true;  // singular node next to the cell
      }
    }
    return seen.size() >= 3;
  };

  std::vector<Edge> edges;
  const int dirs = g.n2 > 1 ? 2 : 1;
  for (int u = 0; u < g.size(); ++u) {
    if (region_of[u] < 0) continue;
    for (int d = 0; d < dirs; ++d) {
      const int di = d == 0 ? 1 : 0, dj = d == 0 ? 0 : 1;
      std::vector<int> gap;
      for (int k = 1; k <= 3; ++k) {
        const int i = g.col(u) + k * di, j = g.row(u) + k * dj;
        if (i >= g.n1 || j >= g.n2) break;
        const int v = g.index(i, j);
        if (region_of[v] < 0) {
          gap.push_back(v);
          continue;
        }
        if (region_of[v] != region_of[u]) {
          const int ga = gap.empty() ? -1 : gap.front(), gb = gap.empty() ? -1 : gap.back();
          Edge e{u, v, g.col(u) + g.col(v), g.row(u) + g.row(v), special_cell(u, ga, gb) || special_cell(v, ga, gb)};
          if (region_of[e.u] > region_of[e.v]) std::swap(e.u, e.v);
          edges.push_back(e);
        }
        break;
      }
    }
  }

  // Runs: edges of one region pair and kind whose midpoints are within 1.5 cells.
  std::map<std::tuple<int, int, bool>, std::vector<int>> groups;
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    groups[{region_of[edges[k].u], region_of[edges[k].v], edges[k].special}].push_back(k);
  }
  std::vector<CrossingSite> sites;
  for (const auto& [key, members] : groups) {
    std::map<std::pair<int, int>, std::vector<int>> at;
    for (int k : members) at[{edges[k].hx, edges[k].hy}].push_back(k);
    auto adjacent = [&](int k) {
      std::vector<int> out;
      for (int dx = -3; dx <= 3; ++dx) {
        for (int dy = -3; dy <= 3; ++dy) {
          if (dx * dx + dy * dy > 9) continue;
          auto it = at.find({edges[k].hx + dx, edges[k].hy + dy});
          if (it == at.end()) continue;
          for (int m : it->second) {
            if (m != k) out.push_back(m);
          }
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    std::set<int> done;
    for (int k0 : members) {
      if (done.count(k0)) continue;
      // Collect the run, then order it by a BFS from one of its ends.
      std::vector<int> run;
      std::deque<int> q{k0};
      done.insert(k0);
      while (!q.empty()) {
        const int k = q.front();
        q.pop_front();
        run.push_back(k);
        for (int m : adjacent(k)) {
          if (done.insert(m).second) q.push_back(m);
        }
      }
      auto bfs_order = [&](int start) {
        std::vector<int> order;
        std::set<int> seen{start};
        std::deque<int> qq{start};
        while (!qq.empty()) {
          const int k = qq.front();
          qq.pop_front();
          order.push_back(k);
          for (int m : adjacent(k)) {
            if (seen.insert(m).second) qq.push_back(m);
          }
        }
        return order;
      };
      const std::vector<int> order = bfs_order(bfs_order(*std::min_element(run.begin(), run.end())).back());
      for (size_t n = 0; n < order.size(); ++n) {
        if (n % spacing != 0 && n + 1 != order.size()) continue;
        const Edge& e = edges[order[n]];
        CrossingSite s;
        s.id = static_cast<int>(sites.size());
        s.region_a = region_of[e.u];
        s.region_b = region_of[e.v];
        s.approach_a = e.u;
        s.approach_b = e.v;
        s.location = 0.5 * (g.point(e.u) + g.point(e.v));
        s.special = e.special;
        const bool horizontal = g.row(e.u) == g.row(e.v);
        s.gap = (horizontal ? g.col(e.v) - g.col(e.u) : g.row(e.v) - g.row(e.u));
        s.gap = std::abs(s.gap) - 1;
        if (s.gap > 0 && g.n2 > 1) {
          // Side on which both approach cells have a same-region neighbour.
          for (int side : {1, -1}) {
            const int ia = g.col(e.u) + (horizontal ? 0 : side), ja = g.row(e.u) + (horizontal ? side : 0);
            const int ib = g.col(e.v) + (horizontal ? 0 : side), jb = g.row(e.v) + (horizontal ? side : 0);
            if (ia < 0 || ib < 0 || ja < 0 || jb < 0 || ia >= g.n1 || ib >= g.n1 || ja >= g.n2 || jb >= g.n2) continue;
            if (region_of[g.index(ia, ja)] == s.region_a && region_of[g.index(ib, jb)] == s.region_b) {
              s.offset = side;
              break;
            }
          }
        }
        sites.push_back(std::move(s));
      }
    }
  }
  return sites;
}

// ---------------------------------------------------------------------------
// Holes and punctures

namespace {

// Outer contour of a mask by Moore-neighbour tracing; cells in traversal order.
std::vector<int> trace_contour(const Grid& g, const std::vector<char>& mask) {
  int start = -1;
  for (int v = 0; v < g.size() && start < 0; ++v) {
    if (mask[v]) start = v;
  }
  if (start < 0) return {};
  static constexpr std::array<std::array<int, 2>, 8> ring = {
      {{-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}}};
  auto inside = [&](int i, int j) { return i >= 0 && i < g.n1 && j >= 0 && j < g.n2 && mask[g.index(i, j)]; };
  std::vector<int> contour{start};
  int ci = g.col(start), cj = g.row(start);
  int back = 0;  // direction (in `ring`) of the last background cell checked; west of start is background
  int second = -1;
  for (int guard = 0; guard < 8 * g.size() + 8; ++guard) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      if (inside(ci + ring[d][0], cj + ring[d][1])) {
        found = d;
        break;
      }
    }
    if (found < 0) return contour;  // isolated cell
    const int ni = ci + ring[found][0], nj = cj + ring[found][1];
    const int next = g.index(ni, nj);
    // The cell checked just before `found` is background; express it relative to the new cell.
    const int pd = (found + 7) % 8;
    const int bi = ci + ring[pd][0] - ni, bj = cj + ring[pd][1] - nj;
    int nb = 0;
    for (int d = 0; d < 8; ++d) {
      if (ring[d][0] == bi && ring[d][1] == bj) nb = d;
    }
    const int cur = g.index(ci, cj);
    if (cur == start && second >= 0 && next == second) {
      contour.pop_back();  // start was appended again on arrival
      return contour;
    }
    if (cur == start && second < 0) second = next;
    contour.push_back(next);
    ci = ni;
    cj = nj;
    back = nb;
  }
  return contour;
}

// Chebyshev dilation of `component` by d; empty when it would leave the grid
// or touch a node outside both the component and region r.
std::vector<char> dilate(const Grid& g, const std::vector<int>& component, const std::vector<int>& region_of, int r,
                         int d) {
  std::vector<char> mask(g.size(), 0);
  std::vector<char> comp(g.size(), 0);
  for (int v : component) comp[v] = 1;
  for (int v : component) {
    for (int dj = -d; dj <= d; ++dj) {
      for (int di = -d; di <= d; ++di) {
        const int i = g.col(v) + di, j = g.row(v) + dj;
        if (i < 0 || i >= g.n1 || j < 0 || j >= g.n2) return {};
        const int w = g.index(i, j);
        if (!comp[w] && region_of[w] != r) return {};
        mask[w] = 1;
      }
    }
  }
  return mask;
}

std::optional<EncirclingLoop> encircle(const Grid& g, const Region& reg, const std::vector<int>& region_of,
                                       const std::vector<int>& component, const RegionMapResult& rm) {
  for (int d = 2; d >= 1; --d) {
    const std::vector<char> mask = dilate(g, component, region_of, reg.id, d);
    if (mask.empty()) continue;
    std::vector<int> contour = trace_contour(g, mask);
    if (contour.size() < 3) continue;
    bool ok = true;
    for (int c : contour) ok = ok && region_of[c] == reg.id && (c == reg.marked_cell || reg.parent[c] >= 0);
    if (!ok) continue;
    // Attach where the routing tree reaches the ring first.
    size_t at = 0;
    size_t best_len = std::numeric_limits<size_t>::max();
    for (size_t k = 0; k < contour.size(); ++k) {
      const size_t len = chain_to(reg, contour[k]).size();
      if (len < best_len) {
        best_len = len;
        at = k;
      }
    }
    std::rotate(contour.begin(), contour.begin() + static_cast<long>(at), contour.end());
    contour.push_back(contour.front());
    // Thin each half separately; the closed chain's ends coincide.
    const size_t mid = contour.size() / 2;
    std::vector<int> ring = simplify(g, region_of, reg, {contour.begin(), contour.begin() + mid + 1});
    const std::vector<int> back = simplify(g, region_of, reg, {contour.begin() + mid, contour.end()});
    ring.insert(ring.end(), back.begin() + 1, back.end());
    std::vector<CPoint> pts;
    for (int c : ring) pts.push_back(g.point(c).cast<Complex>());
    const ParamPath around(std::move(pts));
    const ParamPath in = rm.route_to(reg.id, contour.front());
    EncirclingLoop loop;
    loop.component = component;
    RVector center = RVector::Zero(g.window.dim());
    for (int v : component) center += g.point(v);
    loop.center = center / static_cast<double>(component.size());
    loop.loop = in.then(around).then(in.reversed());
    return loop;
  }
  return std::nullopt;
}

// Bounded 8-connected components of the complement of region r.
std::vector<std::vector<int>> complement_components(const Grid& g, const std::vector<int>& region_of, int r,
                                                    int& unbounded) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(g.size(), 0);
  unbounded = 0;
  for (int v = 0; v < g.size(); ++v) {
    if (region_of[v] == r || seen[v]) continue;
    std::vector<int> comp;
    bool bounded = true;
    std::deque<int> q{v};
    seen[v] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      comp.push_back(u);
      if (g.on_edge(u)) bounded = false;
      for (int w : g.neighbors8(u)) {
        if (region_of[w] != r && !seen[w] && !g.diagonal_blocked(u, w)) {
          seen[w] = 1;
          q.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    if (bounded) {
      out.push_back(std::move(comp));
    } else {
      ++unbounded;
    }
  }
  return out;
}

RegionMapResult view(const Grid& g, std::vector<Region>& regions, const std::vector<int>& region_of) {
  RegionMapResult rm;
  rm.grid = g;
  rm.region_of = region_of;
  rm.regions = regions;
  return rm;
}

}  // namespace

void detect_punctures(const Grid& g, std::vector<Region>& regions, const std::vector<int>& region_of,
                      const std::vector<RVector>& declared, double sv_threshold) {
  if (g.n2 < 2) return;  // nothing can be encircled on a line
  const RegionMapResult rm = view(g, regions, region_of);
  for (auto& reg : regions) {
    std::set<int> covered;
    int unbounded = 0;
    for (const auto& comp : complement_components(g, region_of, reg.id, unbounded)) {
      const bool only_singular =
          std::all_of(comp.begin(), comp.end(), [&](int v) { return region_of[v] < 0; });
      if (!only_singular) continue;
      if (auto loop = encircle(g, reg, region_of, comp, rm)) {
        loop->puncture = true;
        reg.punctures.push_back(std::move(*loop));
        covered.insert(comp.begin(), comp.end());
      }
    }
    std::vector<int> dips;
    for (int c : reg.cells) {
      if (g.on_edge(c) || !(g.min_sv[c] < sv_threshold)) continue;
      bool isolated = true;
      for (int w : g.neighbors8(c)) {
        isolated = isolated && region_of[w] == reg.id && g.min_sv[w] >= g.min_sv[c];
      }
      // A point dip must also be well below the ring three cells out; a
      // valley of small singular values along a curve is not a puncture.
      const int ci = g.col(c), cj = g.row(c);
      double ring_min = std::numeric_limits<double>::infinity(), ring_max = 0.0;
      for (int dj = -3; dj <= 3 && isolated; ++dj) {
        for (int di = -3; di <= 3 && isolated; ++di) {
          if (std::max(std::abs(di), std::abs(dj)) != 3) continue;
          const int i = ci + di, j = cj + dj;
          if (i < 0 || i >= g.n1 || j < 0 || j >= g.n2) {
            isolated = false;
            break;
          }
          const int w = g.index(i, j);
          isolated = region_of[w] == reg.id && g.min_sv[c] < 0.5 * g.min_sv[w];
          ring_min = std::min(ring_min, g.min_sv[w]);
          ring_max = std::max(ring_max, g.min_sv[w]);
        }
      }
      isolated = isolated && ring_min >= 0.25 * ring_max;
      if (isolated) dips.push_back(c);
    }
    for (const auto& p : declared) {
      if (p.size() == g.window.dim() && g.window.contains(p)) {
        const int c = g.nearest(p);
        if (region_of[c] == reg.id) dips.push_back(c);
      }
    }
    std::sort(dips.begin(), dips.end());
    dips.erase(std::unique(dips.begin(), dips.end()), dips.end());
    for (int c : dips) {
      if (covered.count(c) || c == reg.marked_cell) continue;
      // Treat the dip as removed from the region while building its ring.
      std::vector<int> ro = region_of;
      ro[c] = -1;
      if (auto loop = encircle(g, reg, ro, {c}, rm)) {
        loop->puncture = true;
        reg.punctures.push_back(std::move(*loop));
        covered.insert(c);
      }
    }
  }
}

void hole_loops(const Grid& g, std::vector<Region>& regions, const std::vector<int>& region_of) {
  if (g.n2 < 2) return;
  const RegionMapResult rm = view(g, regions, region_of);
  for (auto& reg : regions) {
    int unbounded = 0;
    for (const auto& comp : complement_components(g, region_of, reg.id, unbounded)) {
      const bool only_singular =
          std::all_of(comp.begin(), comp.end(), [&](int v) { return region_of[v] < 0; });
      if (only_singular) continue;
      if (auto loop = encircle(g, reg, region_of, comp, rm)) {
        reg.holes.push_back(std::move(*loop));
      } else {
        ++reg.skipped_holes;
      }
    }
  }
}

RegionMapResult build_region_map(const PolySystem& sys, const SolutionSet& base, const Window& window, int n1,
                                 int n2, std::uint64_t seed, const RegionMapOptions& opts) {
  RegionMapResult rm;
  rm.grid = grid_scan(sys, base, window, n1, n2, seed, opts.scan);
  rm.base_point = base.param.real();
  rm.regions = components(rm.grid, rm.base_point, rm.region_of);
  if (window.contains(rm.base_point)) {
    rm.base_region = rm.region_of[rm.grid.nearest(rm.base_point)];
    if (rm.base_region < 0) throw NonGenericParameter("base point falls on a singular grid node");
  }
  detect_punctures(rm.grid, rm.regions, rm.region_of, opts.declared_singular_points);
  hole_loops(rm.grid, rm.regions, rm.region_of);
  rm.sites = crossing_sites(rm.grid, rm.regions, rm.region_of, opts.site_spacing);

  const int nr = static_cast<int>(rm.regions.size());
  rm.adjacency.assign(nr, {});
  for (const auto& s : rm.sites) {
    rm.adjacency[s.region_a].push_back(s.region_b);
    rm.adjacency[s.region_b].push_back(s.region_a);
  }
  for (auto& a : rm.adjacency) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  // Intermediate points: waypoints of the routes to the crossing sites.
  std::vector<std::set<std::pair<double, double>>> seen(nr);
  for (const auto& s : rm.sites) {
    for (auto [r, c] : {std::pair{s.region_a, s.approach_a}, std::pair{s.region_b, s.approach_b}}) {
      const ParamPath route = rm.route_to(r, c);
      for (int k = 1; k + 1 < static_cast<int>(route.waypoints.size()); ++k) {
        const RVector p = route.waypoints[k].real();
        if (seen[r].insert({p[0], p.size() > 1 ? p[1] : 0.0}).second) rm.regions[r].intermediate_points.push_back(p);
      }
    }
  }
  return rm;
}

Window builtin_window(Builtin which) {
  switch (which) {
    case Builtin::ex21:
      return {{-2.0, -2.0}, {2.0, 2.0}};
    case Builtin::univariate:
      return {{-3.0}, {3.0}};
    case Builtin::modified34:
      return {{-2.0, -2.0}, {2.0, 2.0}};
    case Builtin::kuramoto3:
      return {{-0.7, -0.7}, {0.7, 0.7}};
    case Builtin::rpr3:
      return {{0.0, 0.0}, {1100.0, 1000.0}};
  }
  throw InvalidArgument("unknown builtin");
}

}  // namespace rmono
