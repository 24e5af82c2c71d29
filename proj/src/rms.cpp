#include "rmono/rms.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>

namespace rmono {

PartialPermutation::PartialPermutation(int target_size, std::vector<int> image)
    : target_(target_size), image_(std::move(image)) {
  std::vector<bool> used(std::max(target_, 0), false);
  for (int v : image_) {
    if (v < -1 || v >= target_) throw InvalidArgument("partial permutation image out of range");
    if (v >= 0) {
      if (used[v]) throw InvalidArgument("partial permutation is not injective");
      used[v] = true;
    }
  }
}

PartialPermutation PartialPermutation::identity(int n) {
  std::vector<int> im(n);
  std::iota(im.begin(), im.end(), 0);
  return PartialPermutation(n, std::move(im));
}

PartialPermutation PartialPermutation::empty(int source, int target) {
  return PartialPermutation(target, std::vector<int>(source, -1));
}

PartialPermutation PartialPermutation::from_permutation(const Permutation& p) {
  return PartialPermutation(p.degree(), p.images());
}

std::vector<int> PartialPermutation::domain() const {
  std::vector<int> d;
  for (int i = 0; i < source_size(); ++i) {
    if (image_[i] >= 0) d.push_back(i);
  }
  return d;
}

int PartialPermutation::domain_size() const {
  return static_cast<int>(std::count_if(image_.begin(), image_.end(), [](int v) { return v >= 0; }));
}

bool PartialPermutation::is_identity() const {
  if (source_size() != target_) return false;
  for (int i = 0; i < source_size(); ++i) {
    if (image_[i] >= 0 && image_[i] != i) return false;
  }
  return true;
}

std::string PartialPermutation::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i = 0; i < source_size(); ++i) {
    if (image_[i] < 0) continue;
    if (!first) os << ", ";
    os << i + 1 << "->" << image_[i] + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

PartialPermutation compose(const PartialPermutation& a, const PartialPermutation& b) {
  if (a.target_size() != b.source_size()) throw DimensionError("composed partial maps do not meet");
  std::vector<int> im(a.source_size(), -1);
  for (int i = 0; i < a.source_size(); ++i) {
    if (a.defined(i)) im[i] = b(a(i));
  }
  return PartialPermutation(b.target_size(), std::move(im));
}

PartialPermutation invert(const PartialPermutation& a) {
  std::vector<int> im(a.target_size(), -1);
  for (int i = 0; i < a.source_size(); ++i) {
    if (a.defined(i)) im[a(i)] = i;
  }
  return PartialPermutation(a.source_size(), std::move(im));
}

PartialPermutation restrict(const PartialPermutation& a, const std::vector<int>& keep) {
  std::vector<int> im(a.source_size(), -1);
  for (int q : keep) {
    if (q >= 0 && q < a.source_size()) im[q] = a(q);
  }
  return PartialPermutation(a.target_size(), std::move(im));
}

// ---------------------------------------------------------------------------
// Generators

std::vector<SolutionSet> label_regions(const PolySystem& sys, const RegionMapResult& map, const SolutionSet& base,
                                       std::uint64_t seed, std::vector<int>* mismatch) {
  std::vector<SolutionSet> out;
  Rng rng(seed);
  for (const auto& reg : map.regions) {
    const std::uint64_t s = rng.next_seed();
    if (reg.id == map.base_region) {
      out.push_back(base);
    } else {
      out.push_back(solve_labeled(sys, reg.marked_point.cast<Complex>(), s));
    }
    if (out.back().num_real() != reg.count && mismatch) mismatch->push_back(reg.id);
  }
  return out;
}

namespace {

std::vector<CPoint> label_points(const SolutionSet& set) {
  std::vector<CPoint> pts;
  for (const auto& l : set.labels) pts.push_back(l.cast<Complex>());
  return pts;
}

// Tracks the labels of `from` along a real path ending at the parameter of
// `to`; survivors matched against `to`'s labels. Two labels landing on the
// same target indicate a path jump and are both dropped.
PartialPermutation track_labels(const PolySystem& sys, const ParamPath& path, const SolutionSet& from,
                                const SolutionSet& to, const RmsOptions& opts) {
  TrackOptions to_opts = opts.track;
  to_opts.real_mode = true;
  const auto outcomes = track_all(sys, path, label_points(from), to_opts);
  const std::vector<CPoint> targets = label_points(to);
  const RVector p = to.param.real();
  std::vector<int> im(from.labels.size(), -1);
  for (size_t k = 0; k < outcomes.size(); ++k) {
    if (!outcomes[k].ok()) continue;
    CPoint x = *outcomes[k].endpoint;
    if (max_abs_imag(x) > opts.match_radius) continue;
    RVector xr = x.real();
    newton_refine_real(sys, xr, p, 4);
    if (auto j = match_endpoint(xr.cast<Complex>(), targets, opts.match_radius)) im[k] = *j;
  }
  for (size_t a = 0; a < im.size(); ++a) {
    for (size_t b = a + 1; b < im.size(); ++b) {
      if (im[a] >= 0 && im[a] == im[b]) {
        const int v = im[a];
        for (auto& w : im) {
          if (w == v) w = -1;
        }
      }
    }
  }
  return PartialPermutation(static_cast<int>(to.labels.size()), std::move(im));
}

// First point of `path` where one of `from`'s labels fails to track.
std::optional<RVector> route_failure(const PolySystem& sys, const ParamPath& path, const SolutionSet& from,
                                     const RmsOptions& opts) {
  TrackOptions to = opts.track;
  to.real_mode = true;
  std::vector<CPoint> xs = label_points(from);
  for (int s = 0; s < path.num_segments(); ++s) {
    const CPoint& a = path.waypoints[s];
    const CPoint& b = path.waypoints[s + 1];
    if ((a - b).norm() == 0.0) continue;
    const auto out = track_all(sys, ParamPath::segment(a, b), xs, to);
    for (size_t k = 0; k < out.size(); ++k) {
      if (!out[k].ok()) {
        const double t = out[k].t_fail.value_or(0.0);
        return RVector((a + t * (b - a)).real());
      }
      xs[k] = *out[k].endpoint;
    }
  }
  return std::nullopt;
}

}  // namespace

int repair_route(const PolySystem& sys, RegionMapResult& map, int r, int cell, const SolutionSet& labels,
                 const RmsOptions& opts) {
  int repairs = 0;
  while (repairs < opts.route_repairs) {
    const auto fail = route_failure(sys, map.route_to(r, cell), labels, opts);
    if (!fail || !map.block_near(r, *fail, opts.repair_radius, cell)) break;
    ++repairs;
  }
  return repairs;
}

Correspondence crossing_generator(const PolySystem& sys, const RegionMapResult& map, const CrossingSite& site,
                                  const std::vector<SolutionSet>& labels, const RmsOptions& opts) {
  if (site.region_a == site.region_b) throw InvalidArgument("crossing site joins a region to itself");
  Correspondence c;
  c.from_region = site.region_a;
  c.to_region = site.region_b;
  c.site = site.id;
  c.witness = map.route_to(site.region_a, site.approach_a)
                  .then(map.hop(site))
                  .then(map.route_to(site.region_b, site.approach_b).reversed());
  c.map = track_labels(sys, c.witness, labels.at(c.from_region), labels.at(c.to_region), opts);
  return c;
}

PartialPermutation hole_generator(const PolySystem& sys, const ParamPath& loop, const SolutionSet& labels,
                                  const RmsOptions& opts) {
  const double scale = 1e-9 * (1.0 + labels.param.norm());
  if ((loop.front() - labels.param).norm() > scale || (loop.back() - labels.param).norm() > scale) {
    throw InvalidArgument("loop must start and end at the marked point");
  }
  return track_labels(sys, loop, labels, labels, opts);
}

// ---------------------------------------------------------------------------
// Groupoid

namespace {

struct Step {
  GeneratorRef ref;
  int to;
  PartialPermutation map;
};

struct State {
  int region;
  PartialPermutation map;
  int parent;
  GeneratorRef via;
};

std::vector<std::vector<int>> subsets(const std::vector<int>& items) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(items.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int b = 0; b < n; ++b) {
      if (mask & (1 << b)) s.push_back(items[b]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

GroupoidResult groupoid_closure(const RegionMapResult& map, const std::vector<SolutionSet>& labels,
                                const std::vector<Correspondence>& correspondences,
                                const std::vector<LoopGenerator>& loops, int base_region, std::size_t max_states) {
  const int nr = static_cast<int>(map.regions.size());
  if (base_region < 0 || base_region >= nr) throw InvalidArgument("base region out of range");
  std::vector<std::vector<Step>> out(nr);
  for (int k = 0; k < static_cast<int>(correspondences.size()); ++k) {
    const auto& c = correspondences[k];
    out[c.from_region].push_back({{GeneratorRef::Kind::crossing, k, false}, c.to_region, c.map});
    out[c.to_region].push_back({{GeneratorRef::Kind::crossing, k, true}, c.from_region, invert(c.map)});
  }
  for (int k = 0; k < static_cast<int>(loops.size()); ++k) {
    const auto& l = loops[k];
    out[l.region].push_back({{GeneratorRef::Kind::loop, k, false}, l.region, l.map});
    out[l.region].push_back({{GeneratorRef::Kind::loop, k, true}, l.region, invert(l.map)});
  }

  const int R = static_cast<int>(labels.at(base_region).labels.size());
  std::vector<State> states;
  std::set<std::pair<int, PartialPermutation>> seen;
  states.push_back({base_region, PartialPermutation::identity(R), -1, {}});
  seen.insert({base_region, states.front().map});
  auto word_of = [&](int idx) {
    std::vector<GeneratorRef> w;
    for (int i = idx; states[i].parent >= 0; i = states[i].parent) w.push_back(states[i].via);
    std::reverse(w.begin(), w.end());
    return w;
  };

  GroupoidResult res;
  for (size_t head = 0; head < states.size(); ++head) {
    if (states[head].region == base_region && !res.witness.count(states[head].map)) {
      res.closure.insert(states[head].map);
      res.witness[states[head].map] = word_of(static_cast<int>(head));
    }
    for (const auto& step : out[states[head].region]) {
      PartialPermutation next = compose(states[head].map, step.map);
      if (next.domain_size() == 0) continue;
      if (!seen.insert({step.to, next}).second) continue;
      states.push_back({step.to, std::move(next), static_cast<int>(head), step.ref});
      if (states.size() > max_states) throw StateExplosion("groupoid search exceeded the state limit");
    }
  }
  res.states = states.size();

  // Close under restriction; compositions and inverses of restrictions are
  // restrictions of elements already present.
  const std::vector<PartialPermutation> found(res.closure.begin(), res.closure.end());
  for (const auto& e : found) {
    const auto word = res.witness.at(e);
    for (const auto& keep : subsets(e.domain())) {
      PartialPermutation r = restrict(e, keep);
      if (res.closure.insert(r).second) res.witness[r] = word;
    }
  }
  return res;
}

ParamPath witness_path(const std::vector<GeneratorRef>& word, const std::vector<Correspondence>& correspondences,
                       const std::vector<LoopGenerator>& loops) {
  ParamPath path;
  for (const auto& g : word) {
    const ParamPath& piece =
        g.kind == GeneratorRef::Kind::crossing ? correspondences.at(g.index).witness : loops.at(g.index).loop;
    path = path.then(g.inverse ? piece.reversed() : piece);
  }
  return path;
}

// ---------------------------------------------------------------------------
// Structure

RealMonodromyStructure build_structure(const std::set<PartialPermutation>& closure, int R) {
  RealMonodromyStructure s;
  s.R = R;
  s.closure = closure;
  s.G.assign(R, {});
  for (const auto& pi : closure) {
    if (pi.source_size() != R || pi.target_size() != R) throw DimensionError("closure element has the wrong size");
    for (const auto& q : subsets(pi.domain())) {
      if (q.empty()) continue;
      std::vector<int> img;
      for (int v : q) img.push_back(pi(v));
      s.G[q.size() - 1][q].insert(std::move(img));
    }
  }
  return s;
}

namespace {

long falling(int n, int k) {
  long f = 1;
  for (int i = 0; i < k; ++i) f *= n - i;
  return f;
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

bool is_k_transitive(const RealMonodromyStructure& s, int k) {
  if (k < 1 || k > s.R) return false;
  for (const auto& q : k_subsets(s.R, k)) {
    auto it = s.g(k).find(q);
    if (it == s.g(k).end() || static_cast<long>(it->second.size()) != falling(s.R, k)) return false;
  }
  return true;
}

std::set<Permutation> real_monodromy_group(const RealMonodromyStructure& s) {
  std::set<Permutation> out;
  for (const auto& pi : s.closure) {
    if (pi.full()) out.insert(Permutation(pi.image()));
  }
  return out;
}

std::set<std::pair<int, int>> assembly_mode_changes(const RealMonodromyStructure& s) {
  std::set<std::pair<int, int>> out;
  if (s.R == 0) return out;
  for (const auto& [q, imgs] : s.g(1)) {
    for (const auto& img : imgs) {
      if (img[0] != q[0]) out.insert({std::min(q[0], img[0]), std::max(q[0], img[0])});
    }
  }
  return out;
}

std::vector<OrbitLine> nontrivial_lines(const RealMonodromyStructure& s, int k) {
  std::map<std::set<std::vector<int>>, std::vector<std::vector<int>>> by_images;
  for (const auto& [q, imgs] : s.g(k)) {
    if (imgs.size() == 1 && *imgs.begin() == q) continue;
    by_images[imgs].push_back(q);
  }
  std::vector<OrbitLine> lines;
  for (auto& [imgs, qs] : by_images) lines.push_back({qs, imgs});
  std::sort(lines.begin(), lines.end(), [](const OrbitLine& a, const OrbitLine& b) { return a.sources < b.sources; });
  return lines;
}

namespace {

std::string tuple_str(const std::vector<int>& t) {
  std::string out = "{";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i] + 1);
  }
  return out + "}";
}

std::string generic_tuple(int k) {
  std::string out = "{";
  for (int i = 1; i <= k; ++i) {
    if (i > 1) out += ',';
    out += "q" + std::to_string(i);
  }
  return out + "}";
}

}  // namespace

std::string format_structure(const RealMonodromyStructure& s) {
  std::ostringstream os;
  for (int k = 1; k <= s.R; ++k) {
    os << "G_" << k << '\n';
    const auto lines = nontrivial_lines(s, k);
    size_t covered = 0;
    for (const auto& line : lines) {
      os << "  ";
      for (size_t i = 0; i < line.sources.size(); ++i) os << (i ? "," : "") << tuple_str(line.sources[i]);
      os << " ↦ {";
      bool first = true;
      for (const auto& img : line.images) {
        os << (first ? "" : ",") << tuple_str(img);
        first = false;
      }
      os << "}\n";
      covered += line.sources.size();
    }
    const std::string g = generic_tuple(k);
    if (covered == 0) {
      os << "  " << g << " ↦ {" << g << "}\n";
    } else if (covered < k_subsets(s.R, k).size()) {
      os << "  " << g << " ↦ {" << g << "} for all others\n";
    }
  }
  return os.str();
}

std::vector<std::vector<int>> label_partition(const RealMonodromyStructure& s) {
  std::vector<std::vector<int>> parts;
  std::vector<bool> placed(s.R, false);
  if (s.R == 0) return parts;
  for (const auto& line : nontrivial_lines(s, 1)) {
    std::vector<int> orbit;
    for (const auto& q : line.sources) orbit.push_back(q[0]);
    for (int v : orbit) placed[v] = true;
    parts.push_back(orbit);
  }
  std::vector<int> entangled, inert;
  for (int i = 0; i < s.R; ++i) {
    if (placed[i]) continue;
    bool moves = false;
    for (int k = 2; k <= s.R && !moves; ++k) {
      for (const auto& line : nontrivial_lines(s, k)) {
        for (const auto& q : line.sources) moves = moves || std::find(q.begin(), q.end(), i) != q.end();
      }
    }
    (moves ? entangled : inert).push_back(i);
  }
  if (!entangled.empty()) parts.push_back(entangled);
  if (!inert.empty()) parts.push_back(inert);
  std::sort(parts.begin(), parts.end());
  return parts;
}

std::string format_partition(const std::vector<std::vector<int>>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " | ";
    out += tuple_str(parts[i]);
  }
  return out;
}

RealMonodromyStructure relabel(const RealMonodromyStructure& s, const Permutation& sigma) {
  const PartialPermutation sg = PartialPermutation::from_permutation(sigma);
  const PartialPermutation inv = invert(sg);
  std::set<PartialPermutation> closure;
  for (const auto& pi : s.closure) closure.insert(compose(compose(inv, pi), sg));
  return build_structure(closure, s.R);
}

// ---------------------------------------------------------------------------
// Pipeline

RealStructureResult real_structure(const PolySystem& sys, const RegionMapResult& map, const SolutionSet& base,
                                   std::uint64_t seed, const std::vector<ParamPath>& user_loops,
                                   const RmsOptions& opts) {
  if (map.base_region < 0) throw InvalidArgument("region map has no base region");
  RealStructureResult res;
  res.labels = label_regions(sys, map, base, seed, &res.count_mismatch);

  RegionMapResult rm = map;  // routing trees get repaired in place
  std::set<std::tuple<int, int, PartialPermutation>> seen;
  for (const auto& site : rm.sites) {
    Correspondence c;
    try {
      res.routes_repaired += repair_route(sys, rm, site.region_a, site.approach_a, res.labels[site.region_a], opts);
      res.routes_repaired += repair_route(sys, rm, site.region_b, site.approach_b, res.labels[site.region_b], opts);
      c = crossing_generator(sys, rm, site, res.labels, opts);
    } catch (const AmbiguousMatch&) {
      continue;
    }
    ++res.sites_tracked;
    if (c.map.domain_size() == 0) continue;
    if (seen.insert({c.from_region, c.to_region, c.map}).second) res.correspondences.push_back(std::move(c));
  }
  for (const auto& reg : map.regions) {
    for (const auto* list : {&reg.holes, &reg.punctures}) {
      for (const auto& h : *list) {
        try {
          LoopGenerator g{reg.id, hole_generator(sys, h.loop, res.labels[reg.id], opts), h.loop,
                          h.puncture ? "puncture" : "hole"};
          res.loops.push_back(std::move(g));
        } catch (const AmbiguousMatch&) {
        }
      }
    }
  }
  for (const auto& loop : user_loops) {
    res.loops.push_back(
        {map.base_region, hole_generator(sys, loop, res.labels[map.base_region], opts), loop, "user"});
  }
  res.groupoid = groupoid_closure(map, res.labels, res.correspondences, res.loops, map.base_region, opts.max_states);
  res.structure = build_structure(res.groupoid.closure, base.num_real());
  return res;
}

}  // namespace rmono
