#include "rmono/cmono.hpp"

#include <cctype>
#include <cmath>
#include <deque>
#include <sstream>

namespace rmono {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= degree() || seen[v]) throw InvalidArgument("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(int degree) {
  std::vector<int> im(degree);
  for (int i = 0; i < degree; ++i) im[i] = i;
  return Permutation(std::move(im));
}

Permutation Permutation::from_cycles(std::string_view text, int degree) {
  std::vector<int> im(degree);
  for (int i = 0; i < degree; ++i) im[i] = i;
  std::vector<int> cycle;
  std::vector<char> seen(degree, 0);
  bool open = false;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(') {
      if (open) throw InvalidArgument("nested cycle");
      open = true;
      cycle.clear();
      ++i;
    } else if (c == ')') {
      if (!open) throw InvalidArgument("unbalanced ')'");
      for (size_t k = 0; k < cycle.size(); ++k) im[cycle[k]] = cycle[(k + 1) % cycle.size()];
      open = false;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      const int v = std::stoi(std::string(text.substr(i, j - i))) - 1;
      if (v < 0 || v >= degree) throw InvalidArgument("cycle entry out of range");
      if (seen[v]++) throw InvalidArgument("point repeated in cycle notation");
      cycle.push_back(v);
      i = j;
    } else {
      ++i;
    }
  }
  if (open) throw InvalidArgument("unterminated cycle");
  return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < degree(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.degree() != degree()) throw DimensionError("permutation degrees differ");
  std::vector<int> im(degree());
  for (int i = 0; i < degree(); ++i) im[i] = next.images_[images_[i]];
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<int> im(degree());
  for (int i = 0; i < degree(); ++i) im[images_[i]] = i;
  return Permutation(std::move(im));
}

std::string Permutation::cycles() const {
  std::ostringstream os;
  std::vector<bool> seen(degree(), false);
  for (int i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    os << '(' << i + 1;
    seen[i] = true;
    for (int j = images_[i]; j != i; j = images_[j]) {
      os << ' ' << j + 1;
      seen[j] = true;
    }
    os << ')';
  }
  const std::string s = os.str();
  return s.empty() ? "(1)" : s;
}

MonodromyGroup::MonodromyGroup(int degree) : degree_(degree) { elements_.insert(Permutation::identity(degree)); }

bool MonodromyGroup::add(const Permutation& p, const ParamPath& loop) {
  if (p.degree() != degree_) throw DimensionError("generator degree differs from group degree");
  if (elements_.count(p)) return false;
  generators_.push_back({p, loop});
  // Breadth-first closure: right-multiply every element by every generator.
  std::deque<Permutation> queue(elements_.begin(), elements_.end());
  while (!queue.empty()) {
    const Permutation e = queue.front();
    queue.pop_front();
    for (const auto& g : generators_) {
      Permutation q = e.then(g.perm);
      if (elements_.insert(q).second) queue.push_back(std::move(q));
    }
  }
  return true;
}

bool MonodromyGroup::is_full_symmetric() const {
  long f = 1;
  for (int k = 2; k <= degree_; ++k) f *= k;
  return order() == f;
}

ParamPath circle_loop(Complex center, Complex base_t, double radius, const AffineLine& line, int vertices) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  if (vertices < 3) throw InvalidArgument("circle needs at least 3 vertices");
  if (std::abs(base_t - center) <= radius) throw InvalidArgument("base point must lie outside the circle");
  const double a0 = std::arg(base_t - center);
  std::vector<CPoint> pts;
  pts.push_back(line.at(base_t));
  for (int k = 0; k <= vertices; ++k) {
    const double a = a0 + 2.0 * M_PI * k / vertices;
    pts.push_back(line.at(center + std::polar(radius, a)));
  }
  pts.push_back(line.at(base_t));
  return ParamPath(std::move(pts));
}

ParamPath random_loop(const CPoint& base, std::uint64_t seed, double scale) {
  Rng rng(seed);
  const Eigen::Index n = base.size();
  auto draw = [&]() {
    CPoint dir(n);
    for (Eigen::Index k = 0; k < n; ++k) dir[k] = Complex(rng.normal(), rng.normal());
    const double r = std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
    return CPoint(base + (scale * r / dir.norm()) * dir);
  };
  const CPoint z1 = draw();
  const CPoint z2 = draw();
  return ParamPath({base, z1, z2, base});
}

namespace {

bool degenerate(const ParamPath& path) {
  for (const auto& w : path.waypoints) {
    if (w != path.waypoints.front()) return false;
  }
  return true;
}

std::optional<Permutation> try_loop(const PolySystem& sys, const SolutionSet& base, const ParamPath& loop,
                                    const TrackOptions& to, double radius) {
  const auto outcomes = track_all(sys, loop, base.all_complex, to);
  std::vector<int> im;
  std::vector<bool> used(base.degree(), false);
  for (const auto& o : outcomes) {
    if (!o.ok()) return std::nullopt;
    CPoint x = *o.endpoint;
    newton_refine(sys, x, base.param, 3);
    std::optional<int> j;
    try {
      j = match_endpoint(x, base.all_complex, radius);
    } catch (const AmbiguousMatch&) {
      return std::nullopt;
    }
    if (!j || used[*j]) return std::nullopt;
    used[*j] = true;
    im.push_back(*j);
  }
  return Permutation(std::move(im));
}

}  // namespace

Permutation loop_permutation(const PolySystem& sys, const SolutionSet& base, const ParamPath& loop,
                             const MonodromyOptions& opts, std::uint64_t seed, ParamPath* used_loop) {
  if (loop.waypoints.empty() || (loop.front() - base.param).norm() > 1e-12 * (1.0 + base.param.norm()) ||
      (loop.back() - base.param).norm() > 1e-12 * (1.0 + base.param.norm())) {
    throw InvalidArgument("loop must start and end at the base parameter");
  }
  if (degenerate(loop)) {
    if (used_loop) *used_loop = loop;
    return Permutation::identity(base.degree());
  }
  TrackOptions to = opts.track;
  to.real_mode = false;
  if (auto p = try_loop(sys, base, loop, to, opts.match_radius)) {
    if (used_loop) *used_loop = loop;
    return *p;
  }
  ParamPath detoured = loop;
  detoured.detour_flags.assign(loop.num_segments(), true);
  detoured = resolve_detours(detoured, seed, to.detour_size * 0.2);
  if (auto p = try_loop(sys, base, detoured, to, opts.match_radius)) {
    if (used_loop) *used_loop = detoured;
    return *p;
  }
  throw LoopThroughDiscriminant("loop passes too close to the discriminant");
}

MonodromyGroup monodromy_group(const PolySystem& sys, const SolutionSet& base, std::uint64_t seed,
                               const MonodromyOptions& opts) {
  MonodromyGroup group(base.degree());
  Rng rng(seed);
  const double scale = opts.scale > 0.0 ? opts.scale : 2.0 * (1.0 + base.param.norm());
  int quiet = 0;
  for (int k = 0; k < opts.max_loops && quiet < opts.stall; ++k) {
    const ParamPath loop = random_loop(base.param, rng.next_seed(), scale);
    const std::uint64_t detour_seed = rng.next_seed();
    ParamPath used;
    try {
      const Permutation p = loop_permutation(sys, base, loop, opts, detour_seed, &used);
      if (group.add(p, used)) {
        quiet = 0;
      } else {
        ++quiet;
      }
    } catch (const LoopThroughDiscriminant&) {
      continue;
    }
    if (group.is_full_symmetric()) break;
  }
  return group;
}

}  // namespace rmono
