#include "rmono/solver.hpp"

#include <algorithm>
#include <cmath>

namespace rmono {

namespace {

// Rounded lexicographic key: real parts first, then imaginary parts.
bool canonical_less(const CPoint& a, const CPoint& b) {
  auto key = [](double v) { return std::round(v * 1e8); };
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double ka = key(a[k].real()), kb = key(b[k].real());
    if (ka != kb) return ka < kb;
  }
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double ka = key(a[k].imag()), kb = key(b[k].imag());
    if (ka != kb) return ka < kb;
  }
  return false;
}

double dist(const CPoint& a, const CPoint& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Refines, filters nonsingular finite endpoints and merges duplicates.
// Returns false when two endpoints coincide (a path was lost or jumped).
bool collect(const PolySystem& sys, const CPoint& p, const std::vector<TrackOutcome>& outcomes,
             const SolveOptions& opts, std::vector<CPoint>& out) {
  out.clear();
  bool distinct = true;
  for (const auto& o : outcomes) {
    if (!o.ok()) continue;
    CPoint x = *o.endpoint;
    newton_refine(sys, x, p, 4);
    if (jacobian_singular_values(sys, x, p).min <= opts.track.singular_svd_tol) continue;
    bool dup = false;
    for (const auto& y : out) {
      if (dist(x, y) <= opts.dedupe_radius * (1.0 + x.norm())) dup = true;
    }
    if (dup) {
      distinct = false;
      continue;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return distinct;
}

bool same_set(const std::vector<CPoint>& a, const std::vector<CPoint>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool found = false;
    for (const auto& y : b) found = found || dist(x, y) <= 1e-6 * (1.0 + x.norm());
    if (!found) return false;
  }
  return true;
}

}  // namespace

SolutionSet solve_at(const PolySystem& sys, const CPoint& p, std::uint64_t seed, const SolveOptions& opts) {
  if (p.size() != sys.num_params()) throw DimensionError("parameter point has the wrong dimension");
  Rng rng(seed);
  std::vector<CPoint> previous;
  bool have_previous = false;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    TotalDegreeStart start{rng.unit_complex(), {}};
    for (int i = 0; i < sys.num_vars(); ++i) start.constants.push_back(rng.unit_complex());
    std::vector<TrackOutcome> outcomes;
    for (const auto& x0 : total_degree_start_points(sys, start)) {
      outcomes.push_back(track_total_degree(sys, p, start, x0, opts.track));
    }
    std::vector<CPoint> sols;
    const bool distinct = collect(sys, p, outcomes, opts, sols);
    if (!distinct) {
      have_previous = false;
      continue;
    }
    // Two independent start systems must agree before the count is trusted.
    if (have_previous && same_set(previous, sols)) {
      SolutionSet set;
      set.param = p;
      set.all_complex = std::move(sols);
      set.seed = seed;
      return set;
    }
    previous = std::move(sols);
    have_previous = true;
  }
  throw NonGenericParameter("solution count unstable at this parameter point");
}

SolutionSet classify_real(SolutionSet set, const PolySystem& sys, double tol) {
  set.real_indices.clear();
  set.labels.clear();
  set.label_index.clear();
  set.classified = true;
  if (max_abs_imag(set.param) != 0.0) return set;
  const RVector p = set.param.real();
  for (int k = 0; k < set.degree(); ++k) {
    CPoint& x = set.all_complex[k];
    newton_refine(sys, x, set.param, 3);
    const double im = max_abs_imag(x);
    if (im >= 1e-8 && im <= 1e-4) {
      throw BorderlineReal("solution with imaginary part " + std::to_string(im) + " is too close to real");
    }
    if (im < tol) {
      RVector xr = x.real();
      newton_refine_real(sys, xr, p, 4);
      x = xr.cast<Complex>();
      set.real_indices.push_back(k);
    }
  }
  return set;
}

SolutionSet assign_labels(SolutionSet set, const std::optional<std::vector<RVector>>& override) {
  if (!set.classified) throw InvalidArgument("assign_labels requires classify_real first");
  std::vector<int> order = set.real_indices;
  if (override) {
    if (override->size() != order.size()) {
      throw InvalidArgument("label override lists " + std::to_string(override->size()) + " points but there are " +
                            std::to_string(order.size()) + " real solutions");
    }
    std::vector<int> matched;
    std::vector<bool> used(order.size(), false);
    for (const auto& q : *override) {
      if (q.size() != (set.all_complex.empty() ? 0 : set.all_complex[0].size())) {
        throw DimensionError("label override point has the wrong dimension");
      }
      int hit = -1;
      for (size_t j = 0; j < order.size(); ++j) {
        if ((set.all_complex[order[j]].real() - q).cwiseAbs().maxCoeff() <= 1e-6) {
          if (hit >= 0) throw InvalidArgument("label override point matches two solutions");
          hit = static_cast<int>(j);
        }
      }
      if (hit < 0 || used[hit]) throw InvalidArgument("label override is not a bijection onto the real solutions");
      used[hit] = true;
      matched.push_back(order[hit]);
    }
    order = matched;
  } else {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return canonical_less(set.all_complex[a], set.all_complex[b]); });
  }
  set.labels.clear();
  set.label_index = order;
  for (int k : order) set.labels.push_back(set.all_complex[k].real());
  return set;
}

SolutionSet solve_labeled(const PolySystem& sys, const CPoint& p, std::uint64_t seed,
                          const std::optional<std::vector<RVector>>& override, const SolveOptions& opts) {
  return assign_labels(classify_real(solve_at(sys, p, seed, opts), sys), override);
}

SolutionSet transport(const PolySystem& sys, const SolutionSet& from, const CPoint& target, std::uint64_t seed,
                      const SolveOptions& opts) {
  Rng rng(seed);
  if ((from.param - target).norm() == 0.0) {
    SolutionSet same = from;
    same.real_indices.clear();
    same.labels.clear();
    same.label_index.clear();
    same.classified = false;
    return same;
  }
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    TrackOptions to = opts.track;
    to.real_mode = false;
    to.detour_seed = rng.next_seed();
    const auto outcomes = track_all(sys, ParamPath::segment(from.param, target, true), from.all_complex, to);
    std::vector<CPoint> sols;
    const bool distinct = collect(sys, target, outcomes, opts, sols);
    if (distinct && static_cast<int>(sols.size()) == from.degree()) {
      SolutionSet set;
      set.param = target;
      set.all_complex = std::move(sols);
      set.seed = seed;
      return set;
    }
  }
  throw NonGenericParameter("transport lost solutions; target is on or near the discriminant");
}

bool conjugate_paired(const SolutionSet& set, double tol) {
  if (max_abs_imag(set.param) != 0.0) return true;
  for (const auto& x : set.all_complex) {
    const CPoint c = x.conjugate();
    bool found = false;
    for (const auto& y : set.all_complex) found = found || dist(c, y) <= tol * (1.0 + x.norm());
    if (!found) return false;
  }
  return true;
}

SolutionSet reorder_complex(SolutionSet set, const std::vector<CPoint>& order) {
  if (order.size() != set.all_complex.size()) throw InvalidArgument("reorder list has the wrong length");
  std::vector<CPoint> out;
  std::vector<bool> used(order.size(), false);
  for (const auto& q : order) {
    const auto hit = match_endpoint(q, set.all_complex, 1e-6);
    if (!hit || used[*hit]) throw InvalidArgument("reorder list is not a bijection onto the solutions");
    used[*hit] = true;
    out.push_back(set.all_complex[*hit]);
  }
  set.all_complex = std::move(out);
  set.real_indices.clear();
  set.labels.clear();
  set.label_index.clear();
  set.classified = false;
  return set;
}

namespace {

RVector rvec(std::initializer_list<double> v) {
  RVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double d : v) out[k++] = d;
  return out;
}

}  // namespace

std::optional<std::vector<RVector>> builtin_label_override(Builtin which) {
  const double h = std::sqrt(3.0) / 2.0;
  switch (which) {
    case Builtin::kuramoto3:
      return std::vector<RVector>{rvec({0, 1, 0, 1}),    rvec({0, 1, 0, -1}),      rvec({0, -1, 0, 1}),
                                  rvec({0, -1, 0, -1}),  rvec({h, -0.5, -h, -0.5}), rvec({-h, -0.5, h, -0.5})};
    case Builtin::modified34:
      // The two solutions of x1^2 - x2^2 = p1, 2 x1 x2 = p2 come first: they
      // are the pair that survives the loop around the origin.
      return std::vector<RVector>{rvec({0, 1}), rvec({0, -1}), rvec({1, 0}), rvec({-1, 0})};
    default:
      return std::nullopt;
  }
}

CPoint builtin_base(Builtin which) {
  auto cp = [](std::initializer_list<double> v) { return CPoint(rvec(v).cast<Complex>()); };
  switch (which) {
    case Builtin::ex21:
      return cp({1, 0});
    case Builtin::univariate:
      return cp({2});
    case Builtin::modified34:
      return cp({-1, 0});
    case Builtin::kuramoto3:
      return cp({0, 0});
    case Builtin::rpr3:
      return cp({75, 70});
  }
  throw InvalidArgument("unknown builtin");
}

}  // namespace rmono
