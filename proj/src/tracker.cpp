#include "rmono/tracker.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <type_traits>
#include <limits>

namespace rmono {

ParamPath::ParamPath(std::vector<CPoint> pts, std::vector<bool> flags)
    : waypoints(std::move(pts)), detour_flags(std::move(flags)) {}

ParamPath ParamPath::segment(const CPoint& from, const CPoint& to, bool detour) {
  return ParamPath({from, to}, {detour});
}

bool ParamPath::is_real() const {
  for (bool f : detour_flags) {
    if (f) return false;
  }
  for (const auto& w : waypoints) {
    if (max_abs_imag(w) != 0.0) return false;
  }
  return true;
}

ParamPath ParamPath::reversed() const {
  ParamPath out;
  out.waypoints.assign(waypoints.rbegin(), waypoints.rend());
  out.detour_flags.assign(detour_flags.rbegin(), detour_flags.rend());
  return out;
}

ParamPath ParamPath::then(const ParamPath& next) const {
  if (waypoints.empty()) return next;
  if (next.waypoints.empty()) return *this;
  if ((waypoints.back() - next.waypoints.front()).norm() > 1e-12 * (1.0 + waypoints.back().norm())) {
    throw InvalidArgument("concatenated paths do not meet");
  }
  ParamPath out = *this;
  if (out.detour_flags.empty()) out.detour_flags.assign(num_segments(), false);
  out.waypoints.insert(out.waypoints.end(), next.waypoints.begin() + 1, next.waypoints.end());
  if (next.detour_flags.empty()) {
    out.detour_flags.insert(out.detour_flags.end(), next.num_segments(), false);
  } else {
    out.detour_flags.insert(out.detour_flags.end(), next.detour_flags.begin(), next.detour_flags.end());
  }
  return out;
}

void ParamPath::validate() const {
  if (waypoints.size() < 2) throw InvalidArgument("path needs at least two waypoints");
  if (!detour_flags.empty() && static_cast<int>(detour_flags.size()) != num_segments()) {
    throw InvalidArgument("detour flag count must equal segment count");
  }
  for (size_t k = 0; k < waypoints.size(); ++k) {
    if (waypoints[k].size() != waypoints[0].size()) throw DimensionError("waypoints differ in dimension");
    if (!waypoints[k].allFinite()) throw InvalidArgument("non-finite waypoint");
  }
}

void TrackOptions::validate() const {
  if (!(newton_tol > 0 && initial_step > 0 && min_step > 0 && max_step > 0 && step_expand > 0 &&
        step_shrink > 0 && divergence_norm > 0 && singular_svd_tol > 0 && max_newton_iters > 0)) {
    throw InvalidArgument("tracking options must be positive");
  }
  if (!(min_step < initial_step && initial_step <= 1.0)) {
    throw InvalidArgument("need min_step < initial_step <= 1");
  }
  if (!(step_shrink < 1.0 && step_expand > 1.0)) throw InvalidArgument("need step_shrink < 1 < step_expand");
}

const char* to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::Success:
      return "success";
    case TrackStatus::Diverged:
      return "diverged";
    case TrackStatus::Singular:
      return "singular";
    case TrackStatus::StepFailure:
      return "step_failure";
  }
  return "?";
}

namespace {

// Path with detours resolved, plus the original segment each piece belongs to
// and the fraction of that segment it spans.
struct ResolvedPath {
  ParamPath path;
  std::vector<int> origin;
  std::vector<double> piece_start;
  std::vector<double> piece_len;
  int original_segments = 0;
};

ResolvedPath resolve(const ParamPath& path, std::uint64_t seed, double size) {
  ResolvedPath r;
  r.original_segments = path.num_segments();
  Rng rng(seed);
  r.path.waypoints.push_back(path.waypoints.front());
  for (int k = 0; k < path.num_segments(); ++k) {
    const CPoint& a = path.waypoints[k];
    const CPoint& b = path.waypoints[k + 1];
    if (path.detour(k)) {
      const double len = (b - a).norm();
      CPoint mid = 0.5 * (a + b);
      for (Eigen::Index j = 0; j < mid.size(); ++j) {
        mid[j] += size * len * Complex(rng.normal(), rng.normal()) / std::sqrt(2.0 * mid.size());
      }
      r.path.waypoints.push_back(mid);
      r.origin.push_back(k);
      r.piece_start.push_back(0.0);
      r.piece_len.push_back(0.5);
      r.origin.push_back(k);
      r.piece_start.push_back(0.5);
      r.piece_len.push_back(0.5);
    } else {
      r.origin.push_back(k);
      r.piece_start.push_back(0.0);
      r.piece_len.push_back(1.0);
    }
    r.path.waypoints.push_back(b);
  }
  return r;
}

template <class S>
SmallVec<S> cast_point(const CPoint& v) {
  if constexpr (std::is_same_v<S, double>) {
    return v.real();
  } else {
    return v;
  }
}

template <class S>
CPoint to_cpoint(const SmallVec<S>& v) {
  if constexpr (std::is_same_v<S, double>) {
    return v.template cast<Complex>();
  } else {
    return v;
  }
}

template <class S>
struct SegmentHomotopy {
  const PolySystem& sys;
  SmallVec<S> a;
  SmallVec<S> d;

  void eval(const SmallVec<S>& x, double s, SmallVec<S>* h, SmallMat<S>* hx, SmallVec<S>* hs) const {
    const SmallVec<S> p = a + s * d;
    if (hs) {
      SmallMat<S> jp;
      sys.eval<S>(x, p, h, hx, &jp);
      *hs = jp * d;
    } else {
      sys.eval<S>(x, p, h, hx, nullptr);
    }
  }
};

struct TotalDegreeHomotopy {
  const PolySystem& sys;
  SmallVec<Complex> p;
  Complex gamma;
  std::vector<Complex> constants;

  void eval(const SmallVec<Complex>& x, double s, SmallVec<Complex>* h, SmallMat<Complex>* hx,
            SmallVec<Complex>* hs) const {
    const int n = sys.num_vars();
    SmallVec<Complex> f;
    SmallMat<Complex> fx;
    sys.eval<Complex>(x, p, &f, hx ? &fx : nullptr, nullptr);
    SmallVec<Complex> g(n);
    SmallVec<Complex> dg(n);
    for (int i = 0; i < n; ++i) {
      const int d = sys.degrees()[i];
      const Complex xd1 = std::pow(x[i], d - 1);
      g[i] = xd1 * x[i] - constants[i];
      dg[i] = static_cast<double>(d) * xd1;
    }
    if (h) *h = (1.0 - s) * gamma * g + s * f;
    if (hx) {
      *hx = s * fx;
      for (int i = 0; i < n; ++i) (*hx)(i, i) += (1.0 - s) * gamma * dg[i];
    }
    if (hs) *hs = f - gamma * g;
  }
};

struct StepState {
  double step;
  int successes = 0;
  int steps = 0;
  int det_sign = 0;  // real mode: sign of det H_x at the last accepted point
};

enum class SegmentStatus { done, diverged, collapsed, crossed };

template <class S, class Hom>
class Engine {
 public:
  Engine(const Hom& h, const TrackOptions& o) : h_(h), o_(o) {}

  // Advances x from s = 0 to s = 1; on failure `s_fail` holds the last
  // accepted s.
  SegmentStatus run(SmallVec<S>& x, StepState& st, double& s_fail) const {
    double s = 0.0;
    SmallVec<S> y;
    while (s < 1.0) {
      const double hstep = std::min(st.step, 1.0 - s);
      if (predict(x, s, hstep, y) && correct(y, s + hstep, x)) {
        if constexpr (std::is_same_v<S, double>) {
          // A real path whose Jacobian determinant changes sign went through
          // a singular point, even if the step carried it across.
          if (o_.detect_real_crossings) {
            const int sign = det_sign(y, s + hstep);
            if (st.det_sign != 0 && sign != 0 && sign != st.det_sign) {
              s_fail = s;
              return SegmentStatus::crossed;
            }
            if (sign != 0) st.det_sign = sign;
          }
        }
        x = y;
        s = (hstep == 1.0 - s) ? 1.0 : s + hstep;
        ++st.steps;
        if (++st.successes >= o_.expand_after) {
          st.step = std::min(st.step * o_.step_expand, o_.max_step);
          st.successes = 0;
        }
        if (x.norm() > o_.divergence_norm) {
          s_fail = s;
          return SegmentStatus::diverged;
        }
      } else {
        st.step *= o_.step_shrink;
        st.successes = 0;
        if (st.step < o_.min_step) {
          s_fail = s;
          return SegmentStatus::collapsed;
        }
      }
    }
    return SegmentStatus::done;
  }

  SingularValues singular_values(const SmallVec<S>& x, double s) const {
    SmallMat<S> hx;
    h_.eval(x, s, nullptr, &hx, nullptr);
    Eigen::JacobiSVD<SmallMat<S>> svd(hx);
    const auto& sv = svd.singularValues();
    return {sv.minCoeff(), sv.maxCoeff()};
  }

  // Newton at fixed s until the correction is below tolerance.
  bool polish(SmallVec<S>& x, double s, int iters) const {
    SmallVec<S> hv;
    SmallMat<S> hx;
    for (int it = 0; it < iters; ++it) {
      h_.eval(x, s, &hv, &hx, nullptr);
      Eigen::PartialPivLU<SmallMat<S>> lu(hx);
      const SmallVec<S> dx = lu.solve(hv);
      if (!dx.allFinite()) return false;
      x -= dx;
      if (dx.norm() <= o_.newton_tol * (1.0 + x.norm()) * 1e-2) return true;
    }
    return true;
  }

  int det_sign(const SmallVec<S>& x, double s) const {
    SmallMat<S> hx;
    h_.eval(x, s, nullptr, &hx, nullptr);
    if constexpr (std::is_same_v<S, double>) {
      const double d = Eigen::PartialPivLU<SmallMat<S>>(hx).determinant();
      return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    } else {
      return 0;
    }
  }

  double residual(const SmallVec<S>& x, double s) const {
    SmallVec<S> hv;
    h_.eval(x, s, &hv, nullptr, nullptr);
    return hv.norm();
  }

 private:
  bool velocity(const SmallVec<S>& x, double s, SmallVec<S>& v) const {
    SmallMat<S> hx;
    SmallVec<S> hs;
    h_.eval(x, s, nullptr, &hx, &hs);
    Eigen::PartialPivLU<SmallMat<S>> lu(hx);
    v = -lu.solve(hs);
    return v.allFinite();
  }

  // Classical fourth-order Runge-Kutta on dx/ds = -H_x^{-1} H_s.
  bool predict(const SmallVec<S>& x, double s, double h, SmallVec<S>& out) const {
    SmallVec<S> k1, k2, k3, k4;
    if (!velocity(x, s, k1)) return false;
    if (!velocity(x + (0.5 * h) * k1, s + 0.5 * h, k2)) return false;
    if (!velocity(x + (0.5 * h) * k2, s + 0.5 * h, k3)) return false;
    if (!velocity(x + h * k3, s + h, k4)) return false;
    out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return out.allFinite();
  }

  bool correct(SmallVec<S>& y, double s, const SmallVec<S>& x_prev) const {
    SmallVec<S> hv;
    SmallMat<S> hx;
    double prev = std::numeric_limits<double>::infinity();
    const double scale0 = 1.0 + x_prev.norm();
    const SmallVec<S> predicted = y;
    const double moved = (predicted - x_prev).norm();
    // The corrector of a step on the right path moves the prediction far less
    // than the predictor moved; a large fix-up means Newton found another path.
    auto consistent = [&]() {
      return (y - predicted).norm() <= o_.max_correction_ratio * moved + 1e3 * o_.newton_tol * (1.0 + y.norm());
    };
    for (int it = 0; it < o_.max_newton_iters; ++it) {
      h_.eval(y, s, &hv, &hx, nullptr);
      Eigen::PartialPivLU<SmallMat<S>> lu(hx);
      const SmallVec<S> dy = lu.solve(hv);
      if (!dy.allFinite()) return false;
      y -= dy;
      const double n = dy.norm();
      const double scale = 1.0 + y.norm();
      if (it == 0 && n > o_.max_first_correction * scale0) return false;
      if (n <= o_.newton_tol * scale) return consistent();
      // Outside the region of quadratic convergence the predicted point may
      // be closer to a neighbouring path than to its own.
      if (it > 0 && n > 1e3 * o_.newton_tol * scale && n > o_.contraction * prev) return false;
      prev = n;
    }
    return false;
  }

  const Hom& h_;
  const TrackOptions& o_;
};

struct RunResult {
  TrackStatus status;
  double s_fail = 0.0;
  int segment = 0;
  double min_sv = std::numeric_limits<double>::infinity();
};

template <class S, class Hom>
RunResult classify_failure(const Engine<S, Hom>& eng, SegmentStatus st, const SmallVec<S>& x, double s,
                           const TrackOptions& o) {
  RunResult r{TrackStatus::StepFailure, s};
  const auto sv = eng.singular_values(x, s);
  r.min_sv = sv.min;
  if (st == SegmentStatus::crossed) {
    r.status = TrackStatus::Singular;
  } else if (st == SegmentStatus::diverged || x.norm() > o.collapse_divergence_norm) {
    r.status = TrackStatus::Diverged;
  } else if (sv.min < o.singular_svd_tol || sv.min < o.collapse_singular_ratio * sv.max) {
    r.status = TrackStatus::Singular;
  }
  return r;
}

template <class S>
TrackOutcome track_impl(const PolySystem& sys, const ResolvedPath& rp, const CPoint& start, const TrackOptions& o) {
  TrackOutcome out;
  out.real_arithmetic = std::is_same_v<S, double>;
  out.detour_seed = o.detour_seed;
  const auto& wps = rp.path.waypoints;
  SmallVec<S> x = cast_point<S>(start);
  StepState st{o.initial_step};
  double min_sv = std::numeric_limits<double>::infinity();

  {
    SegmentHomotopy<S> h0{sys, cast_point<S>(wps[0]), cast_point<S>(wps[1]) - cast_point<S>(wps[0])};
    Engine<S, SegmentHomotopy<S>> eng(h0, o);
    const SmallVec<S> given = x;
    eng.polish(x, 0.0, 3);
    const auto sv = eng.singular_values(x, 0.0);
    min_sv = sv.min;
    st.det_sign = eng.det_sign(x, 0.0);
    if ((x - given).norm() > 1e-6 * (1.0 + given.norm()) || eng.residual(x, 0.0) > 1e-8 * (1.0 + x.norm()) ||
        sv.min <= o.singular_svd_tol) {
      throw InvalidArgument("start is not an approximate nonsingular solution");
    }
  }

  const int pieces = rp.path.num_segments();
  if (pieces == 1 && wps[0] == wps[1]) {
    out.status = TrackStatus::Success;
    out.endpoint = to_cpoint<S>(x);
    out.min_sv_seen = min_sv;
    return out;
  }
  for (int k = 0; k < pieces; ++k) {
    SegmentHomotopy<S> h{sys, cast_point<S>(wps[k]), cast_point<S>(wps[k + 1]) - cast_point<S>(wps[k])};
    Engine<S, SegmentHomotopy<S>> eng(h, o);
    double s_fail = 0.0;
    const SegmentStatus seg = eng.run(x, st, s_fail);
    if (seg != SegmentStatus::done) {
      RunResult r = classify_failure(eng, seg, x, s_fail, o);
      out.status = r.status;
      out.min_sv_seen = std::min(min_sv, r.min_sv);
      out.steps = st.steps;
      out.t_fail = (rp.origin[k] + rp.piece_start[k] + rp.piece_len[k] * s_fail) / rp.original_segments;
      return out;
    }
    if (k + 1 == pieces) {
      eng.polish(x, 1.0, 4);
      const auto sv = eng.singular_values(x, 1.0);
      min_sv = std::min(min_sv, sv.min);
      out.min_sv_seen = min_sv;
      out.steps = st.steps;
      if (sv.min <= o.singular_svd_tol || eng.residual(x, 1.0) >= o.newton_tol * (1.0 + x.norm())) {
        out.status = TrackStatus::Singular;
        out.t_fail = 1.0;
        return out;
      }
    }
  }
  out.status = TrackStatus::Success;
  out.endpoint = to_cpoint<S>(x);
  return out;
}

}  // namespace

ParamPath resolve_detours(const ParamPath& path, std::uint64_t seed, double size) {
  return resolve(path, seed, size).path;
}

TrackOutcome track(const PolySystem& sys, const ParamPath& path, const CPoint& start, const TrackOptions& opts) {
  opts.validate();
  path.validate();
  if (path.front().size() != sys.num_params() || start.size() != sys.num_vars()) {
    throw DimensionError("path or start point has the wrong dimension");
  }
  // Repeated waypoints contribute no motion; a path with no motion at all is
  // tracked as the constant path.
  ParamPath compact({path.waypoints.front()});
  for (int k = 0; k < path.num_segments(); ++k) {
    if (path.waypoints[k + 1] == compact.waypoints.back()) continue;
    compact.waypoints.push_back(path.waypoints[k + 1]);
    compact.detour_flags.push_back(path.detour(k));
  }
  if (compact.waypoints.size() == 1) {
    compact.waypoints.push_back(compact.waypoints.front());
    compact.detour_flags.push_back(false);
  }
  const ResolvedPath rp = resolve(compact, opts.detour_seed, opts.detour_size);
  const bool real = opts.real_mode && sys.is_real() && rp.path.is_real() && max_abs_imag(start) <= 1e-12;
  if (real) return track_impl<double>(sys, rp, start, opts);
  return track_impl<Complex>(sys, rp, start, opts);
}

std::vector<TrackOutcome> track_all(const PolySystem& sys, const ParamPath& path, const std::vector<CPoint>& starts,
                                    const TrackOptions& opts) {
  std::vector<TrackOutcome> out;
  out.reserve(starts.size());
  for (const auto& s : starts) {
    try {
      out.push_back(track(sys, path, s, opts));
    } catch (const InvalidArgument&) {
      TrackOutcome bad;
      bad.status = TrackStatus::StepFailure;
      bad.t_fail = 0.0;
      out.push_back(bad);
    }
  }
  return out;
}

std::vector<CPoint> total_degree_start_points(const PolySystem& sys, const TotalDegreeStart& start) {
  const int n = sys.num_vars();
  std::vector<CPoint> out;
  std::vector<int> idx(n, 0);
  const auto& deg = sys.degrees();
  while (true) {
    CPoint x(n);
    for (int i = 0; i < n; ++i) {
      const double r = std::pow(std::abs(start.constants[i]), 1.0 / deg[i]);
      const double a = (std::arg(start.constants[i]) + 2.0 * M_PI * idx[i]) / deg[i];
      x[i] = std::polar(r, a);
    }
    out.push_back(x);
    int k = 0;
    while (k < n && ++idx[k] == deg[k]) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

TrackOutcome track_total_degree(const PolySystem& sys, const CPoint& p, const TotalDegreeStart& start,
                                const CPoint& x0, const TrackOptions& opts) {
  TotalDegreeHomotopy h{sys, p, start.gamma, start.constants};
  Engine<Complex, TotalDegreeHomotopy> eng(h, opts);
  SmallVec<Complex> x = x0;
  StepState st{opts.initial_step};
  double s_fail = 0.0;
  TrackOutcome out;
  const SegmentStatus seg = eng.run(x, st, s_fail);
  out.steps = st.steps;
  if (seg != SegmentStatus::done) {
    RunResult r = classify_failure(eng, seg, x, s_fail, opts);
    out.status = r.status;
    out.t_fail = s_fail;
    out.min_sv_seen = r.min_sv;
    return out;
  }
  eng.polish(x, 1.0, 6);
  const auto sv = eng.singular_values(x, 1.0);
  out.min_sv_seen = sv.min;
  if (sv.min <= opts.singular_svd_tol || eng.residual(x, 1.0) >= opts.newton_tol * (1.0 + x.norm())) {
    out.status = TrackStatus::Singular;
    out.t_fail = 1.0;
    return out;
  }
  out.status = TrackStatus::Success;
  out.endpoint = CPoint(x);
  return out;
}

bool is_real(const CPoint& x, double tol) { return max_abs_imag(x) < tol; }

std::optional<int> match_endpoint(const CPoint& x, const std::vector<CPoint>& candidates, double radius) {
  std::optional<int> found;
  for (size_t k = 0; k < candidates.size(); ++k) {
    if (candidates[k].size() != x.size()) throw DimensionError("candidate dimension mismatch");
    if ((candidates[k] - x).cwiseAbs().maxCoeff() <= radius) {
      if (found) throw AmbiguousMatch("endpoint lies within the match radius of two candidates");
      found = static_cast<int>(k);
    }
  }
  return found;
}

namespace {

template <class S>
bool newton_fixed(const PolySystem& sys, SmallVec<S>& x, const SmallVec<S>& p, int iters, double tol) {
  SmallVec<S> f;
  SmallMat<S> j;
  for (int it = 0; it < iters; ++it) {
    sys.eval<S>(x, p, &f, &j, nullptr);
    Eigen::PartialPivLU<SmallMat<S>> lu(j);
    const SmallVec<S> dx = lu.solve(f);
    if (!dx.allFinite()) return false;
    x -= dx;
    if (dx.norm() <= tol * (1.0 + x.norm())) return true;
  }
  return false;
}

}  // namespace

bool newton_refine(const PolySystem& sys, CPoint& x, const CPoint& p, int iters, double tol) {
  SmallVec<Complex> y = x;
  const bool ok = newton_fixed<Complex>(sys, y, p, iters, tol);
  if (y.allFinite()) x = y;
  return ok;
}

bool newton_refine_real(const PolySystem& sys, RVector& x, const RVector& p, int iters, double tol) {
  SmallVec<double> y = x;
  const bool ok = newton_fixed<double>(sys, y, p, iters, tol);
  if (y.allFinite()) x = y;
  return ok;
}

SingularValues jacobian_singular_values(const PolySystem& sys, const CPoint& x, const CPoint& p) {
  SmallMat<Complex> j;
  sys.eval<Complex>(x, p, nullptr, &j, nullptr);
  Eigen::JacobiSVD<SmallMat<Complex>> svd(j);
  return {svd.singularValues().minCoeff(), svd.singularValues().maxCoeff()};
}

}  // namespace rmono
