#pragma once

#include "rmono/polysys.hpp"

#include <optional>
#include <vector>

namespace rmono {

/// Piecewise-linear path in parameter space. A segment with its detour flag
/// set is replaced at tracking time by two segments through a random complex
/// point near its midpoint.
struct ParamPath {
  std::vector<CPoint> waypoints;
  std::vector<bool> detour_flags;  // one per segment; empty means no detours

  ParamPath() = default;
  explicit ParamPath(std::vector<CPoint> pts, std::vector<bool> flags = {});

  static ParamPath segment(const CPoint& from, const CPoint& to, bool detour = false);

  int num_segments() const { return static_cast<int>(waypoints.size()) - 1; }
  bool detour(int segment) const { return !detour_flags.empty() && detour_flags[segment]; }
  bool is_real() const;  // all waypoints real and no detours
  const CPoint& front() const { return waypoints.front(); }
  const CPoint& back() const { return waypoints.back(); }

  ParamPath reversed() const;
  // Appends `next`, whose first waypoint must coincide with this path's last.
  ParamPath then(const ParamPath& next) const;

  // Throws InvalidArgument unless there are >= 2 finite waypoints of equal
  // length. Repeated consecutive waypoints are skipped when tracking.
  void validate() const;
};

struct TrackOptions {
  double newton_tol = 1e-10;
  int max_newton_iters = 10;
  double initial_step = 1e-2;
  double min_step = 1e-10;
  double max_step = 0.25;
  double step_expand = 2.0;
  int expand_after = 4;
  double step_shrink = 0.5;
  double divergence_norm = 1e8;
  double singular_svd_tol = 1e-8;
  bool real_mode = false;

  // A step collapse with |x| beyond this is reported as divergence: escape to
  // infinity is typically a square-root branch, so |x| grows like
  // min_step^(-1/2) before the step size gives out.
  double collapse_divergence_norm = 1e4;
  // Relative smallest singular value below which a step collapse counts as a
  // singular encounter (a fold's singular value shrinks like the square root
  // of the distance to it).
  double collapse_singular_ratio = 1e-4;
  // Newton acceptance: first correction bound (relative to 1 + |x|) and
  // required contraction between successive corrections.
  double max_first_correction = 0.05;
  double contraction = 0.1;
  // Total corrector displacement allowed relative to the predictor's.
  double max_correction_ratio = 0.25;

  // Real mode: a sign change of det H_x between accepted steps means the
  // path passed through a singular point; reported as Singular.
  bool detect_real_crossings = false;

  std::uint64_t detour_seed = 0;
  double detour_size = 0.5;  // detour offset relative to segment length

  void validate() const;
};

enum class TrackStatus { Success, Diverged, Singular, StepFailure };

const char* to_string(TrackStatus s);

struct TrackOutcome {
  TrackStatus status = TrackStatus::StepFailure;
  std::optional<CPoint> endpoint;  // present iff Success
  std::optional<double> t_fail;    // path fraction of the failure otherwise
  double min_sv_seen = 0.0;
  int steps = 0;
  bool real_arithmetic = false;
  std::uint64_t detour_seed = 0;

  bool ok() const { return status == TrackStatus::Success; }
};

/// Resolves detour flags into explicit complex waypoints, deterministically in
/// `seed`. Segments without a flag are kept as they are.
ParamPath resolve_detours(const ParamPath& path, std::uint64_t seed, double size);

/// Continues the solution `start` of F(x; path.front()) = 0 to path.back().
TrackOutcome track(const PolySystem& sys, const ParamPath& path, const CPoint& start, const TrackOptions& opts);

std::vector<TrackOutcome> track_all(const PolySystem& sys, const ParamPath& path, const std::vector<CPoint>& starts,
                                    const TrackOptions& opts);

/// Straight-line homotopy (1 - s) * gamma * G(x) + s * F(x; p) from the
/// total-degree start system G_i = x_i^{d_i} - c_i.
struct TotalDegreeStart {
  Complex gamma;
  std::vector<Complex> constants;  // c_i
};

std::vector<CPoint> total_degree_start_points(const PolySystem& sys, const TotalDegreeStart& start);

TrackOutcome track_total_degree(const PolySystem& sys, const CPoint& p, const TotalDegreeStart& start,
                                const CPoint& x0, const TrackOptions& opts);

bool is_real(const CPoint& x, double tol = 1e-6);

/// Index of the unique candidate within `radius` of x (infinity norm), or
/// nullopt. Throws AmbiguousMatch if more than one candidate qualifies.
std::optional<int> match_endpoint(const CPoint& x, const std::vector<CPoint>& candidates, double radius = 1e-6);

/// Newton refinement at fixed parameters; returns false if it does not
/// converge within `iters`.
bool newton_refine(const PolySystem& sys, CPoint& x, const CPoint& p, int iters = 8, double tol = 1e-13);
bool newton_refine_real(const PolySystem& sys, RVector& x, const RVector& p, int iters = 8, double tol = 1e-13);

struct SingularValues {
  double min = 0.0;
  double max = 0.0;
};
SingularValues jacobian_singular_values(const PolySystem& sys, const CPoint& x, const CPoint& p);

}  // namespace rmono
