#pragma once

#include "rmono/tracker.hpp"

#include <optional>
#include <vector>

namespace rmono {

/// All isolated nonsingular solutions over one parameter point, with the real
/// ones classified and labelled 1..R.
struct SolutionSet {
  CPoint param;
  std::vector<CPoint> all_complex;  // canonical order
  std::vector<int> real_indices;    // into all_complex
  // labels[k] is the real point carrying label k + 1; label_index[k] is its
  // position in all_complex.
  std::vector<RVector> labels;
  std::vector<int> label_index;
  std::uint64_t seed = 0;

  int degree() const { return static_cast<int>(all_complex.size()); }
  int num_real() const { return static_cast<int>(real_indices.size()); }
  bool classified = false;
};

struct SolveOptions {
  TrackOptions track;
  double dedupe_radius = 1e-8;
  int retries = 3;
};

/// Total-degree homotopy solve at p. Throws NonGenericParameter when the
/// solution count does not stabilise over the retries.
SolutionSet solve_at(const PolySystem& sys, const CPoint& p, std::uint64_t seed, const SolveOptions& opts = {});

/// Classifies real solutions (max |imag| < tol after refinement). Real
/// representatives have their imaginary parts zeroed and are re-refined in
/// real arithmetic. Throws BorderlineReal for max |imag| in [1e-8, 1e-4].
SolutionSet classify_real(SolutionSet set, const PolySystem& sys, double tol = 1e-6);

/// Default labels follow lexicographic order of the coordinates rounded to
/// 1e-8. An override lists the real points in the desired label order and
/// must match the real solutions bijectively within 1e-6.
SolutionSet assign_labels(SolutionSet set, const std::optional<std::vector<RVector>>& override = std::nullopt);

/// Convenience: solve, classify and label.
SolutionSet solve_labeled(const PolySystem& sys, const CPoint& p, std::uint64_t seed,
                          const std::optional<std::vector<RVector>>& override = std::nullopt,
                          const SolveOptions& opts = {});

/// Parameter-homotopy transport of all complex solutions to `target` along a
/// straight segment with a random complex detour. The returned set is
/// unclassified. Throws NonGenericParameter if the transported set is not D
/// distinct nonsingular solutions after the retries.
SolutionSet transport(const PolySystem& sys, const SolutionSet& from, const CPoint& target, std::uint64_t seed,
                      const SolveOptions& opts = {});

/// True when every nonreal solution has its conjugate in the set.
bool conjugate_paired(const SolutionSet& set, double tol = 1e-8);

/// Reorders all_complex to follow `order` (matched within 1e-6), e.g. to
/// adopt a reference numbering of the complex solutions.
SolutionSet reorder_complex(SolutionSet set, const std::vector<CPoint>& order);

/// Label overrides for builtins whose real solutions at the documented base
/// point have a reference numbering.
std::optional<std::vector<RVector>> builtin_label_override(Builtin which);

/// Documented base point of each builtin.
CPoint builtin_base(Builtin which);

}  // namespace rmono
