#pragma once

#include "rmono/solver.hpp"

#include <set>
#include <string>
#include <vector>

namespace rmono {

/// Bijection on {0..D-1}; printed 1-based in cycle notation.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int degree);
  // Parses cycle notation such as "(1 3)(2 4)" or "(1)" on `degree` points.
  static Permutation from_cycles(std::string_view text, int degree);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i]; }
  const std::vector<int>& images() const { return images_; }
  bool is_identity() const;

  // Apply *this first, then `next` (loop concatenation order).
  Permutation then(const Permutation& next) const;
  Permutation inverse() const;

  std::string cycles() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

struct Generator {
  Permutation perm;
  ParamPath loop;
};

/// Permutation group given by generators, with its full element list kept
/// closed under products (orders here are at most a few thousand).
class MonodromyGroup {
 public:
  explicit MonodromyGroup(int degree);

  // Adds a generator; returns true if the group grew.
  bool add(const Permutation& p, const ParamPath& loop = {});

  int degree() const { return degree_; }
  long order() const { return static_cast<long>(elements_.size()); }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::set<Permutation>& elements() const { return elements_; }
  bool contains(const Permutation& p) const { return elements_.count(p) > 0; }
  bool is_full_symmetric() const;

 private:
  int degree_;
  std::vector<Generator> generators_;
  std::set<Permutation> elements_;
};

/// Affine line t -> origin + t * direction in parameter space.
struct AffineLine {
  CPoint origin;
  CPoint direction;
  CPoint at(Complex t) const { return origin + t * direction; }
};

/// Loop in the t-plane from base_t to the circle of `radius` about `center`,
/// once around it counterclockwise (32-gon), and back, mapped through `line`.
ParamPath circle_loop(Complex center, Complex base_t, double radius, const AffineLine& line, int vertices = 32);

/// Triangle base -> z1 -> z2 -> base with z1, z2 uniform in the complex ball
/// of radius `scale` about base.
ParamPath random_loop(const CPoint& base, std::uint64_t seed, double scale);

struct MonodromyOptions {
  TrackOptions track;
  int max_loops = 200;
  int stall = 20;
  double scale = 0.0;  // 0 picks 2 (1 + |base|)
  double match_radius = 1e-6;
};

/// sigma(i) = j when the path from solution i ends at solution j. Retries once
/// with complex detours on every segment; throws LoopThroughDiscriminant if
/// that fails too.
Permutation loop_permutation(const PolySystem& sys, const SolutionSet& base, const ParamPath& loop,
                             const MonodromyOptions& opts = {}, std::uint64_t seed = 0,
                             ParamPath* used_loop = nullptr);

MonodromyGroup monodromy_group(const PolySystem& sys, const SolutionSet& base, std::uint64_t seed,
                               const MonodromyOptions& opts = {});

}  // namespace rmono
