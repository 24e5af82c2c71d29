#include "rmono/polysys.hpp"

namespace rmono {

namespace {

// Indeterminate handles for building systems in code.
struct Ring {
  int n;
  Polynomial var(int k) const { return Polynomial::indeterminate(n, k); }
  Polynomial c(double v) const { return Polynomial::constant(n, v); }
};

PolySystem make_ex21() {
  const Ring r{4};
  const auto x1 = r.var(0), x2 = r.var(1), p1 = r.var(2), p2 = r.var(3);
  return PolySystem({"x1", "x2"}, {"p1", "p2"},
                    {x1 * x1 - x2 * x2 - p1, r.c(2) * x1 * x2 - p2});
}

PolySystem make_univariate() {
  const Ring r{2};
  const auto x = r.var(0), p = r.var(1);
  return PolySystem({"x"}, {"p"}, {x * x + r.c(1) - p * p});
}

PolySystem make_modified34() {
  const Ring r{4};
  const auto x1 = r.var(0), x2 = r.var(1), p1 = r.var(2), p2 = r.var(3);
  return PolySystem({"x1", "x2"}, {"p1", "p2"},
                    {(x1 * x1 - x2 * x2 - p1) * (x1 * x1 + p1), r.c(2) * x1 * x2 - p2});
}

// Steady states of three coupled oscillators with theta3 = 0, written in
// s_i = sin(theta_i), c_i = cos(theta_i).
PolySystem make_kuramoto3() {
  const Ring r{6};
  const auto s1 = r.var(0), c1 = r.var(1), s2 = r.var(2), c2 = r.var(3), w1 = r.var(4), w2 = r.var(5);
  const auto s3 = r.c(0), c3 = r.c(1);
  return PolySystem({"s1", "c1", "s2", "c2"}, {"w1", "w2"},
                    {
                        (s1 * c2 - c1 * s2) + (s1 * c3 - c1 * s3) - r.c(3) * w1,
                        (s2 * c1 - c2 * s1) + (s2 * c3 - c2 * s3) - r.c(3) * w2,
                        s1 * s1 + c1 * c1 - r.c(1),
                        s2 * s2 + c2 * c2 - r.c(1),
                    });
}

// Planar 3RPR platform with legs 1 and 2 free. Variables are the platform
// position (p1, p2) and rotation (f1, f2) on the unit circle; parameters are
// the squared leg lengths c1, c2.
PolySystem make_rpr3() {
  constexpr double a2 = 14, a3 = 7, b3 = 10, A2 = 16, A3 = 9, B3 = 6, c3 = 100;
  const Ring r{6};
  const auto p1 = r.var(0), p2 = r.var(1), f1 = r.var(2), f2 = r.var(3), c1 = r.var(4), c2 = r.var(5);
  const auto pp = p1 * p1 + p2 * p2;
  return PolySystem(
      {"p1", "p2", "f1", "f2"}, {"c1", "c2"},
      {
          f1 * f1 + f2 * f2 - r.c(1),
          pp - r.c(2) * (r.c(a3) * p1 + r.c(b3) * p2) * f1 + r.c(2) * (r.c(b3) * p1 - r.c(a3) * p2) * f2 +
              r.c(a3 * a3 + b3 * b3) - c1,
          pp - r.c(2 * A2) * p1 +
              r.c(2) * (r.c(a2 - a3) * p1 - r.c(b3) * p2 + r.c(A2 * a3 - A2 * a2)) * f1 +
              r.c(2) * (r.c(b3) * p1 + r.c(a2 - a3) * p2 - r.c(A2 * b3)) * f2 +
              r.c((a2 - a3) * (a2 - a3) + b3 * b3 + A2 * A2) - c2,
          pp - r.c(2) * (r.c(A3) * p1 + r.c(B3) * p2) + r.c(A3 * A3 + B3 * B3 - c3),
      });
}

}  // namespace

PolySystem builtin(Builtin which) {
  switch (which) {
    case Builtin::ex21:
      return make_ex21();
    case Builtin::univariate:
      return make_univariate();
    case Builtin::modified34:
      return make_modified34();
    case Builtin::kuramoto3:
      return make_kuramoto3();
    case Builtin::rpr3:
      return make_rpr3();
  }
  throw InvalidArgument("unknown builtin");
}

const std::vector<Builtin>& all_builtins() {
  static const std::vector<Builtin> all{Builtin::ex21, Builtin::univariate, Builtin::modified34,
                                        Builtin::kuramoto3, Builtin::rpr3};
  return all;
}

std::string builtin_name(Builtin which) {
  switch (which) {
    case Builtin::ex21:
      return "ex21";
    case Builtin::univariate:
      return "univariate";
    case Builtin::modified34:
      return "modified34";
    case Builtin::kuramoto3:
      return "kuramoto3";
    case Builtin::rpr3:
      return "rpr3";
  }
  throw InvalidArgument("unknown builtin");
}

Builtin builtin_from_name(std::string_view name) {
  for (Builtin b : all_builtins()) {
    if (builtin_name(b) == name) return b;
  }
  throw InvalidArgument("unknown builtin system '" + std::string(name) + "'");
}

}  // namespace rmono
