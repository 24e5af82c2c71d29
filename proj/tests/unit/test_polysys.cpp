#include "doctest.h"

#include "../checks.hpp"

#include <algorithm>

using namespace rmono;

namespace {

CPoint pt(std::initializer_list<Complex> v) {
  CPoint p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) p[i++] = c;
  return p;
}

std::vector<std::vector<std::pair<std::vector<int>, Complex>>> canonical(const PolySystem& s) {
  std::vector<std::vector<std::pair<std::vector<int>, Complex>>> out;
  for (const auto& eq : s.equations()) {
    std::vector<std::pair<std::vector<int>, Complex>> terms;
    for (const auto& m : eq) terms.push_back({m.exponents, m.coefficient});
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(terms);
  }
  return out;
}

}  // namespace

TEST_SUITE("polysys") {
  TEST_CASE("parse univariate example") {
    const auto s = parse_system("var x; par p; eq x^2 + 1 - p^2;");
    CHECK(s.num_vars() == 1);
    CHECK(s.num_params() == 1);
    CHECK(s.degrees() == std::vector<int>{2});
    CHECK(s.is_real());
  }

  TEST_CASE("zero equation is rejected") {
    CHECK_THROWS_AS(parse_system("var x; par p; eq x - x;"), ParseError);
  }

  TEST_CASE("parse ex21 matches builtin") {
    const auto s = parse_system("var x1 x2; par p1 p2; eq x1^2 - x2^2 - p1; eq 2*x1*x2 - p2;");
    CHECK(s.num_vars() == 2);
    CHECK(s.num_params() == 2);
    CHECK(s.total_degree_bound() == 4);
    CHECK(canonical(s) == canonical(builtin(Builtin::ex21)));
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_system("var x; par p;\neq x + * 2;");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_system("var x; par p; eq y - p;"), ParseError);
    CHECK_THROWS_AS(parse_system("var x y; par p; eq x - p;"), ParseError);
  }

  TEST_CASE("imaginary unit literal") {
    const auto s = parse_system("var x; par p; eq x^2 - 2*i*p;");
    CHECK_FALSE(s.is_real());
    const auto v = evaluate(s, pt({1.0}), pt({1.0}));
    CHECK(std::abs(v[0] - Complex(1, -2)) < 1e-15);
  }

  TEST_CASE("builtin shapes") {
    CHECK(builtin(Builtin::ex21).total_degree_bound() == 4);
    const auto uni = builtin(Builtin::univariate);
    CHECK(uni.num_vars() == 1);
    CHECK(uni.degrees() == std::vector<int>{2});
    const auto k = builtin(Builtin::kuramoto3);
    CHECK(k.num_vars() == 4);
    CHECK(k.num_params() == 2);
    const auto r = builtin(Builtin::rpr3);
    CHECK(r.num_vars() == 4);
    CHECK(r.num_params() == 2);
    for (Builtin b : all_builtins()) CHECK(builtin(b).is_real());
    CHECK_THROWS_AS(builtin_from_name("nope"), InvalidArgument);
  }

  TEST_CASE("rpr3 first equation is f1^2 + f2^2 - 1") {
    const auto r = builtin(Builtin::rpr3);
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
      CPoint x(4), p(2);
      for (int i = 0; i < 4; ++i) x[i] = {rng.normal(), rng.normal()};
      for (int i = 0; i < 2; ++i) p[i] = {rng.normal(), rng.normal()};
      const Complex want = x[2] * x[2] + x[3] * x[3] - 1.0;
      CHECK(std::abs(evaluate(r, x, p)[0] - want) < 1e-12);
    }
  }

  TEST_CASE("evaluate examples") {
    const auto ex = builtin(Builtin::ex21);
    CHECK(evaluate(ex, pt({1.0, 0.0}), pt({1.0, 0.0})).norm() == 0.0);
    const auto v = evaluate(ex, pt({2.0, 0.0}), pt({1.0, 0.0}));
    CHECK(std::abs(v[0] - 3.0) < 1e-15);
    CHECK(std::abs(v[1]) < 1e-15);
    const auto u = evaluate(builtin(Builtin::univariate), pt({0.0}), pt({2.0}));
    CHECK(std::abs(u[0] + 3.0) < 1e-15);
    CHECK_THROWS_AS(evaluate(ex, pt({1.0}), pt({1.0, 0.0})), DimensionError);
  }

  TEST_CASE("jacobian examples") {
    const auto ex = builtin(Builtin::ex21);
    CMatrix jx = jacobian_x(ex, pt({1.0, 0.0}), pt({1.0, 0.0}));
    CHECK((jx - CMatrix::Identity(2, 2) * 2.0).norm() < 1e-15);
    CMatrix jp = jacobian_p(ex, pt({0.3, -2.0}), pt({5.0, 1.0}));
    CHECK((jp + CMatrix::Identity(2, 2)).norm() < 1e-15);
    CMatrix ju = jacobian_x(builtin(Builtin::univariate), pt({3.0}), pt({0.5}));
    CHECK(std::abs(ju(0, 0) - 6.0) < 1e-15);
  }

  TEST_CASE("conjugate symmetry of real systems") {
    Rng rng(11);
    for (Builtin b : all_builtins()) {
      const auto s = builtin(b);
      for (int t = 0; t < 100; ++t) {
        CPoint x(s.num_vars()), p(s.num_params());
        for (int i = 0; i < x.size(); ++i) x[i] = {rng.normal(), rng.normal()};
        for (int i = 0; i < p.size(); ++i) p[i] = {rng.normal(), rng.normal()};
        const CVector a = evaluate(s, x.conjugate(), p.conjugate());
        const CVector b2 = evaluate(s, x, p).conjugate();
        CHECK((a - b2).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, b2.cwiseAbs().maxCoeff()));
      }
    }
  }

  TEST_CASE("jacobian matches central differences") {
    for (Builtin b : all_builtins()) {
      const auto c = checks::jacobian_vs_differences(builtin(b), 20, 17);
      INFO(builtin_name(b) << ": " << c.detail);
      CHECK(c.ok);
    }
  }

  TEST_CASE("print and parse round trip") {
    for (Builtin b : all_builtins()) {
      const auto s = builtin(b);
      const auto back = parse_system(print_system(s));
      CHECK(canonical(back) == canonical(s));
      CHECK(back.var_names() == s.var_names());
      CHECK(back.param_names() == s.param_names());
    }
  }
}
