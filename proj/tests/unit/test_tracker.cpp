#include "doctest.h"

#include "../checks.hpp"

using namespace rmono;

namespace {

CPoint pt(std::initializer_list<Complex> v) {
  CPoint p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto c : v) p[i++] = c;
  return p;
}

ParamPath arc(double sx, double t0, double t1, int vertices) {
  std::vector<CPoint> pts;
  for (int i = 0; i <= vertices; ++i) {
    const double t = 2.0 * 3.14159265358979323846 * (t0 + (t1 - t0) * i / vertices);
    pts.push_back(pt({sx * std::cos(t), std::sin(t)}));
  }
  return ParamPath(pts);
}

}  // namespace

TEST_SUITE("tracker") {
  TEST_CASE("ex21 follows the analytic branch sqrt(p1)") {
    const auto ex = builtin(Builtin::ex21);
    const auto path = ParamPath::segment(pt({1.0, 0.0}), pt({4.0, 0.0}));
    for (bool real : {false, true}) {
      TrackOptions o;
      o.real_mode = real;
      const auto out = track(ex, path, pt({1.0, 0.0}), o);
      REQUIRE(out.ok());
      CHECK((*out.endpoint - pt({2.0, 0.0})).norm() < 1e-10);
      CHECK(out.real_arithmetic == real);
      if (real) CHECK(out.endpoint->imag().cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("modified34 solution escapes to infinity at a quarter turn") {
    // (1,0) is the branch of x1^2 + p1 = 0 here; see the label override.
    const auto m = builtin(Builtin::modified34);
    const auto out = track(m, arc(-1.0, 0.0, 0.5, 64), pt({1.0, 0.0}), {});
    CHECK(out.status == TrackStatus::Diverged);
    REQUIRE(out.t_fail.has_value());
    CHECK(*out.t_fail == doctest::Approx(0.5).epsilon(0.03));
    CHECK_FALSE(out.endpoint.has_value());
  }

  TEST_CASE("constant path keeps the start") {
    const auto ex = builtin(Builtin::ex21);
    const ParamPath path({pt({1.0, 0.0}), pt({1.0, 0.0})});
    const auto out = track(ex, path, pt({-1.0, 0.0}), {});
    REQUIRE(out.ok());
    CHECK((*out.endpoint - pt({-1.0, 0.0})).norm() < 1e-12);
  }

  TEST_CASE("track_all on a constant loop returns every start") {
    const auto ex = builtin(Builtin::ex21);
    const auto base = solve_at(ex, pt({1.0, 0.0}), 1);
    const ParamPath loop({pt({1.0, 0.0}), pt({1.0, 0.0})});
    const auto outs = track_all(ex, loop, base.all_complex, {});
    REQUIRE(outs.size() == 4);
    for (std::size_t i = 0; i < outs.size(); ++i) {
      REQUIRE(outs[i].ok());
      CHECK((*outs[i].endpoint - base.all_complex[i]).norm() < 1e-12);
    }
  }

  TEST_CASE("modified34 full loop: two survive and swap, two diverge") {
    const auto m = builtin(Builtin::modified34);
    const auto base = solve_labeled(m, builtin_base(Builtin::modified34), 1, builtin_label_override(Builtin::modified34));
    REQUIRE(base.num_real() == 4);
    std::vector<CPoint> starts;
    for (const auto& x : base.labels) starts.push_back(x.cast<Complex>());
    const auto outs = track_all(m, arc(-1.0, 0.0, 1.0, 128), starts, {});
    CHECK(outs[0].ok());
    CHECK(outs[1].ok());
    CHECK(outs[2].status == TrackStatus::Diverged);
    CHECK(outs[3].status == TrackStatus::Diverged);
    REQUIRE(outs[0].ok());
    CHECK(match_endpoint(*outs[0].endpoint, starts) == 1);
    CHECK(match_endpoint(*outs[1].endpoint, starts) == 0);
  }

  TEST_CASE("ex21 circle loop permutes the solutions") {
    const auto ex = builtin(Builtin::ex21);
    const auto base = solve_at(ex, pt({1.0, 0.0}), 1);
    const AffineLine line{pt({1.0, 0.0}), pt({-1.0, 2.0})};
    const auto loop = circle_loop(Complex(0.2, 0.4), 0.0, 0.2, line);
    const auto outs = track_all(ex, loop, base.all_complex, {});
    std::set<int> hit;
    bool moved = false;
    for (std::size_t i = 0; i < outs.size(); ++i) {
      REQUIRE(outs[i].ok());
      const auto j = match_endpoint(*outs[i].endpoint, base.all_complex);
      REQUIRE(j.has_value());
      hit.insert(*j);
      moved = moved || *j != static_cast<int>(i);
    }
    CHECK(hit.size() == 4);
    CHECK(moved);
  }

  TEST_CASE("is_real and match_endpoint") {
    CHECK(is_real(pt({Complex(1, 1e-9), 0.0}), 1e-6));
    CHECK_FALSE(is_real(pt({0.0, Complex(0, 1)}), 1e-6));
    const std::vector<CPoint> cands = {pt({2.0, 0.0}), pt({-2.0, 0.0})};
    CHECK(match_endpoint(pt({2.0000001, 0.0}), cands, 1e-6) == 0);
    CHECK_FALSE(match_endpoint(pt({3.0, 0.0}), cands, 1e-6).has_value());
    const std::vector<CPoint> close = {pt({0.0, 0.0}), pt({1e-7, 0.0})};
    CHECK_THROWS_AS(match_endpoint(pt({0.0, 0.0}), close, 1e-6), AmbiguousMatch);
  }

  TEST_CASE("start must be an approximate nonsingular solution") {
    const auto ex = builtin(Builtin::ex21);
    CHECK_THROWS_AS(track(ex, ParamPath::segment(pt({1.0, 0.0}), pt({2.0, 0.0})), pt({5.0, 0.0}), {}),
                    InvalidArgument);
  }

  TEST_CASE("conjugate starts give conjugate outcomes") {
    const auto ex = builtin(Builtin::ex21);
    const auto path = ParamPath::segment(pt({1.0, 0.0}), pt({2.0, 1.0}));
    const auto a = track(ex, path, pt({0.0, Complex(0, 1)}), {});
    const auto b = track(ex, path, pt({0.0, Complex(0, -1)}), {});
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK((a.endpoint->conjugate() - *b.endpoint).norm() < 1e-8);
  }

  TEST_CASE("round trip on random segments") {
    for (Builtin b : all_builtins()) {
      const auto c = checks::round_trip(b, 10, 23);
      INFO(builtin_name(b) << ": " << c.detail);
      CHECK(c.ok);
    }
  }

  TEST_CASE("closed complex loops permute the start set") {
    for (Builtin b : {Builtin::ex21, Builtin::kuramoto3}) {
      const auto sys = builtin(b);
      const auto base = solve_at(sys, builtin_base(b), 2);
      int good = 0;
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto loop = random_loop(base.param, seed, 1.0);
        const auto outs = track_all(sys, loop, base.all_complex, {});
        std::set<int> hit;
        bool ok = true;
        for (const auto& o : outs) {
          if (!o.ok()) {
            ok = false;
            break;
          }
          const auto j = match_endpoint(*o.endpoint, base.all_complex);
          if (!j) ok = false;
          else hit.insert(*j);
        }
        if (!ok) continue;
        ++good;
        CHECK(hit.size() == base.all_complex.size());
      }
      CHECK(good >= 15);
    }
  }

  TEST_CASE("options are validated") {
    TrackOptions o;
    o.min_step = 1.0;
    CHECK_THROWS_AS(o.validate(), InvalidArgument);
    CHECK_THROWS_AS(ParamPath({pt({1.0})}).validate(), InvalidArgument);
  }
}
