#include <doctest.h>

#include "mcflab/analysis.hpp"
#include "mcflab/error.hpp"
#include "mcflab/oracles.hpp"
#include "support.hpp"

using namespace mcflab;

namespace {

FlowTrajectory sphere_run(int n, double r0, double t_cap, double c_stab = 0.2) {
  FlowConfig cfg;
  cfg.t_cap = t_cap;
  cfg.c_stab = c_stab;
  return run_flow(AnalyticSphere(r0, n), cfg);
}

FlowTrajectory residual_run(const Immersion& imm, double t_cap) {
  FlowConfig cfg;
  cfg.t_cap = t_cap;
  cfg.max_frames = 0;
  return run_flow(imm, cfg);
}

double mean_radius(const GeometryFrame& f) {
  double r = 0.0;
  for (const auto& p : f.position) r += norm(p);
  return r / f.size();
}

}  // namespace

TEST_CASE("rescaling to unit curvature") {
  const auto traj = sphere_run(2, 1.0, 0.2);
  const double t_center = traj.frames.back().frame.t;
  const double Q = traj.frames.back().frame.max_A2();
  const auto scaled = parabolic_rescale(traj, {Q, t_center, std::nullopt});
  CHECK(scaled.frames.back().frame.max_A2() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scaled.frames.back().frame.t == doctest::Approx(0.0));
}

TEST_CASE("identity rescale") {
  const auto traj = sphere_run(3, 1.0, 0.1);
  const auto same = parabolic_rescale(traj, {1.0, 0.0, std::nullopt});
  REQUIRE(same.frames.size() == traj.frames.size());
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    CHECK(same.frames[k].frame.t == traj.frames[k].frame.t);
    CHECK(std::get<AnalyticSphere>(same.frames[k].immersion).radius() ==
          std::get<AnalyticSphere>(traj.frames[k].immersion).radius());
  }
}

TEST_CASE("numeric circle rescaled by Q = 4 doubles the radius") {
  FlowConfig cfg;
  cfg.t_cap = 0.1;
  cfg.record_stride = 50;
  const auto traj = run_flow(make_initial(CircleShape{1.0, 512}), cfg);
  const auto scaled = parabolic_rescale(traj, {4.0, 0.05, std::nullopt});
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    CHECK(std::abs(mean_radius(scaled.frames[k].frame) - 2.0 * mean_radius(traj.frames[k].frame)) <= 1e-10);
    CHECK(scaled.frames[k].frame.t == doctest::Approx(4.0 * (traj.frames[k].frame.t - 0.05)));
  }
}

TEST_CASE("rescale round trip") {
  FlowConfig cfg;
  cfg.t_cap = 0.05;
  cfg.record_stride = 20;
  const auto traj = run_flow(make_initial(EllipseShape{2.0, 1.0, 256}), cfg);
  const double Q = 9.0, tc = 0.02;
  const auto there = parabolic_rescale(traj, {Q, tc, std::nullopt});
  const auto back = parabolic_rescale(there, {1.0 / Q, -Q * tc, std::nullopt});
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    const auto& a = std::get<PlaneCurve>(traj.frames[k].immersion).points();
    const auto& b = std::get<PlaneCurve>(back.frames[k].immersion).points();
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(norm(a[j] - b[j]) <= 1e-10);
    CHECK(back.frames[k].frame.t == doctest::Approx(traj.frames[k].frame.t).epsilon(1e-12));
  }
}

TEST_CASE("property: invariance and scaling laws on sphere oracles") {
  for (int n = 1; n <= 4; ++n) {
    const double T = 1.0 / (2.0 * n);
    const auto traj = sphere_run(n, 1.0, 0.8 * T);
    for (double Q : {0.5, 4.0, 100.0}) {
      const RescaleSpec spec{Q, 0.4 * T, std::nullopt};
      CHECK(spacetime_norm_invariance_check(traj, spec, Quantity::A, n + 2.0).deviation <= 1e-10);
      CHECK(spacetime_norm_invariance_check(traj, spec, Quantity::A, n, NormScope::Spatial).deviation <= 1e-10);
      for (double alpha : {1.0, n + 1.0, n + 3.0}) {
        CHECK(spacetime_norm_invariance_check(traj, spec, Quantity::H, alpha).deviation <= 1e-10);
      }
      CHECK(transformation_law_deviation(traj, parabolic_rescale(traj, spec), Q) <= 1e-10);
    }
    const auto c = spacetime_norm_invariance_check(traj, {4.0, 0.4 * T, std::nullopt}, Quantity::A, n + 1.0,
                                                   NormScope::Spatial);
    CHECK(c.rescaled / c.original == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("rescale windows") {
  const auto traj = sphere_run(2, 1.0, 0.2);
  const auto scaled = parabolic_rescale(traj, {4.0, 0.1, std::make_pair(-0.2, 0.2)});
  for (const auto& s : scaled.frames) {
    CHECK(s.frame.t >= -0.2);
    CHECK(s.frame.t <= 0.2);
  }
  try {
    parabolic_rescale(traj, {4.0, 0.1, std::make_pair(-10.0, 0.2)});
    FAIL("expected WindowOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WindowOutOfRange);
  }
  CHECK_THROWS_AS(parabolic_rescale(traj, {4.0, 5.0, std::nullopt}), Error);
}

TEST_CASE("evolution residuals on exact and numeric flows") {
  SUBCASE("analytic sphere satisfies every equation to rounding") {
    // Only the time stencil contributes, at second order in dt.
    double prev = 0.0;
    for (double c : {1e-3, 5e-4}) {
      FlowConfig cfg;
      cfg.t_cap = 0.05;
      cfg.c_stab = c;
      cfg.max_frames = 0;
      const auto traj = run_flow(AnalyticSphere(1.0, 2), cfg);
      const std::size_t k = traj.frames.size() / 2;
      CHECK(evolution_residual(traj, k, Equation::Metric).max_abs() <= 1e-5);
      CHECK(evolution_residual(traj, k, Equation::Normal).max_abs() == 0.0);
      const double r = evolution_residual(traj, k, Equation::NormSquared).max_abs();
      CHECK(r <= 2e-5);
      if (prev > 0.0) CHECK(std::log2(prev / r) == doctest::Approx(2.0).epsilon(0.05));
      prev = r;
    }
  }
  SUBCASE("circle H equation") {
    const auto traj = residual_run(make_initial(CircleShape{1.0, 512}), 0.01);
    CHECK(evolution_residual(traj, traj.frames.size() / 2, Equation::MeanCurvature).max_abs() <= 1e-3);
  }
  SUBCASE("revolution interior converges at second order") {
    // Mid-profile samples; the pole neighbourhood converges more slowly.
    double prev = 0.0;
    for (std::size_t m : {128, 256}) {
      const auto traj = residual_run(make_initial(SpheroidShape{1.5, 1.0, m, 2}), 0.005);
      const auto r = evolution_residual(traj, traj.frames.size() / 2, Equation::SecondFundamentalForm);
      const double mid = std::abs(r.values[r.values.size() / 2]);
      if (prev > 0.0) CHECK(std::log2(prev / mid) >= 1.8);
      prev = mid;
    }
  }
}

TEST_CASE("ellipse residual orders") {
  std::vector<double> coarse, fine;
  for (std::size_t m : {256, 512}) {
    const auto traj = residual_run(make_initial(EllipseShape{2.0, 1.0, m}), 0.01);
    auto& out = m == 256 ? coarse : fine;
    for (Equation eq : {Equation::Metric, Equation::Normal, Equation::SecondFundamentalForm, Equation::MeanCurvature,
                        Equation::NormSquared}) {
      out.push_back(evolution_residual(traj, traj.frames.size() / 2, eq).max_abs());
    }
  }
  for (std::size_t e = 0; e < coarse.size(); ++e) CHECK(std::log2(coarse[e] / fine[e]) >= 1.5);
}

TEST_CASE("residual preconditions") {
  FlowConfig cfg;
  cfg.t_cap = 0.05;
  cfg.record_stride = 5;
  const auto strided = run_flow(make_initial(CircleShape{1.0, 64}), cfg);
  try {
    evolution_residual(strided, 2, Equation::Metric);
    FAIL("expected NonConsecutiveFrames");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonConsecutiveFrames);
  }
  const auto traj = sphere_run(2, 1.0, 0.1);
  CHECK_THROWS_AS(evolution_residual(traj, 0, Equation::Metric), Error);
  CHECK_THROWS_AS(evolution_residual(traj, traj.frames.size() - 1, Equation::Metric), Error);
  cfg.record_stride = 1;
  cfg.redistribute = true;
  const auto moved = run_flow(make_initial(CircleShape{1.0, 64}), cfg);
  CHECK_THROWS_AS(evolution_residual(moved, 2, Equation::Metric), Error);
}

TEST_CASE("pinching residual") {
  SUBCASE("sphere: both sides vanish") {
    const auto traj = sphere_run(3, 1.0, 0.1);
    const auto r = pinching_evolution_residual(traj, traj.frames.size() / 2);
    CHECK(r.residual.max_abs() <= 1e-9);
    CHECK(r.max_gradient_term() == 0.0);
  }
  SUBCASE("ellipse and spheroid") {
    for (const auto& imm : {make_initial(EllipseShape{2.0, 1.0, 512}), make_initial(SpheroidShape{1.5, 1.0, 256, 2})}) {
      const auto traj = residual_run(imm, 0.01);
      const auto r = pinching_evolution_residual(traj, traj.frames.size() / 2);
      CHECK(r.max_gradient_term() <= 1e-12);
      if (std::holds_alternative<PlaneCurve>(imm)) CHECK(r.residual.max_abs() <= 5e-2);
    }
  }
  SUBCASE("requires H > 0") {
    const auto traj = residual_run(make_initial(DumbbellShape{0.2, 1.0, 128, 2}), 1e-4);
    if (traj.frames.front().frame.min_H() <= 0.0) {
      CHECK_THROWS_AS(pinching_evolution_residual(traj, 1), Error);
    }
  }
}

TEST_CASE("Sobolev constant against hand evaluation") {
  // 2^n (1+n)^{1+1/n} / ((n-1) |B^{n+1}|) for n = 3, 4.
  CHECK(sobolev_constant(3) == doctest::Approx(5.1467953120163233).epsilon(1e-12));
  CHECK(std::abs(sobolev_constant(3) - 8.0 * std::pow(4.0, 4.0 / 3.0) / (2.0 * test::kPi * test::kPi / 2.0)) <= 1e-10);
  CHECK(sobolev_constant(4) == doctest::Approx(7.5755254235730627).epsilon(1e-12));
  CHECK_THROWS_AS(moser_constants(2, 1.0, 1.0, 0.5), Error);
}

TEST_CASE("sup-bound constant chain") {
  const auto c = moser_constants(3, 1.0, 1.0, 0.5);
  CHECK(c.beta == 2.0);
  CHECK(c.p == 2.5);
  CHECK(c.s == doctest::Approx(0.66666666666666667).epsilon(1e-14));
  CHECK(c.D == doctest::Approx(9.3967196375106).epsilon(1e-12));
  CHECK(c.C2 == doctest::Approx(316.4788178143703).epsilon(1e-12));
  CHECK(c.p_k(1) == doctest::Approx(2.5 * 5.0 / 3.0));
  // Past T0 the time argument is clipped, and C2 decreases in t.
  const auto late = moser_constants(3, 1.0, 1.0, 50.0);
  CHECK(late.t == 1.0);
  CHECK(late.C2 < c.C2);
  const double floor = std::pow(c.D, 1.2) * std::pow(5.0 / 3.0, 1.5) * 2.5 * c.beta;
  CHECK(late.C2 > floor);
  CHECK_THROWS_AS(moser_constants(3, 0.0, 1.0, 0.5), Error);
}

TEST_CASE("sup bound on sphere trajectories") {
  const auto half = verify_moser_bound(sphere_run(3, 1.0, 1.0 / 12.0));
  CHECK(half.lhs == doctest::Approx(18.0).epsilon(1e-3));
  CHECK(half.margin >= 0.0);
  CHECK(verify_moser_bound(sphere_run(3, 10.0, 15.0)).margin >= 0.0);
  FlowConfig cfg;
  cfg.t_cap = 1.0;
  try {
    verify_moser_bound(run_flow(AnalyticSphere(1.0, 3), cfg));
    FAIL("expected TrajectoryTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TrajectoryTooShort);
  }
  CHECK_THROWS_AS(verify_moser_bound(sphere_run(2, 1.0, 0.1)), Error);
}

TEST_CASE("extension verdicts") {
  SUBCASE("sphere blow-up: critical norms diverge") {
    const auto traj = sphere_run(2, 1.0, 1.0, 0.1);
    const std::vector<double> alphas{4.0};
    const auto rep = extension_report(traj, alphas);
    CHECK(rep.blew_up);
    CHECK(rep.consistent);
    for (const auto& v : rep.norms) CHECK(v.status == NormStatus::Diverging);
    for (const auto& t : rep.theorems) CHECK_FALSE(t.contradiction);
  }
  SUBCASE("circle stopped early: no obstruction") {
    FlowConfig cfg;
    cfg.t_cap = 0.25;
    cfg.record_stride = 100;
    const auto traj = run_flow(make_initial(CircleShape{1.0, 256}), cfg);
    const std::vector<double> alphas{2.0, 3.0};
    const auto rep = extension_report(traj, alphas);
    CHECK_FALSE(rep.blew_up);
    for (const auto& v : rep.norms) {
      CHECK(v.status == NormStatus::Finite);
      CHECK(std::isfinite(v.accumulated));
    }
  }
}
