#include <cmath>
#include <numbers>

#include "bolab/conservation.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bolab;
using testing::max_abs_diff;

namespace {
const double kPi = std::numbers::pi;

double centroid(const RealField& f) {
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    a += f.grid->x()[i] * f.v[i] * f.v[i];
    b += f.v[i] * f.v[i];
  }
  return a / b;
}

RealField translate(const RealField& f, double s) {  // f(x - s), spectrally
  return real_part(apply(f, [&](double xi) { return std::polar(1.0, -xi * s); }));
}
}  // namespace

TEST_CASE("linear propagator") {
  auto g = make_grid(512, 2 * kPi * 16);
  auto f = testing::band_limited(2, g, 8.0);
  CHECK(max_abs_diff(linear_propagate(f, 0.0), f) < 1e-14);
  for (double t : {0.3, 1.0, 7.5})
    CHECK(std::abs(l2_norm(linear_propagate(f, t)) - l2_norm(f)) < 1e-12 * l2_norm(f));

  const double xi0 = 5 * g->dxi(), t = 0.8;
  auto c = sample_fn(g, [&](double x) { return std::cos(xi0 * x); });
  auto expect = sample_fn(g, [&](double x) { return std::cos(xi0 * x - xi0 * xi0 * t); });
  CHECK(max_abs_diff(linear_propagate(c, t), expect) < 1e-12);
}

TEST_CASE("wave packets move right at the group velocity 2|xi|") {
  auto g = make_grid(1024, 256.0);
  const double xi0 = 2.0, x0 = -20.0;
  auto p = sample_fn(g, [&](double x) {
    return std::exp(-(x - x0) * (x - x0) / 100.0) * std::cos(xi0 * (x - x0));
  });
  const double c0 = centroid(p);
  for (double t : {2.0, 5.0, 10.0}) {
    const double v = (centroid(linear_propagate(p, t)) - c0) / t;
    CHECK(std::abs(v - 2 * xi0) < 0.01 * 2 * xi0);
  }
}

TEST_CASE("zero data stays zero") {
  auto g = make_grid(256, 50.0);
  auto tr = evolve(zeros(g), 0.1, 1e-3);
  for (const auto& s : tr.snapshots) CHECK(sup_norm(s.f) == 0.0);
}

TEST_CASE("time is strictly increasing and the observer sees every cadence point") {
  auto g = make_grid(256, 50.0);
  int calls = 0;
  EvolveOptions o;
  o.cadence = 5;
  o.observer = [&](const SolverState&) { ++calls; };
  auto tr = evolve(testing::gauss(g, 0.1, 1.0), 0.1, 1e-3, o);
  CHECK(tr.snapshots.size() == 21);
  CHECK(calls == 21);
  for (std::size_t i = 1; i < tr.snapshots.size(); ++i)
    CHECK(tr.snapshots[i].t > tr.snapshots[i - 1].t);
  CHECK(tr.snapshots.back().t == doctest::Approx(0.1));
}

TEST_CASE("mass and mean conservation for Gaussian data") {
  auto g = make_grid(1024, 64 * kPi);
  auto f = testing::gauss(g, 0.1, 1.0);
  EvolveOptions o;
  o.cadence = 1000;
  auto tr = evolve(f, 5.0, 1e-3, o);
  const double m0 = mass(f), m1 = mass(tr.snapshots.back().f);
  CHECK(std::abs(m1 - m0) / m0 < 1e-8);
  CHECK(std::abs(mean(tr.snapshots.back().f) - mean(f)) < 1e-12);
}

TEST_CASE("soliton profile") {
  auto g = make_grid(4096, 256 * kPi);
  CHECK(soliton_residual(0.25, g) < 1e-8);
  CHECK(soliton_speed(0.25) == -0.25);
  CHECK(mass(soliton(0.25, 0.0, g)) / mass(soliton(0.125, 0.0, g)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(soliton(0.5, 0.0, g), ConfigError);  // Fourier tail above round-off at the cutoff
  CHECK(mass(soliton(0.25, 0.0, g)) == doctest::Approx(8 * kPi * 0.25).epsilon(1e-10));
  auto q = soliton(0.25, 3.0, g);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < q.v.size(); ++i)
    if (q.v[i] > q.v[imax]) imax = i;
  CHECK(std::abs(g->x()[imax] - 3.0) <= g->dx());
  CHECK(q.v[imax] == doctest::Approx(1.0).epsilon(1e-3));  // line profile peak 4c
  CHECK_THROWS_AS(soliton(1e-4, 0.0, g), ConfigError);     // wider than the domain allows
}

TEST_CASE("soliton moves left and keeps its shape") {
  auto g = make_grid(1024, 64 * kPi);
  const double c = 0.25, T = 2.0;
  auto q = soliton(c, 0.0, g);
  EvolveOptions o;
  o.cadence = 2000;
  auto tr = evolve(q, T, 1e-3, o);
  auto expect = translate(q, soliton_speed(c) * T);
  CHECK(l2_norm(tr.snapshots.back().f - expect) / l2_norm(q) < 1e-6);
}

TEST_CASE("fourth order in time") {
  auto g = make_grid(512, 16 * kPi);
  const double c = 0.25, T = 4.0;
  auto q = soliton(c, 0.0, g);
  auto expect = translate(q, soliton_speed(c) * T);
  for (Integrator I : {Integrator::ifrk4, Integrator::etdrk4}) {
    double err[2];
    int idx = 0;
    for (double dt : {0.1, 0.05}) {
      EvolveOptions o;
      o.integrator = I;
      o.cadence = std::int64_t(std::llround(T / dt));
      err[idx++] = l2_norm(evolve(q, T, dt, o).snapshots.back().f - expect);
    }
    INFO(to_string(I), " ", err[0], " ", err[1]);
    CHECK(err[0] / err[1] == doctest::Approx(16.0).epsilon(0.2));
  }
}

TEST_CASE("integrators agree") {
  auto g = make_grid(512, 32 * kPi);
  auto f = testing::gauss(g, 0.5, 1.0);
  EvolveOptions a, b;
  a.cadence = b.cadence = 500;
  b.integrator = Integrator::etdrk4;
  auto ta = evolve(f, 0.5, 1e-3, a), tb = evolve(f, 0.5, 1e-3, b);
  CHECK(max_abs_diff(ta.snapshots.back().f, tb.snapshots.back().f) < 1e-10);
  CHECK(integrator_from_string("etdrk4") == Integrator::etdrk4);
  CHECK(to_string(Integrator::ifrk4) == "ifrk4");
  CHECK_THROWS_AS(integrator_from_string("euler"), ConfigError);
}

TEST_CASE("scale invariance") {
  // phi -> lam phi(lam^2 t, lam x): the rescaled run on the rescaled grid is the same discrete flow
  const double lam = 2.0, L = 32 * kPi, T = 0.5, dt = 1e-3;
  auto g1 = make_grid(512, L), g2 = make_grid(512, L / lam);
  auto f1 = testing::gauss(g1, 0.4, 2.0);
  auto f2 = testing::gauss(g2, 0.4 * lam, 2.0 / lam);
  EvolveOptions o1, o2;
  o1.cadence = o2.cadence = 500;
  auto a = evolve(f1, T, dt, o1).snapshots.back().f;
  auto b = evolve(f2, T / (lam * lam), dt / (lam * lam), o2).snapshots.back().f;
  double err = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) err = std::max(err, std::abs(b.v[i] - lam * a.v[i]));
  CHECK(err / sup_norm(b) < 1e-6);
}

TEST_CASE("step errors") {
  auto g = make_grid(1024, 32 * kPi);
  auto f = testing::gauss(g, 50.0, 0.5);
  CHECK_THROWS_AS(evolve(f, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(evolve(f, 1.0, 0.5), ConfigError);  // dt above the stability heuristic
  EvolveOptions o;
  o.enforce_dt_max = false;
  try {
    evolve(f, 50.0, 0.5, o);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.last_good_time >= 0.0);
    CHECK(e.last_good_time < 50.0);
  }
}

TEST_CASE("single step") {
  auto g = make_grid(256, 16 * kPi);
  SolverState s{testing::gauss(g, 0.2, 1.0), 0.0, 0};
  auto n = step(s, 1e-3);
  CHECK(n.time == doctest::Approx(1e-3));
  CHECK(n.step_count == 1);
  CHECK(all_finite(n.field));
}

TEST_CASE("linearized flow on a zero background is the linear flow") {
  auto g = make_grid(512, 32 * kPi);
  auto bg = evolve(zeros(g), 0.5, 1e-2);
  LinearizedState s{testing::band_limited(4, g, 3.0), &bg, 0.0};
  const auto v0 = s.v;
  for (int i = 0; i < 50; ++i) {
    s = step_linearized(s, 1e-2);
    s.time = (i + 1) * 1e-2;
  }
  CHECK(max_abs_diff(s.v, linear_propagate(v0, 0.5)) < 1e-10 * sup_norm(v0));
  LinearizedState late{v0, &bg, 0.6};
  CHECK_THROWS_AS(step_linearized(late, 1e-2), RangeError);
}

TEST_CASE("translation mode of the soliton") {
  auto g = make_grid(1024, 64 * kPi);
  const double c = 0.25, T = 1.0, dt = 1e-3;
  auto q = soliton(c, 0.0, g);
  auto bg = evolve(q, T, dt);
  LinearizedState s{derivative(q, 1), &bg, 0.0};
  for (int i = 0; i < 1000; ++i) {
    s = step_linearized(s, dt);
    s.time = (i + 1) * dt;
  }
  auto expect = derivative(bg.snapshots.back().f, 1);
  CHECK(l2_norm(s.v - expect) / l2_norm(expect) < 1e-3);
}

TEST_CASE("linearized growth obeys the Gronwall bound") {
  auto g = make_grid(512, 32 * kPi);
  const double dt = 1e-3;
  auto bg = evolve(testing::gauss(g, 1.0, 1.0), 1.0, dt);
  double integral = 0.0;
  for (std::size_t i = 1; i < bg.snapshots.size(); ++i)
    integral += 0.5 * dt * (sup_norm(derivative(bg.snapshots[i - 1].f, 1)) +
                            sup_norm(derivative(bg.snapshots[i].f, 1)));
  LinearizedState s{testing::band_limited(9, g, 2.0), &bg, 0.0};
  const double n0 = l2_norm(s.v);
  for (int i = 0; i < 1000; ++i) {
    s = step_linearized(s, dt);
    s.time = (i + 1) * dt;
  }
  CHECK(l2_norm(s.v) <= std::exp(integral) * n0 * (1 + 1e-3));
}

TEST_CASE("reference data") {
  auto g = make_grid(1024, 64 * kPi);
  const double a = 0.3, w = 1.7;
  CHECK(std::abs(l2_norm(gaussian(a, w, 0.0, g)) - a * std::pow(kPi * w * w / 2, 0.25)) < 1e-10);
  auto r1 = random_localized(7, 0.1, g), r2 = random_localized(7, 0.1, g), r3 = random_localized(8, 0.1, g);
  CHECK(r1.v == r2.v);
  CHECK(r1.v != r3.v);
  CHECK(data_functional(r1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(mean(r1)) < 1e-14);
  auto n = normalize_data(gaussian(1.0, 1.0, 0.0, g), 0.05);
  CHECK(data_functional(n) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian(1.0, 0.01, 0.0, g), ConfigError);
  const RealField d = gaussian_derivative(a, w, 0.0, g);
  CHECK(std::abs(l2_norm(d) - a * std::sqrt(w * std::sqrt(kPi / 2) / 4)) < 1e-10);
  CHECK(max_abs_diff(d, -(w / 2) * derivative(gaussian(a, w, 0.0, g), 1)) < 1e-10);
  CHECK(std::abs(mean(d)) < 1e-14);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("push forward of x along the linear flow") {
  // mean-zero Gaussian data: a nonzero mean feeds algebraic tails that reach the boundary
  auto g = make_grid(8192, 512 * kPi);
  auto f = derivative(gaussian(1.0, 1.0, 0.0, g), 1);
  CHECK(max_abs_diff(push_forward_L(f, 0.0), times_x(f)) < 1e-15);
  const double x0 = weighted_l2(f, Weight::x);
  for (double t : {1.0, 4.0, 10.0}) {
    auto psi = linear_propagate(f, t);
    CHECK(std::abs(l2_norm(push_forward_L(psi, t)) - x0) < 1e-8 * x0);
  }
  auto wide = sample_fn(g, [](double) { return 1.0; });
  CHECK_THROWS_AS(push_forward_L(wide, 1.0), PreconditionError);
}
