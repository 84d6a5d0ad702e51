#include <cmath>
#include <numbers>

#include "bolab/conservation.hpp"
#include "bolab/diagnostics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bolab;
using testing::max_abs_diff;

namespace {
const double kPi = std::numbers::pi;

RealField reflect(const RealField& f) {  // f(-x); x_0 = -L/2 maps to itself
  RealField r = f;
  const std::size_t n = f.v.size();
  for (std::size_t i = 1; i < n; ++i) r.v[i] = f.v[n - i];
  return r;
}

RealField shift(const RealField& f, double s) {
  return real_part(apply(f, [&](double xi) { return std::polar(1.0, -xi * s); }));
}
}  // namespace

TEST_CASE("functionals of zero") {
  auto g = make_grid(256, 20.0);
  CHECK(mass(zeros(g)) == 0.0);
  CHECK(momentum(zeros(g)) == 0.0);
  CHECK(energy(zeros(g)) == 0.0);
}

TEST_CASE("mass of a Gaussian") {
  auto g = make_grid(1024, 64 * kPi);
  const double a = 0.1;
  CHECK(std::abs(mass(testing::gauss(g, a, 1.0)) - a * a * std::sqrt(kPi / 2)) < 1e-10);
}

TEST_CASE("densities integrate to the functionals") {
  auto g = make_grid(1024, 64 * kPi);
  auto f = random_localized(3, 0.2, g);
  auto d = densities(f);
  CHECK(std::abs(integral(d.m) - mass(f)) < 1e-12 * mass(f));
  CHECK(std::abs(integral(d.p) - momentum(f)) < 1e-12 * std::abs(momentum(f)));
  CHECK(std::abs(integral(d.e) - energy(f)) < 1e-12 * std::abs(energy(f)));
  CHECK(integral(product(derivative(f, 1), derivative(f, 1))) >= 0.0);
}

TEST_CASE("momentum of a single mode") {
  // A cos(xi0 x): int phi H phi_x = A^2 |xi0| L / 2, the cubic term integrates to 0
  const double L = 2 * kPi * 8, A = 0.3;
  auto g = make_grid(256, L);
  const double xi0 = 3 * g->dxi();
  auto f = sample_fn(g, [&](double x) { return A * std::cos(xi0 * x); });
  CHECK(momentum(f) == doctest::Approx(A * A * xi0 * L / 2).epsilon(1e-12));
  CHECK(momentum(f) == doctest::Approx(xi0 * mass(f)).epsilon(1e-12));
}

TEST_CASE("momentum flips under reflection") {
  auto g = make_grid(1024, 64 * kPi);
  auto f = random_localized(5, 0.3, g);
  auto r = reflect(f);
  // H anticommutes with reflection; the cubic term flips with the field sign
  const double p = momentum(f);
  const double quad = integral(product(f, hilbert(derivative(f, 1))));
  const double quad_r = integral(product(r, hilbert(derivative(r, 1))));
  CHECK(std::abs(quad_r - quad) < 1e-10 * std::abs(quad));
  CHECK(std::abs(momentum(-1.0 * r) + p - 2 * quad) < 1e-10 * std::abs(quad));
  CHECK(std::abs(mass(r) - mass(f)) < 1e-12 * mass(f));
}

// spectrum inside |xi| <= 3, so cubic products are not truncated by de-aliasing
RandomDataOptions narrow() {
  RandomDataOptions o;
  o.band = 1.5;
  return o;
}

TEST_CASE("translation invariance") {
  auto g = make_grid(4096, 256 * kPi);
  auto f = random_localized(6, 0.2, g, narrow());
  auto s = shift(f, 1.3);
  CHECK(std::abs(mass(s) - mass(f)) < 1e-8 * mass(f));
  CHECK(std::abs(momentum(s) - momentum(f)) < 1e-8 * std::abs(momentum(f)));
  CHECK(std::abs(energy(s) - energy(f)) < 1e-8 * std::abs(energy(f)));
  // x-weighted: x f(x - s) = (x - s) f(x - s) + s f(x - s)
  const double G0 = scaling_functional(f, 0.0);
  RealField xs = times_x(s) - 1.3 * s;
  CHECK(std::abs(l2_norm(xs) * l2_norm(xs) - G0) < 1e-8 * G0);
}

TEST_CASE("scaling operator") {
  auto g = make_grid(4096, 256 * kPi);
  auto f = random_localized(2, 0.1, g, narrow());
  CHECK(max_abs_diff(scaling_operator(f, 0.0), times_x(f)) < 1e-15);
  CHECK(scaling_functional(f, 0.0) ==
        doctest::Approx(std::pow(weighted_l2(f, Weight::x), 2)).epsilon(1e-12));
  // the nonlinear correction is quadratic: ||(scaling op - L) phi|| / ||phi|| = O(a t)
  std::vector<double> amps{0.01, 0.02, 0.04, 0.08}, defect;
  for (double a : amps) {
    auto p = a * (1.0 / sup_norm(f)) * f;
    defect.push_back(l2_norm(scaling_operator(p, 1.0) - push_forward_L(p, 1.0)) / l2_norm(p));
  }
  CHECK(loglog_fit(amps, defect).slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("G equals the squared norm of the scaling operator") {
  auto g = make_grid(4096, 256 * kPi);
  RandomDataOptions o;
  o.band = 1.5;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto f = random_localized(seed, 0.1, g, o);
    for (double t : {0.0, 1.0, 5.0}) {
      const double G = scaling_functional(f, t);
      const double n = l2_norm(scaling_operator(f, t));
      CHECK(std::abs(G - n * n) / G < 1e-6);
    }
  }
  auto f = random_localized(4, 0.1, g, o);
  for (double t : {0.5, 3.0}) {
    const double n = l2_norm(push_forward_L(f, t));
    CHECK(std::abs(linear_scaling_functional(f, t) - n * n) < 1e-10 * n * n);
  }
}

TEST_CASE("Hilbert product identity") {
  auto g = make_grid(1024, 64 * kPi);
  auto f = testing::band_limited(12, g, 0.3 * g->dealias_cutoff());
  f = (1.0 / sup_norm(f)) * f;
  CHECK(hilbert_identity_residual(f) < 1e-10);
}

TEST_CASE("moment of the cubed positive part vanishes") {
  auto g = make_grid(1024, 64 * kPi);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto m = moment_cancellation(random_localized(seed, 0.5, g));
    CHECK(m.scale > 0.0);
    CHECK(std::abs(m.value) < 1e-8 * m.scale);
  }
}

TEST_CASE("conservation report") {
  auto g = make_grid(4096, 256 * kPi);
  EvolveOptions o;
  o.cadence = 100;
  auto tr = evolve(random_localized(9, 0.1, g, narrow()), 1.0, 1e-3, o);
  auto r = conservation_report(tr);
  CHECK(r.times.size() == 11);
  CHECK(r.drifts.E0 < 1e-10);
  CHECK(r.drifts.E2 < 1e-8);
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("t,E0,E1,E2,G,L2_scalingop", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(drifts_json(r).back() == '\n');
  CHECK(relative_drift({0.0, 0.0}) == 0.0);
  CHECK(relative_drift({1.0, 1.5}) == doctest::Approx(0.5 / 1.25));
}

TEST_CASE("decay bounds along a linear run") {
  auto g = make_grid(8192, 512 * kPi);
  auto tr = linear_trajectory(derivative(gaussian(0.1, 1.0, 0.0, g), 1), {0.0, 1.0, 2.0, 4.0, 8.0});
  auto d = decay_bounds_check(tr);
  CHECK(std::isfinite(d.max_L_ratio));
  CHECK(std::isfinite(d.max_sup_ratio));
  for (std::size_t i = 1; i < d.L_ratio.size(); ++i) CHECK(d.L_ratio[i] <= d.L_ratio[i - 1] * (1 + 1e-12));
}
