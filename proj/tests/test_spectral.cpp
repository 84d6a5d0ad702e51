#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace bolab;
using testing::band_limited;
using testing::max_abs_diff;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("grid layout") {
  auto g = make_grid(16, 2 * kPi);
  CHECK(g->x().front() == doctest::Approx(-kPi));
  CHECK(g->dx() == doctest::Approx(2 * kPi / 16));
  CHECK(g->xi()[1] == doctest::Approx(1.0));
  CHECK(g->xi()[8] == doctest::Approx(-8.0));  // Nyquist is negative
  CHECK(g->dealias_mode() == 5);
  CHECK_THROWS_AS(make_grid(12, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(16, -1.0), ConfigError);
}

TEST_CASE("dft of zero is zero") {
  auto g = make_grid(64, 10.0);
  auto F = dft(zeros(g));
  for (auto c : F.c) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("dft of a single cosine has two coefficients") {
  const double L = 7.0;
  auto g = make_grid(64, L);
  auto f = sample_fn(g, [&](double x) { return std::cos(2 * kPi * x / L); });
  auto F = dft(f);
  int nonzero = 0;
  for (std::size_t i = 0; i < g->n(); ++i) {
    if (std::abs(F.c[i]) > 1e-9) {
      ++nonzero;
      CHECK(std::abs(std::abs(g->xi()[i]) - 2 * kPi / L) < 1e-12);
      CHECK(std::abs(F.c[i]) == doctest::Approx(32.0));  // unnormalized forward: n/2
    }
  }
  CHECK(nonzero == 2);
  CHECK(F.real_valued);
  CHECK(hermitian(F));
}

TEST_CASE("dft round trip and Parseval across sizes") {
  for (std::size_t n = 256; n <= 16384; n *= 2) {
    auto g = make_grid(n, 50.0);
    auto f = band_limited(n, g, 0.3 * g->dealias_cutoff());
    auto back = real_part(idft(dft(f)));
    CHECK(max_abs_diff(back, f) < 1e-12 * sup_norm(f));
    // sum |f|^2 dx = (L / n^2) sum |F|^2
    double s = 0.0;
    for (auto c : dft(f).c) s += std::norm(c);
    const double parseval = g->length() / double(n * n) * s;
    CHECK(std::abs(parseval - l2_norm(f) * l2_norm(f)) < 1e-12 * parseval);
  }
}

TEST_CASE("complex round trip") {
  auto g = make_grid(512, 30.0);
  auto a = band_limited(3, g, 5.0), b = band_limited(4, g, 5.0);
  ComplexField z{g, cvec(g->n())};
  for (std::size_t i = 0; i < g->n(); ++i) z.v[i] = {a.v[i], b.v[i]};
  CHECK(max_abs_diff(idft(dft(z)), z) < 1e-12 * sup_norm(z));
}

TEST_CASE("size mismatch is a configuration error") {
  auto g = make_grid(64, 1.0);
  RealField bad{g, rvec(32)};
  CHECK_THROWS_AS(dft(bad), ConfigError);
}

TEST_CASE("hilbert transform") {
  auto g = make_grid(256, 2 * kPi * 8);
  const double xi0 = 3.0 * g->dxi();
  auto c = sample_fn(g, [&](double x) { return std::cos(xi0 * x); });
  auto s = sample_fn(g, [&](double x) { return std::sin(xi0 * x); });
  CHECK(max_abs_diff(hilbert(c), s) < 1e-13);

  auto f = band_limited(7, g, 10.0);
  auto hh = hilbert(hilbert(f));
  CHECK(max_abs_diff(hh, -1.0 * f) < 1e-12 * sup_norm(f));

  // iHf = P+f - P-f
  auto plus = project_complex(f, {Proj::plus});
  auto minus = project_complex(f, {Proj::minus});
  auto iH = cplx(0, 1) * to_complex(hilbert(f));
  CHECK(max_abs_diff(iH, plus - minus) < 1e-12 * sup_norm(f));

  // antisymmetry
  auto h = band_limited(8, g, 10.0);
  CHECK(std::abs(inner(f, hilbert(h)) + inner(hilbert(f), h)) < 1e-12 * l2_norm(f) * l2_norm(h));
}

TEST_CASE("hilbert kills the zero mode") {
  auto g = make_grid(64, 10.0);
  auto one = sample_fn(g, [](double) { return 1.0; });
  CHECK(sup_norm(hilbert(one)) < 1e-15);
}

TEST_CASE("real multipliers preserve Hermitian symmetry") {
  auto g = make_grid(512, 40.0);
  auto f = band_limited(11, g, 20.0);
  CHECK(hermitian(dft(hilbert(f))));
  CHECK(hermitian(dft(derivative(f, 3))));
  CHECK(hermitian(dft(project(f, {Proj::band, 3}))));
}

TEST_CASE("bump and dyadic symbols") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(1.0) == 1.0);
  CHECK(bump(-1.0) == 1.0);
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(2.5) == 0.0);
  CHECK(bump(1.5) == doctest::Approx(0.5));
  CHECK(bump(1.3) == doctest::Approx(bump(-1.3)));
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  for (double t = 0.0; t < 1.0; t += 0.01) CHECK(smoothstep(t + 0.01) >= smoothstep(t));
  // P_k symbol at xi = 2^j: only k = j and k = j + 1 can be nonzero
  for (int j = 0; j < 6; ++j) {
    const double xi = std::ldexp(1.0, j);
    double total = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double s = sym_band(xi, k);
      total += s;
      if (k != j && k != j + 1) CHECK(s == 0.0);
    }
    CHECK(total == doctest::Approx(1.0));
    // bump(1) = 1 and bump(2) = 0 put the whole mode in band j
    CHECK(sym_band(xi, j) == 1.0);
  }
  CHECK(sym_enlarged(1.5 * 8, 3) == 1.0);
}

TEST_CASE("dyadic partition reproduces the field") {
  auto g = make_grid(1024, 64 * kPi);
  const int K = 6;
  auto f = band_limited(5, g, std::ldexp(1.0, K - 1));
  RealField sum = zeros(g);
  for (int k = 0; k <= K; ++k) sum = sum + project(f, {Proj::band, k});
  CHECK(max_abs_diff(sum, f) < 1e-12 * sup_norm(f));
}

TEST_CASE("projections to positive dyadic bands") {
  auto g = make_grid(1024, 64 * kPi);
  auto f = band_limited(6, g, 40.0);
  auto pk = project_complex(f, {Proj::band_plus, 3});
  auto F = dft(pk);
  for (std::size_t i = 0; i < g->n(); ++i) {
    const double xi = g->xi()[i];
    if (xi <= 0.0 || sym_band(xi, 3) == 0.0) CHECK(std::abs(F.c[i]) < 1e-10);
  }
  CHECK_THROWS_AS(project(f, {Proj::band, -1}), ArgumentError);
  CHECK_THROWS_AS(project(f, {Proj::plus}), ArgumentError);  // not real preserving
}

TEST_CASE("derivatives") {
  auto g = make_grid(256, 2 * kPi * 4);
  const double xi0 = 5 * g->dxi();
  auto s = sample_fn(g, [&](double x) { return std::sin(xi0 * x); });
  auto c = sample_fn(g, [&](double x) { return xi0 * std::cos(xi0 * x); });
  CHECK(max_abs_diff(derivative(s, 1), c) < 1e-12);

  auto f = band_limited(9, g, 8.0);
  auto shifted = f;
  for (auto& v : shifted.v) v += 0.7;
  auto back = antiderivative(derivative(shifted, 1)).field;
  CHECK(max_abs_diff(back, f) < 1e-12 * sup_norm(f));

  auto half = abs_derivative(abs_derivative(f, 0.5), 0.5);
  CHECK(max_abs_diff(half, abs_derivative(f, 1.0)) < 1e-12 * sup_norm(derivative(f, 1)));
  CHECK(max_abs_diff(half, hilbert(derivative(f, 1))) < 1e-12 * sup_norm(derivative(f, 1)));
}

TEST_CASE("antiderivative mean handling and pin") {
  auto g = make_grid(256, 20.0);
  auto f = testing::gauss(g, 1.0, 1.0);
  try {
    antiderivative(f);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(e.value == doctest::Approx(mean(f)));
  }
  auto r = antiderivative(f, MeanMode::drop);
  CHECK(r.dropped_mean == doctest::Approx(mean(f)));
  CHECK(std::abs(mean(r.field)) < 1e-14);

  auto df = derivative(f, 1);
  auto pinned = antiderivative(df, MeanMode::strict, Pin::left_edge).field;
  CHECK(std::abs(pinned.v.front()) < 1e-14);
  CHECK(max_abs_diff(pinned, f) < 1e-12);  // integral from the left edge recovers f
}

TEST_CASE("primitive of phi") {
  auto g = make_grid(256, 2 * kPi * 4);
  CHECK(sup_norm(primitive_phi(zeros(g))) == 0.0);
  const double xi0 = 3 * g->dxi();
  auto phi = sample_fn(g, [&](double x) { return 2 * std::cos(xi0 * x); });
  auto Phi = primitive_phi(phi);
  CHECK(std::abs(Phi.v.front()) < 1e-14);
  const double c = -std::sin(xi0 * g->x().front()) / xi0;
  auto expect = sample_fn(g, [&](double x) { return std::sin(xi0 * x) / xi0 + c; });
  CHECK(max_abs_diff(Phi, expect) < 1e-12);
}

TEST_CASE("Phi equation along a trajectory") {
  // d/dx of (Phi_t + H Phi_xx - Phi_x^2) = 1/2 (phi_t + H phi_xx - phi phi_x); phi_t from the solver
  auto g = make_grid(512, 32 * kPi);
  auto phi0 = derivative(testing::gauss(g, 0.3, 2.0), 1);
  EvolveOptions o;
  o.cadence = 10;
  const double dt = 1e-3;
  auto tr = evolve(phi0, 0.02, dt, o);
  const auto& a = tr.snapshots[0].f;
  const auto& b = tr.snapshots[1].f;
  const auto& c = tr.snapshots[2].f;
  const double h = tr.snapshots[1].t - tr.snapshots[0].t;
  RealField phit = (0.5 / h) * (c - a);
  auto Pa = primitive_phi(a), Pc = primitive_phi(c), Pb = primitive_phi(b);
  RealField Phit = (0.5 / h) * (Pc - Pa);
  auto Phix = derivative(Pb, 1);
  RealField res = Phit + hilbert(derivative(Pb, 2)) - product(Phix, Phix);
  RealField lhs = derivative(res, 1);
  RealField rhs = 0.5 * (phit + hilbert(derivative(b, 2)) - product(b, derivative(b, 1)));
  // centered difference in time: O(h^2) on both sides, identical up to round-off
  CHECK(max_abs_diff(lhs, rhs) < 1e-8 * sup_norm(rhs) + 1e-12);
  CHECK(sup_norm(rhs) < 1e-4 * sup_norm(phit));  // solver residual is small
}

TEST_CASE("norms") {
  auto g = make_grid(1024, 40.0);
  auto f = testing::gauss(g, 1.0, 1.0);
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  CHECK(std::abs(l2_norm(f) * l2_norm(f) - std::sqrt(kPi / 2)) < 1e-10);

  const double L = 2 * kPi * 10, A = 0.7;
  auto g2 = make_grid(256, L);
  const double xi0 = 4 * g2->dxi();
  auto m = sample_fn(g2, [&](double x) { return A * std::cos(xi0 * x); });
  // ||A cos|| = A sqrt(L/2), Sobolev weight <xi0>^s
  for (double s : {-0.5, 0.0, 1.0, 2.0})
    CHECK(sobolev_norm(m, s) ==
          doctest::Approx(A * std::sqrt(L / 2) * std::pow(1 + xi0 * xi0, s / 2)).epsilon(1e-12));

  CHECK(sup_norm(f) == doctest::Approx(1.0));
  // ||x e^{-x^2}||^2 = sqrt(pi/2) / 4
  CHECK(std::abs(std::pow(weighted_l2(f, Weight::x), 2) - std::sqrt(kPi / 2) / 4) < 1e-10);
  auto wide = testing::gauss(g, 1.0, 8.0);
  CHECK_THROWS_AS(weighted_l2(wide, Weight::x), PreconditionError);
}

TEST_CASE("de-aliasing") {
  auto g = make_grid(64, 2 * kPi);
  auto f = band_limited(1, g, 10.0);  // below n/3 = 21
  CHECK(max_abs_diff(dealias(f), f) < 1e-13);
  auto rough = band_limited(2, g, 32.0);
  auto once = dealias(rough);
  CHECK(max_abs_diff(dealias(once), once) < 1e-15);
  auto F = dealias(dft(rough));
  for (std::size_t i = 0; i < g->n(); ++i)
    if (std::abs(g->mode(i)) > 21) CHECK(std::abs(F.c[i]) == 0.0);
}

TEST_CASE("de-aliased product equals truncated convolution") {
  const std::size_t n = 64;
  auto g = make_grid(n, 2 * kPi);
  auto a = band_limited(21, g, 21.0), b = band_limited(22, g, 21.0);
  auto A = dft(a), B = dft(b);
  // direct convolution of the normalized coefficients
  cvec C(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long m = g->mode(i) + g->mode(j);
      if (std::abs(m) > 21) continue;
      const std::size_t slot = m >= 0 ? std::size_t(m) : std::size_t(long(n) + m);
      C[slot] += A.c[i] * B.c[j] / double(n);
    }
  auto P = dft(product(a, b));
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(P.c[i] - C[i]));
    scale = std::max(scale, std::abs(C[i]));
  }
  CHECK(err < 1e-12 * scale);
}
