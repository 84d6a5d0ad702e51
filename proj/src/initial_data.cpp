#include <cmath>
#include <numbers>
#include <string>

#include "bolab/evolution.hpp"

namespace bolab {

RealField soliton(double c, double x0, const GridPtr& g) {
  const double L = g->length();
  const double kappa = 2.0 * std::numbers::pi / L;
  if (!(c > kappa))
    throw ConfigError("soliton speed c = " + std::to_string(c) + " must exceed 2pi/L = " +
                      std::to_string(kappa));
  if (1.0 / c > L / 8.0) throw ConfigError("soliton profile too wide for the domain");
  const double gam = std::atanh(kappa / c);
  // Fourier tail of Q is exp(-gam |m|); require it below 1e-14 at the de-aliasing cutoff
  if (gam * static_cast<double>(g->dealias_mode()) < 32.3)
    throw ConfigError("soliton profile too narrow for the grid (c = " + std::to_string(c) + ")");
  const double sh = std::sinh(0.5 * gam);
  const double num = 2.0 * kappa * std::sinh(gam);
  return sample_fn(g, [&](double x) {
    const double s = std::sin(0.5 * kappa * (x - x0));
    return num / (2.0 * sh * sh + 2.0 * s * s);
  });
}

double soliton_speed(double c) { return -c; }

double soliton_residual(double c, const GridPtr& g) {
  const RealField Q = soliton(c, 0.0, g);
  const RealField Qx = derivative(Q, 1);
  const RealField r = c * Qx + hilbert(derivative(Q, 2)) - product(Q, Qx);
  return l2_norm(r) / l2_norm(c * Qx);
}

RealField gaussian(double amplitude, double width, double x0, const GridPtr& g) {
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  if (width < 2.0 * g->dx()) throw ConfigError("gaussian narrower than two grid spacings");
  if (width > 0.1 * g->length()) throw ConfigError("gaussian too wide for the domain");
  return sample_fn(g, [&](double x) {
    const double y = (x - x0) / width;
    return amplitude * std::exp(-y * y);
  });
}

RealField odd_gaussian(double amplitude, double width, double x0, const GridPtr& g) {
  RealField f = gaussian(amplitude, width, x0, g);
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    const double d = g->x()[i] - x0;
    f.v[i] *= d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  }
  return f;
}

RealField gaussian_derivative(double amplitude, double width, double x0, const GridPtr& g) {
  RealField f = gaussian(amplitude, width, x0, g);
  for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] *= (g->x()[i] - x0) / width;
  return f;
}

double data_functional(const RealField& f, double boundary_tol) {
  return l2_norm(f) + weighted_l2(f, Weight::x, boundary_tol);
}

RealField normalize_data(const RealField& f, double eps, double boundary_tol) {
  const double d = data_functional(f, boundary_tol);
  if (!(d > 0.0)) throw ArgumentError("cannot normalize a zero field");
  return (eps / d) * f;
}

RealField random_localized(std::uint64_t seed, double eps, const GridPtr& g,
                           const RandomDataOptions& opt) {
  Rng rng(seed);
  RealField G = zeros(g);
  for (int b = 0; b < opt.bumps; ++b) {
    const double a = rng.normal();
    const double c = rng.uniform(-opt.spread, opt.spread);
    const double w = opt.width * rng.uniform(0.5, 1.5);
    for (std::size_t i = 0; i < G.v.size(); ++i) {
      const double y = (g->x()[i] - c) / w;
      G.v[i] += a * std::exp(-y * y);
    }
  }
  const double band = opt.band;
  RealField phi = apply_real(G, [band](double xi) {
    return cplx(0.0, xi) * (band > 0.0 ? bump(xi / band) : 1.0);
  });
  return normalize_data(phi, eps);
}

RealField dyadic_random(std::uint64_t seed, int k, double amplitude, const GridPtr& g) {
  if (k < 1) throw ArgumentError("dyadic_random needs k >= 1");
  if (!(amplitude >= 0.0)) throw ArgumentError("amplitude must be non-negative");
  Rng rng(seed);
  const double s = std::ldexp(1.0, k);
  RealField G = zeros(g);
  for (int b = 0; b < 5; ++b) {
    const double a = rng.normal();
    const double c = rng.uniform(-4.0, 4.0) / s;
    for (std::size_t i = 0; i < G.v.size(); ++i) {
      const double y = (g->x()[i] - c) * s / 2.0;
      G.v[i] += a * std::exp(-y * y);
    }
  }
  RealField phi = apply_real(G, [s](double xi) { return cplx(0.0, xi) * bump(xi / s); });
  const double m = sup_norm(phi);
  if (m == 0.0) return phi;
  return (amplitude / m) * phi;
}

RealField push_forward_L(const RealField& f, double t, double boundary_tol) {
  require_localized(f, boundary_tol, "push_forward_L");
  return times_x(f) - (2.0 * t) * hilbert(derivative(f, 1));
}

}  // namespace bolab
