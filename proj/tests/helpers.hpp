#pragma once

#include <cmath>

#include "bolab/evolution.hpp"
#include "bolab/spectral.hpp"

namespace testing {

inline double max_abs_diff(const bolab::RealField& a, const bolab::RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

inline double max_abs_diff(const bolab::ComplexField& a, const bolab::ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

// mean-zero, spectrum supported in |xi| <= xi_max
inline bolab::RealField band_limited(std::uint64_t seed, const bolab::GridPtr& g, double xi_max) {
  bolab::Rng rng(seed);
  bolab::cvec h(g->n() / 2 + 1);
  for (std::size_t i = 1; i + 1 < h.size(); ++i)
    if (bolab::half_xi(*g, i) <= xi_max) h[i] = {rng.normal(), rng.normal()};
  return bolab::irfft(g, std::move(h));
}

inline bolab::RealField gauss(const bolab::GridPtr& g, double a, double w, double x0 = 0.0) {
  return bolab::sample_fn(g, [&](double x) { return a * std::exp(-(x - x0) * (x - x0) / (w * w)); });
}

}  // namespace testing
