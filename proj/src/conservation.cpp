#include "bolab/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace bolab {

Densities densities(const RealField& phi) {
  const RealField px = derivative(phi, 1);
  const RealField hpx = hilbert(px);
  const RealField s = product(phi, phi);
  const RealField cube = product(s, phi);
  Densities d{s, product(phi, hpx) - (1.0 / 3.0) * cube, {}};
  d.e = product(px, px) - 0.75 * product(s, hpx) + 0.125 * product(s, s);
  return d;
}

double mass(const RealField& phi) { return integral(product(phi, phi)); }
double momentum(const RealField& phi) { return integral(densities(phi).p); }
double energy(const RealField& phi) { return integral(densities(phi).e); }

RealField scaling_operator(const RealField& phi, double t, double boundary_tol) {
  require_localized(phi, boundary_tol, "scaling_operator");
  const RealField h = hilbert(phi);
  const RealField quad = 3.0 * product(phi, phi) - product(h, h);
  return times_x(phi) - (2.0 * t) * hilbert(derivative(phi, 1)) + (0.25 * t) * quad;
}

static double weighted_functional(const RealField& phi, double t, const RealField& p,
                                  const RealField& e, const RealField& m) {
  const auto& x = phi.grid->x();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += x[i] * x[i] * m.v[i] - 4.0 * x[i] * t * p.v[i] + 4.0 * t * t * e.v[i];
  return s * phi.grid->dx();
}

double scaling_functional(const RealField& phi, double t, double boundary_tol) {
  require_localized(phi, 0.1 * boundary_tol, "scaling_functional");
  const Densities d = densities(phi);
  return weighted_functional(phi, t, d.p, d.e, d.m);
}

double linear_scaling_functional(const RealField& phi, double t, double boundary_tol) {
  require_localized(phi, 0.1 * boundary_tol, "linear_scaling_functional");
  const RealField px = derivative(phi, 1);
  return weighted_functional(phi, t, product(phi, hilbert(px)), product(px, px),
                             product(phi, phi));
}

double relative_drift(const std::vector<double>& v, double floor) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double m = 0.0;
  for (double a : v) m += a;
  m /= static_cast<double>(v.size());
  return (*hi - *lo) / std::max(std::abs(m), floor);
}

ConservationReport conservation_report(const Trajectory& tr, double boundary_tol) {
  ConservationReport r;
  for (const Snap& s : tr.snapshots) {
    r.times.push_back(s.t);
    r.E0.push_back(mass(s.f));
    r.E1.push_back(momentum(s.f));
    r.E2.push_back(energy(s.f));
    r.G.push_back(scaling_functional(s.f, s.t, boundary_tol));
    const double l = l2_norm(scaling_operator(s.f, s.t, boundary_tol));
    r.L2_of_scalingop.push_back(l * l);
  }
  r.drifts = {relative_drift(r.E0), relative_drift(r.E1), relative_drift(r.E2),
              relative_drift(r.G), relative_drift(r.L2_of_scalingop)};
  return r;
}

std::string to_csv(const ConservationReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "t,E0,E1,E2,G,L2_scalingop\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    os << r.times[i] << ',' << r.E0[i] << ',' << r.E1[i] << ',' << r.E2[i] << ',' << r.G[i]
       << ',' << r.L2_of_scalingop[i] << '\n';
  return os.str();
}

std::string drifts_json(const ConservationReport& r) {
  nlohmann::ordered_json j;
  j["E0"] = r.drifts.E0;
  j["E1"] = r.drifts.E1;
  j["E2"] = r.drifts.E2;
  j["G"] = r.drifts.G;
  j["L2_scalingop"] = r.drifts.L2_of_scalingop;
  j["samples"] = r.times.size();
  return j.dump(2) + "\n";
}

double hilbert_identity_residual(const RealField& phi) {
  const RealField h = hilbert(phi);
  const RealField lhs = hilbert(product(phi, phi) - product(h, h));
  return sup_norm(lhs - 2.0 * product(phi, h));
}

MomentCheck moment_cancellation(const RealField& phi, double boundary_tol) {
  require_localized(phi, boundary_tol, "moment_cancellation");
  const Grid& g = *phi.grid;
  const std::size_t n = g.n(), N = 4 * n;
  const GridPtr fine = make_grid(N, g.length());
  const SpectralField F = dft(phi);
  cvec P(N, 0.0), p(N);
  for (std::size_t i = 1; i < n / 2; ++i) P[i] = F.c[i] / static_cast<double>(n);
  fine->fft().backward(P.data(), p.data());
  MomentCheck m;
  const auto& x = fine->x();
  for (std::size_t i = 0; i < N; ++i) {
    const cplx c = p[i] * p[i] * p[i];
    m.value += x[i] * c;
    m.scale += std::abs(x[i]) * std::abs(c);
  }
  m.value *= fine->dx();
  m.scale *= fine->dx();
  return m;
}

DecayBounds decay_bounds_check(const Trajectory& tr, double boundary_tol) {
  DecayBounds b;
  for (const Snap& s : tr.snapshots) {
    const double jt = std::sqrt(1.0 + s.t * s.t);
    const double jst = std::sqrt(1.0 + s.t);
    const double lr = l2_norm(push_forward_L(s.f, s.t, boundary_tol)) / jt;
    const double sr = sup_norm(s.f) * std::sqrt(s.t) / jst;
    b.times.push_back(s.t);
    b.L_ratio.push_back(lr);
    b.sup_ratio.push_back(sr);
    b.max_L_ratio = std::max(b.max_L_ratio, lr);
    b.max_sup_ratio = std::max(b.max_sup_ratio, sr);
  }
  return b;
}

}  // namespace bolab
