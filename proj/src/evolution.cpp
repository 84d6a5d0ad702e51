#include "bolab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bolab {

std::string to_string(Integrator I) { return I == Integrator::ifrk4 ? "ifrk4" : "etdrk4"; }

Integrator integrator_from_string(const std::string& s) {
  if (s == "ifrk4") return Integrator::ifrk4;
  if (s == "etdrk4") return Integrator::etdrk4;
  throw ConfigError("unknown integrator '" + s + "' (ifrk4 | etdrk4)");
}

static double dispersion(double xi) { return xi * std::abs(xi); }

// Kassam-Trefethen contour averages, 32 points on the unit circle around h L
static void etd_coefficients(const Grid& g, double h, cvec& Q, cvec& f1, cvec& f2, cvec& f3) {
  constexpr int M = 32;
  const std::size_t m = g.n() / 2 + 1;
  Q.assign(m, 0.0);
  f1.assign(m, 0.0);
  f2.assign(m, 0.0);
  f3.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx Lh(0.0, -dispersion(half_xi(g, i)) * h);
    cplx q = 0.0, a = 0.0, b = 0.0, c = 0.0;
    for (int j = 1; j <= M; ++j) {
      const cplx z = Lh + std::polar(1.0, 2.0 * std::numbers::pi * (j - 0.5) / M);  // full circle: Lh is imaginary
      const cplx ez = std::exp(z), z3 = z * z * z;
      q += (std::exp(0.5 * z) - 1.0) / z;
      a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
      b += (2.0 + z + ez * (z - 2.0)) / z3;
      c += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    Q[i] = h * q / double(M);
    f1[i] = h * a / double(M);
    f2[i] = h * b / double(M);
    f3[i] = h * c / double(M);
  }
}

RealField linear_propagate(const RealField& f, double t) {
  return apply_real(f, [t](double xi) { return std::polar(1.0, -dispersion(xi) * t); });
}

Trajectory linear_trajectory(const RealField& f, const std::vector<double>& times) {
  Trajectory tr;
  tr.integrator = "exact-linear";
  tr.grid = f.grid;
  for (double t : times) tr.snapshots.push_back({t, linear_propagate(f, t)});
  return tr;
}

double dt_max(const RealField& f) {
  const double s = std::max(sup_norm(f), 1e-300);
  return 2.5 / (f.grid->dealias_cutoff() * s);
}

Stepper::Stepper(GridPtr g, double dt, Integrator I) : g_(std::move(g)), dt_(dt), I_(I) {
  const std::size_t m = g_->n() / 2 + 1;
  E_.resize(m);
  E2_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx Lh(0.0, -dispersion(half_xi(*g_, i)) * dt_);
    E_[i] = std::exp(0.5 * Lh);
    E2_[i] = std::exp(Lh);
  }
  if (I_ == Integrator::etdrk4) etd_coefficients(*g_, dt_, Q_, f1_, f2_, f3_);
  for (cvec* v : {&k1_, &k2_, &k3_, &k4_, &a_, &b_, &c_, &tmp_}) v->resize(m);
  phys_.resize(g_->n());
}

void Stepper::nonlinear(const cvec& uh, cvec& out) {
  const std::size_t n = g_->n();
  tmp_ = uh;
  g_->fft().c2r(tmp_.data(), phys_.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& p : phys_) {
    p *= inv;
    p *= p;
  }
  g_->fft().r2c(phys_.data(), out.data());
  const std::size_t cut = static_cast<std::size_t>(g_->dealias_mode());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = i > cut ? cplx(0.0) : out[i] * cplx(0.0, 0.5 * half_xi(*g_, i));
}

void Stepper::step(cvec& u) {
  const std::size_t m = u.size();
  const double h = dt_;
  if (I_ == Integrator::ifrk4) {
    // k1 = N(u); k2 = N(E(u + h/2 k1)); k3 = N(E u + h/2 k2); k4 = N(E2 u + h E k3)
    // u <- E2 u + h/6 (E2 k1 + 2 E (k2 + k3) + k4)
    nonlinear(u, k1_);
    for (std::size_t i = 0; i < m; ++i) a_[i] = E_[i] * (u[i] + 0.5 * h * k1_[i]);
    nonlinear(a_, k2_);
    for (std::size_t i = 0; i < m; ++i) a_[i] = E_[i] * u[i] + 0.5 * h * k2_[i];
    nonlinear(a_, k3_);
    for (std::size_t i = 0; i < m; ++i) a_[i] = E2_[i] * u[i] + h * E_[i] * k3_[i];
    nonlinear(a_, k4_);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = E2_[i] * u[i] +
             h / 6.0 * (E2_[i] * k1_[i] + 2.0 * E_[i] * (k2_[i] + k3_[i]) + k4_[i]);
  } else {
    // a = E u + Q N(u); b = E u + Q N(a); c = E a + Q (2 N(b) - N(u))
    // u <- E2 u + f1 N(u) + 2 f2 (N(a) + N(b)) + f3 N(c)
    nonlinear(u, k1_);
    for (std::size_t i = 0; i < m; ++i) a_[i] = E_[i] * u[i] + Q_[i] * k1_[i];
    nonlinear(a_, k2_);
    for (std::size_t i = 0; i < m; ++i) b_[i] = E_[i] * u[i] + Q_[i] * k2_[i];
    nonlinear(b_, k3_);
    for (std::size_t i = 0; i < m; ++i) c_[i] = E_[i] * a_[i] + Q_[i] * (2.0 * k3_[i] - k1_[i]);
    nonlinear(c_, k4_);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = E2_[i] * u[i] + f1_[i] * k1_[i] + 2.0 * f2_[i] * (k2_[i] + k3_[i]) + f3_[i] * k4_[i];
  }
  u[0] = u[0].real();
  u[m - 1] = 0.0;
}

SolverState step(const SolverState& s, double dt, Integrator I) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  Stepper st(s.field.grid, dt, I);
  cvec u = rfft(s.field);
  st.step(u);
  SolverState out{irfft(s.field.grid, std::move(u)), s.time + dt, s.step_count + 1};
  if (!all_finite(out.field)) throw DivergenceError("non-finite field after step", s.time);
  return out;
}

static double half_energy(const Grid& g, const cvec& u) {
  // Parseval on the half spectrum: integral of phi^2
  double s = std::norm(u[0]) + std::norm(u.back());
  for (std::size_t i = 1; i + 1 < u.size(); ++i) s += 2.0 * std::norm(u[i]);
  const double n = static_cast<double>(g.n());
  return s * g.length() / (n * n);
}

Trajectory evolve(const RealField& initial, double t_end, double dt, const EvolveOptions& opt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator.dt must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("integrator.t_end must be >= 0");
  if (opt.cadence < 1) throw ConfigError("integrator.snapshot_cadence must be >= 1");
  if (!all_finite(initial)) throw ConfigError("initial data contains non-finite samples");
  const double lim = opt.dt_max_override > 0.0 ? opt.dt_max_override : dt_max(initial);
  if (opt.enforce_dt_max && dt > lim)
    throw ConfigError("integrator.dt = " + std::to_string(dt) + " exceeds dt_max = " +
                      std::to_string(lim));
  const auto nsteps = static_cast<std::int64_t>(std::llround(t_end / dt));
  if (std::abs(static_cast<double>(nsteps) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw ConfigError("integrator.t_end must be an integer multiple of dt");

  const GridPtr& g = initial.grid;
  Trajectory tr;
  tr.integrator = to_string(opt.integrator);
  tr.dt = dt;
  tr.grid = g;
  Stepper st(g, dt, opt.integrator);
  cvec u = rfft(initial);
  u.back() = 0.0;
  const double e0 = half_energy(*g, u);
  SolverState state{irfft(g, u), 0.0, 0};
  if (opt.keep_snapshots) tr.snapshots.push_back({0.0, state.field});
  if (opt.observer) opt.observer(state);
  double last_good = 0.0;
  for (std::int64_t s = 1; s <= nsteps; ++s) {
    st.step(u);
    const double e = half_energy(*g, u);
    const double t = static_cast<double>(s) * dt;
    if (!std::isfinite(e)) throw DivergenceError("non-finite field", last_good);
    if (e > 1.1 * e0 + 1e-300) throw DivergenceError("E0 grew by more than 10%", last_good);
    last_good = t;
    if (s % opt.cadence == 0 || s == nsteps) {
      state = {irfft(g, u), t, s};
      if (!all_finite(state.field)) throw DivergenceError("non-finite field", last_good);
      if (opt.keep_snapshots) tr.snapshots.push_back({t, state.field});
      if (opt.observer) opt.observer(state);
    }
  }
  return tr;
}

// ---- linearized

RealField background_at(const Trajectory& bg, double t) {
  const auto& S = bg.snapshots;
  if (S.empty()) throw RangeError("empty background trajectory");
  const double eps = 1e-9 * std::max(1.0, std::abs(S.back().t));
  if (t < S.front().t - eps || t > S.back().t + eps)
    throw RangeError("time " + std::to_string(t) + " outside background span [" +
                     std::to_string(S.front().t) + ", " + std::to_string(S.back().t) + "]");
  auto it = std::upper_bound(S.begin(), S.end(), t, [](double a, const Snap& s) { return a < s.t; });
  if (it == S.begin()) return S.front().f;
  if (it == S.end()) return S.back().f;
  const Snap& hi = *it;
  const Snap& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  RealField r = lo.f;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = (1.0 - w) * lo.f.v[i] + w * hi.f.v[i];
  return r;
}

namespace {

// i xi (phi v)^ de-aliased
cvec lin_rhs(const RealField& phi, const cvec& vh) {
  const GridPtr& g = phi.grid;
  RealField v = irfft(g, vh);
  RealField p = product(phi, v);
  cvec out = rfft(p);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= cplx(0.0, half_xi(*g, i));
  out.back() = 0.0;
  return out;
}

}  // namespace

LinearizedState step_linearized(const LinearizedState& s, double dt, Integrator I) {
  if (!s.background) throw ArgumentError("linearized state without background");
  const Trajectory& bg = *s.background;
  for (std::size_t i = 1; i < bg.snapshots.size(); ++i)
    if (bg.snapshots[i].t - bg.snapshots[i - 1].t > dt * (1.0 + 1e-9))
      throw ArgumentError("background cadence coarser than dt");
  const GridPtr& g = s.v.grid;
  const std::size_t m = g->n() / 2 + 1;
  const double h = dt;
  cvec E(m), E2(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = dispersion(half_xi(*g, i));
    E[i] = std::polar(1.0, -0.5 * w * h);
    E2[i] = std::polar(1.0, -w * h);
  }
  const RealField p0 = background_at(bg, s.time);
  const RealField ph = background_at(bg, s.time + 0.5 * h);
  const RealField p1 = background_at(bg, s.time + h);
  cvec u = rfft(s.v), a(m), k1, k2, k3, k4;
  if (I == Integrator::ifrk4) {
    k1 = lin_rhs(p0, u);
    for (std::size_t i = 0; i < m; ++i) a[i] = E[i] * (u[i] + 0.5 * h * k1[i]);
    k2 = lin_rhs(ph, a);
    for (std::size_t i = 0; i < m; ++i) a[i] = E[i] * u[i] + 0.5 * h * k2[i];
    k3 = lin_rhs(ph, a);
    for (std::size_t i = 0; i < m; ++i) a[i] = E2[i] * u[i] + h * E[i] * k3[i];
    k4 = lin_rhs(p1, a);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = E2[i] * u[i] + h / 6.0 * (E2[i] * k1[i] + 2.0 * E[i] * (k2[i] + k3[i]) + k4[i]);
  } else {
    cvec Q, f1, f2, f3;
    etd_coefficients(*g, h, Q, f1, f2, f3);
    cvec b(m), c(m);
    k1 = lin_rhs(p0, u);
    for (std::size_t i = 0; i < m; ++i) a[i] = E[i] * u[i] + Q[i] * k1[i];
    k2 = lin_rhs(ph, a);
    for (std::size_t i = 0; i < m; ++i) b[i] = E[i] * u[i] + Q[i] * k2[i];
    k3 = lin_rhs(ph, b);
    for (std::size_t i = 0; i < m; ++i) c[i] = E[i] * a[i] + Q[i] * (2.0 * k3[i] - k1[i]);
    k4 = lin_rhs(p1, c);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = E2[i] * u[i] + f1[i] * k1[i] + 2.0 * f2[i] * (k2[i] + k3[i]) + f3[i] * k4[i];
  }
  u.back() = 0.0;
  LinearizedState out{irfft(g, std::move(u)), s.background, s.time + h};
  if (!all_finite(out.v)) throw DivergenceError("linearized field non-finite", s.time);
  return out;
}

// ---- rng

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bolab
