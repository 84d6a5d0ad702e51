#include "bolab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bolab {

namespace {

LogLogFit fit_xy(const std::vector<double>& X, const std::vector<double>& Y) {
  if (X.size() != Y.size() || X.size() < 2) throw ArgumentError("fit needs at least two points");
  const double m = static_cast<double>(X.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxy += (X[i] - mx) * (Y[i] - my);
    sxx += (X[i] - mx) * (X[i] - mx);
  }
  if (sxx == 0.0) throw ArgumentError("fit abscissae are all equal");
  LogLogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double e = Y[i] - f.slope * X[i] - f.intercept;
    r += e * e;
  }
  f.residual = std::sqrt(r / m);
  f.points = X.size();
  return f;
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> X, Y;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ArgumentError("log-log fit needs positive data");
    X.push_back(std::log(x[i]));
    Y.push_back(std::log(y[i]));
  }
  return fit_xy(X, Y);
}

LogLogFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) { return fit_xy(x, y); }

// ---- envelopes

int dyadic_top(const Grid& g) {
  const double xi_max = g.dxi() * static_cast<double>(g.n() / 2);
  int k = 0;
  while (std::ldexp(1.0, k) < xi_max) ++k;  // band k+1 starts at 2^k
  return k;
}

std::vector<double> dyadic_norms(const RealField& phi) {
  const int K = dyadic_top(*phi.grid);
  std::vector<double> a;
  for (int k = 0; k <= K; ++k) a.push_back(l2_norm(project(phi, {Proj::band, k})));
  return a;
}

EnvelopeReport minimal_envelope(const RealField& phi, double delta, double floor) {
  if (!(delta > 0.0)) throw ArgumentError("envelope delta must be positive");
  if (!(floor >= 0.0)) throw ArgumentError("envelope floor must be non-negative");
  const double total = l2_norm(phi);
  if (!(total > 0.0)) throw ArgumentError("minimal_envelope of the zero field");
  EnvelopeReport r;
  r.delta = delta;
  r.floor = floor;
  r.norms = dyadic_norms(phi);
  std::vector<double> a(r.norms.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = r.norms[j] / total;
  a[0] = std::max(a[0], floor);
  r.c.assign(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = std::abs(static_cast<double>(j) - static_cast<double>(k));
      r.c[k] = std::max(r.c[k], std::exp2(-delta * d) * a[j]);
    }
  r.admissible = envelope_admissible(r);
  return r;
}

bool envelope_admissible(const EnvelopeReport& r, double rel_tol) {
  if (r.c.empty() || r.c.size() != r.norms.size()) return false;
  double total = 0.0;
  for (double n : r.norms) total += n * n;
  total = std::sqrt(total);
  if (r.c[0] < r.floor * (1.0 - rel_tol)) return false;
  for (std::size_t k = 0; k < r.c.size(); ++k) {
    if (total > 0.0 && r.c[k] < r.norms[k] / total * (1.0 - rel_tol)) return false;
    for (std::size_t j = 0; j < r.c.size(); ++j) {
      const double d = std::abs(static_cast<double>(j) - static_cast<double>(k));
      if (r.c[j] > r.c[k] * std::exp2(r.delta * d) * (1.0 + rel_tol)) return false;
    }
  }
  return true;
}

// ---- Strichartz

StrichartzNorms strichartz_norms(const Trajectory& tr, double t_min, double t_max) {
  std::vector<double> t, sup;
  StrichartzNorms s;
  for (const Snap& q : tr.snapshots) {
    if (q.t < t_min || q.t > t_max) continue;
    if (!t.empty() && !(q.t > t.back())) throw ArgumentError("snapshot times must increase");
    t.push_back(q.t);
    sup.push_back(sup_norm(q.f));
    s.linf_l2 = std::max(s.linf_l2, l2_norm(q.f));
  }
  if (t.empty()) throw ArgumentError("strichartz_norms of an empty trajectory");
  const std::vector<double> w = trapezoid_weights(t);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += w[i] * std::pow(sup[i], 4);
  s.l4_linf = std::pow(acc, 0.25);
  s.S = s.linf_l2 + s.l4_linf;
  return s;
}

// ---- bilinear

std::vector<double> default_shifts(double span, int count) {
  std::vector<double> y;
  if (count == 1) return {0.0};
  for (int i = 0; i < count; ++i) y.push_back(-span + 2.0 * span * i / (count - 1));
  return y;
}

BilinearReport bilinear_functional(const Trajectory& tj, const Trajectory& tk, int j, int k,
                                   const std::vector<double>& shifts) {
  if (j < 0 || k < 0) throw ArgumentError("dyadic indices must be non-negative");
  const int lo = std::min(j, k), hi = std::max(j, k);
  const double gap = std::ldexp(1.0, hi - 1) - (lo == 0 ? 2.0 : std::ldexp(1.0, lo + 1));
  if (lo == hi || gap < std::ldexp(1.0, hi - 4))
    throw ArgumentError("bands " + std::to_string(j) + " and " + std::to_string(k) +
                        " are not frequency separated by 2^{k-4}");
  if (tj.snapshots.size() != tk.snapshots.size() || tj.snapshots.empty())
    throw ArgumentError("bilinear_functional needs two trajectories on the same time samples");
  if (shifts.empty()) throw ArgumentError("empty shift set");
  const Grid& g = *tj.snapshots.front().f.grid;
  require_same_grid(g, *tk.snapshots.front().f.grid);
  std::vector<double> t;
  for (std::size_t i = 0; i < tj.snapshots.size(); ++i) {
    if (std::abs(tj.snapshots[i].t - tk.snapshots[i].t) > 1e-12 * std::max(1.0, tj.snapshots[i].t))
      throw ArgumentError("trajectory time samples differ");
    t.push_back(tj.snapshots[i].t);
  }
  const std::vector<double> w = t.size() > 1 ? trapezoid_weights(t) : std::vector<double>{1.0};
  const std::size_t n = g.n();
  BilinearReport r;
  for (double y : shifts) {
    const long s = std::lround(y / g.dx());
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& a = tj.snapshots[i].f.v;
      const auto& b = tk.snapshots[i].f.v;
      double sum = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        const long idx = (static_cast<long>(m) - s) % static_cast<long>(n);
        const double p = a[m] * b[static_cast<std::size_t>(idx < 0 ? idx + static_cast<long>(n) : idx)];
        sum += p * p;
      }
      acc += w[i] * sum * g.dx();
    }
    const double v = std::sqrt(acc);
    if (v > r.value) {
      r.value = v;
      r.best_shift = static_cast<double>(s) * g.dx();
    }
  }
  r.reference = std::pow(2.0, -0.5 * hi) * l2_norm(tj.snapshots.front().f) *
                l2_norm(tk.snapshots.front().f);
  r.ratio = r.reference > 0.0 ? r.value / r.reference : 0.0;
  return r;
}

// ---- decay

DecayReport decay_profile(const Trajectory& tr, double eps, const DecayOptions& o) {
  if (!(eps > 0.0)) throw ArgumentError("decay_profile needs eps > 0");
  DecayReport r;
  std::vector<double> ft, fs;
  double base = 0.0;
  bool within = true;
  for (const Snap& q : tr.snapshots) {
    if (!(q.t > 0.0)) continue;
    const double t = q.t;
    const Grid& g = *q.f.grid;
    const auto& x = g.x();
    const RealField h = hilbert(q.f);
    const double mu = mean(q.f);
    RealField prim = antiderivative(q.f, MeanMode::drop, Pin::left_edge).field;
    for (std::size_t i = 0; i < x.size(); ++i) prim.v[i] += mu * (x[i] - x.front());

    double sup = 0.0, hsup = 0.0, prof = 0.0, ell = 0.0, ip = 0.0;
    const double st = std::sqrt(t);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = std::abs(q.f.v[i]), b = std::abs(h.v[i]);
      sup = std::max(sup, a);
      hsup = std::max(hsup, b);
      const double xm = std::max(-x[i], 0.0) / st;
      prof = std::max(prof, (a + b) * st * std::pow(1.0 + xm * xm, 0.25) / eps);
      if (x[i] <= -st) ell = std::max(ell, (a + b) * std::pow(t, 0.25) * std::sqrt(-x[i]) / eps);
      const double ax = std::max(std::abs(x[i]), 0.5 * g.dx());
      const double lg = 0.5 * std::log1p((t / ax) * (t / ax));
      ip = std::max(ip, std::abs(prim.v[i]) / (eps * (1.0 + eps * lg)));
    }
    r.times.push_back(t);
    r.sup_norms.push_back(sup);
    r.hilbert_sup_norms.push_back(hsup);
    r.profile_ratios.push_back(prof);
    r.elliptic_ratios.push_back(ell);
    r.intphi_ratios.push_back(ip);
    if (t >= o.fit_t_min && t <= o.fit_t_max) {
      ft.push_back(t);
      fs.push_back(sup);
    }
    if (base == 0.0 && t >= o.fit_t_min) base = prof;
  }
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double v = base > 0.0 ? r.profile_ratios[i] / base : 0.0;
    r.normalized_ratios.push_back(v);
    if (r.times[i] < o.fit_t_min) continue;
    r.max_normalized_ratio = std::max(r.max_normalized_ratio, v);
    if (within && v <= o.ratio_limit) r.t_ratio_le_limit = r.times[i];
    else within = false;
  }
  if (ft.size() >= 2) {
    r.fit = loglog_fit(ft, fs);
    r.fitted_exponent = r.fit.slope;
  }
  return r;
}

double pointwise_constant(const RealField& psi, double t, double boundary_tol) {
  if (!(t > 0.0)) throw ArgumentError("pointwise_constant needs t > 0");
  const RealField h = hilbert(psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.v.size(); ++i) s = std::max(s, std::abs(psi.v[i]) + std::abs(h.v[i]));
  const double den = std::sqrt(l2_norm(psi) * l2_norm(push_forward_L(psi, t, boundary_tol)));
  return den > 0.0 ? s * std::sqrt(t) / den : 0.0;
}

double left_refinement_ratio(const RealField& psi, double t) {
  if (!(t > 0.0)) throw ArgumentError("left_refinement_ratio needs t > 0");
  const auto& x = psi.grid->x();
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) < std::abs(x[i0])) i0 = i;
  const double st = std::sqrt(t);
  const double at0 = std::abs(psi.v[i0]) * st;
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0.0) m = std::max(m, std::abs(psi.v[i]) * st * std::pow(1.0 - x[i] / st, 0.25));
  return at0 > 0.0 ? m / at0 : 0.0;
}

double peak_location(const RealField& f) {
  const Grid& g = *f.grid;
  const cvec F = rfft(f);
  const std::size_t n = g.n();
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (f.v[i] > f.v[i0]) i0 = i;
  const double x0 = g.x().front();
  double x = g.x()[i0];
  // f(x) = (1/n) sum F_m e^{i xi_m (x - x0)}; Nyquist left out (odd derivative)
  for (int it = 0; it < 20; ++it) {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t m = 1; m < F.size() - 1; ++m) {
      const double xi = half_xi(g, m);
      const cplx e = F[m] * std::polar(1.0, xi * (x - x0));
      d1 += -2.0 * xi * e.imag();
      d2 += -2.0 * xi * xi * e.real();
    }
    if (!(d2 < 0.0)) break;
    const double step = d1 / d2;
    x -= step;
    if (std::abs(step) < 1e-13 * g.length()) break;
  }
  return x;
}

// ---- convergence

ConvergenceReport convergence_experiment(const RealField& phi0, const ConvergenceOptions& o) {
  if (o.n_list.size() < 2) throw ArgumentError("convergence needs at least two truncation levels");
  ConvergenceReport r;
  r.n = o.n_list;
  r.n_ref = *std::max_element(o.n_list.begin(), o.n_list.end()) + 2;
  EvolveOptions eo;
  eo.integrator = o.integrator;
  eo.cadence = o.cadence;
  auto run = [&](int n) { return evolve(project(phi0, {Proj::below, n}), o.t_end, o.dt, eo); };
  const Trajectory ref = run(r.n_ref);
  std::vector<double> xs, ys;
  for (int n : o.n_list) {
    const Trajectory tn = run(n);
    double m = 0.0;
    for (std::size_t i = 0; i < tn.snapshots.size(); ++i)
      m = std::max(m, sobolev_norm(tn.snapshots[i].f - ref.snapshots[i].f, -0.5));
    r.sup_diff.push_back(m);
    xs.push_back(n);
    ys.push_back(std::log2(std::max(m, 1e-300)));
  }
  r.fit = linear_fit(xs, ys);
  r.monotone = true;
  for (std::size_t i = 1; i < r.sup_diff.size(); ++i)
    if (r.sup_diff[i] > 1.1 * r.sup_diff[i - 1]) r.monotone = false;
  return r;
}

}  // namespace bolab
