#include "bolab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <string>

namespace bolab {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_complex* fc(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* fc(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

}  // namespace

FftPlans::FftPlans(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  cvec a(n), b(n);
  rvec r(n);
  const int ni = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(ni, fc(a.data()), fc(b.data()), FFTW_FORWARD, kPlanFlags);
  bwd_ = fftw_plan_dft_1d(ni, fc(a.data()), fc(b.data()), FFTW_BACKWARD, kPlanFlags);
  r2c_ = fftw_plan_dft_r2c_1d(ni, r.data(), fc(a.data()), kPlanFlags);
  c2r_ = fftw_plan_dft_c2r_1d(ni, fc(a.data()), r.data(), kPlanFlags);
}

FftPlans::~FftPlans() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void FftPlans::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), fc(in), fc(out));
}
void FftPlans::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), fc(in), fc(out));
}
void FftPlans::r2c(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in), fc(out));
}
void FftPlans::c2r(cplx* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), fc(in), out);
}

Grid::Grid(std::size_t n_points, double length) : n_(n_points), L_(length) {
  if (n_points < 4 || (n_points & (n_points - 1)) != 0)
    throw ConfigError("grid.n_points must be a power of two >= 4, got " + std::to_string(n_points));
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("grid.length must be positive and finite");
  dx_ = L_ / static_cast<double>(n_);
  dxi_ = 2.0 * std::numbers::pi / L_;
  x_.resize(n_);
  xi_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    x_[i] = -0.5 * L_ + static_cast<double>(i) * dx_;
    xi_[i] = dxi_ * static_cast<double>(mode(i));
  }
  plans_ = std::make_shared<FftPlans>(n_);
}

long Grid::mode(std::size_t i) const {
  const long n = static_cast<long>(n_);
  const long m = static_cast<long>(i);
  return m < n / 2 ? m : m - n;
}

GridPtr make_grid(std::size_t n_points, double length) {
  return std::make_shared<const Grid>(n_points, length);
}

RealField zeros(const GridPtr& g) { return {g, rvec(g->n(), 0.0)}; }

RealField sample(const GridPtr& g, double (*f)(double)) { return sample_fn(g, f); }

ComplexField to_complex(const RealField& f) {
  ComplexField c{f.grid, cvec(f.v.size())};
  for (std::size_t i = 0; i < f.v.size(); ++i) c.v[i] = f.v[i];
  return c;
}

RealField real_part(const ComplexField& f) {
  RealField r{f.grid, rvec(f.v.size())};
  for (std::size_t i = 0; i < f.v.size(); ++i) r.v[i] = f.v[i].real();
  return r;
}

RealField imag_part(const ComplexField& f) {
  RealField r{f.grid, rvec(f.v.size())};
  for (std::size_t i = 0; i < f.v.size(); ++i) r.v[i] = f.v[i].imag();
  return r;
}

bool all_finite(const RealField& f) {
  return std::all_of(f.v.begin(), f.v.end(), [](double a) { return std::isfinite(a); });
}

bool all_finite(const ComplexField& f) {
  return std::all_of(f.v.begin(), f.v.end(),
                     [](cplx a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); });
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw ConfigError("field/grid size mismatch");
}

// ---- transforms

SpectralField dft(const RealField& f) {
  if (f.v.size() != f.grid->n()) throw ConfigError("field size does not match grid");
  ComplexField c = to_complex(f);
  SpectralField F{f.grid, cvec(f.v.size()), true};
  f.grid->fft().forward(c.v.data(), F.c.data());
  return F;
}

SpectralField dft(const ComplexField& f) {
  if (f.v.size() != f.grid->n()) throw ConfigError("field size does not match grid");
  SpectralField F{f.grid, cvec(f.v.size()), false};
  f.grid->fft().forward(f.v.data(), F.c.data());
  return F;
}

ComplexField idft(const SpectralField& F) {
  const std::size_t n = F.grid->n();
  if (F.c.size() != n) throw ConfigError("spectrum size does not match grid");
  ComplexField out{F.grid, cvec(n)};
  F.grid->fft().backward(F.c.data(), out.v.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& z : out.v) z *= inv;
  return out;
}

bool hermitian(const SpectralField& F, double tol) {
  const std::size_t n = F.c.size();
  double scale = 0.0;
  for (auto z : F.c) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (n - i) % n;
    if (std::abs(F.c[j] - std::conj(F.c[i])) > tol * scale) return false;
  }
  return true;
}

cvec rfft(const RealField& f) {
  cvec h(f.grid->n() / 2 + 1);
  f.grid->fft().r2c(f.v.data(), h.data());
  return h;
}

RealField irfft(const GridPtr& g, cvec half) {
  RealField out{g, rvec(g->n())};
  g->fft().c2r(half.data(), out.v.data());
  const double inv = 1.0 / static_cast<double>(g->n());
  for (auto& a : out.v) a *= inv;
  return out;
}

// ---- dyadic calculus

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double bump(double r) { return smoothstep(2.0 - std::abs(r)); }

double sym_le(double xi, int k) {
  if (k < 0) return 0.0;
  return bump(std::ldexp(xi, -k));
}

double sym_band(double xi, int k) { return sym_le(xi, k) - sym_le(xi, k - 1); }

// 1 on supp P_k = [2^{k-1}, 2^{k+1}] (k >= 1), support enlarged by 2^{k-4} on each side
double sym_enlarged(double xi, int k) {
  const double a = std::abs(xi);
  const double m = std::ldexp(1.0, k - 4);
  const double hi = smoothstep((std::ldexp(1.0, k + 1) + m - a) / m);
  if (k == 0) return hi;
  const double lo = smoothstep((a - (std::ldexp(1.0, k - 1) - m)) / m);
  return lo * hi;
}

static void check_k(Selector s) {
  if (s.k < 0) throw ArgumentError("dyadic index must be >= 0, got " + std::to_string(s.k));
}

double selector_symbol(Selector s, double xi) {
  const double pos = xi > 0.0 ? 1.0 : 0.0;
  switch (s.kind) {
    case Proj::plus: return pos;
    case Proj::minus: return xi < 0.0 ? 1.0 : 0.0;
    case Proj::band: return sym_band(xi, s.k);
    case Proj::below: return sym_le(xi, s.k - 1);
    case Proj::at_least: return 1.0 - sym_le(xi, s.k - 1);
    case Proj::enlarged: return sym_enlarged(xi, s.k);
    case Proj::band_plus: return pos * sym_band(xi, s.k);
    case Proj::below_plus: return pos * sym_le(xi, s.k - 1);
  }
  return 0.0;
}

bool real_preserving(Selector s) {
  return s.kind == Proj::band || s.kind == Proj::below || s.kind == Proj::at_least ||
         s.kind == Proj::enlarged;
}

RealField project(const RealField& f, Selector s) {
  check_k(s);
  if (!real_preserving(s)) throw ArgumentError("selector does not map real fields to real fields");
  return apply_real(f, [s](double xi) { return cplx(selector_symbol(s, xi)); });
}

ComplexField project_complex(const RealField& f, Selector s) { return project(to_complex(f), s); }

ComplexField project(const ComplexField& f, Selector s) {
  check_k(s);
  return apply(f, [s](double xi) { return cplx(selector_symbol(s, xi)); });
}

static cplx hilbert_symbol(double xi) {
  return xi > 0.0 ? cplx(0.0, -1.0) : (xi < 0.0 ? cplx(0.0, 1.0) : cplx(0.0));
}

RealField hilbert(const RealField& f) { return apply_real(f, hilbert_symbol); }
ComplexField hilbert(const ComplexField& f) { return apply(f, hilbert_symbol); }

static cplx ipow(double xi, int order) {
  cplx r(1.0);
  for (int i = 0; i < order; ++i) r *= cplx(0.0, xi);
  return r;
}

RealField derivative(const RealField& f, int order) {
  if (order < 0) throw ArgumentError("derivative order must be >= 0");
  return apply_real(f, [order](double xi) { return ipow(xi, order); });
}

ComplexField derivative(const ComplexField& f, int order) {
  if (order < 0) throw ArgumentError("derivative order must be >= 0");
  return apply(f, [order](double xi) { return ipow(xi, order); });
}

RealField abs_derivative(const RealField& f, double s) {
  return apply_real(f, [s](double xi) { return cplx(xi == 0.0 ? 0.0 : std::pow(std::abs(xi), s)); });
}

static cplx inv_symbol(double xi) { return xi == 0.0 ? cplx(0.0) : cplx(0.0, -1.0 / xi); }

RealField inverse_derivative(const RealField& f) { return apply_real(f, inv_symbol); }
ComplexField inverse_derivative(const ComplexField& f) { return apply(f, inv_symbol); }

double mean(const RealField& f) {
  double s = 0.0;
  for (double a : f.v) s += a;
  return s / static_cast<double>(f.v.size());
}

Antiderivative antiderivative(const RealField& f, MeanMode mode, Pin pin, double mean_tol) {
  const double mu = mean(f);
  if (mode == MeanMode::strict && std::abs(mu) >= mean_tol)
    throw PreconditionError("antiderivative: field mean " + std::to_string(mu) +
                                " exceeds mean_tol (use mean-drop mode)", mu);
  Antiderivative out{inverse_derivative(f), mode == MeanMode::drop ? mu : 0.0};
  if (pin == Pin::left_edge) {
    const double left = out.field.v.front();
    for (auto& a : out.field.v) a -= left;
  }
  return out;
}

RealField primitive_phi(const RealField& phi, MeanMode mode, double mean_tol) {
  Antiderivative a = antiderivative(phi, mode, Pin::left_edge, mean_tol);
  for (auto& v : a.field.v) v *= 0.5;
  return a.field;
}

// ---- norms

double integral(const RealField& f) {
  double s = 0.0;
  for (double a : f.v) s += a;
  return s * f.grid->dx();
}

double inner(const RealField& f, const RealField& g) {
  require_same_grid(*f.grid, *g.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
  return s * f.grid->dx();
}

cplx inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(*f.grid, *g.grid);
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * std::conj(g.v[i]);
  return s * f.grid->dx();
}

double l2_norm(const RealField& f) { return std::sqrt(inner(f, f)); }

double l2_norm(const ComplexField& f) {
  double s = 0.0;
  for (auto z : f.v) s += std::norm(z);
  return std::sqrt(s * f.grid->dx());
}

static double sobolev_from_spectrum(const Grid& g, const cvec& F, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = std::pow(1.0 + g.xi()[i] * g.xi()[i], s);
    acc += w * std::norm(F[i]);
  }
  const double n = static_cast<double>(g.n());
  return std::sqrt(acc * g.length() / (n * n));
}

double sobolev_norm(const RealField& f, double s) {
  return sobolev_from_spectrum(*f.grid, dft(f).c, s);
}

double sobolev_norm(const ComplexField& f, double s) {
  return sobolev_from_spectrum(*f.grid, dft(f).c, s);
}

double sup_norm(const RealField& f) {
  double m = 0.0;
  for (double a : f.v) m = std::max(m, std::abs(a));
  return m;
}

double sup_norm(const ComplexField& f) {
  double m = 0.0;
  for (auto z : f.v) m = std::max(m, std::abs(z));
  return m;
}

double boundary_magnitude(const RealField& f) {
  const double edge = 0.45 * f.grid->length();
  double m = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    if (std::abs(f.grid->x()[i]) >= edge) m = std::max(m, std::abs(f.v[i]));
  return m;
}

double peak(const RealField& f) { return sup_norm(f); }

void require_localized(const RealField& f, double boundary_tol, const char* what) {
  const double b = boundary_magnitude(f);
  const double p = peak(f);
  if (p > 0.0 && b >= boundary_tol * p)
  {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g, limit %.3g", b / p, boundary_tol);
    throw PreconditionError(std::string(what) + ": field not localized (boundary/peak = " + buf + ")",
                            b / p);
  }
}

double weighted_l2(const RealField& f, Weight w, double boundary_tol) {
  require_localized(f, w == Weight::x ? boundary_tol : 0.1 * boundary_tol, "weighted_l2");
  double s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    const double x = f.grid->x()[i];
    const double a = (w == Weight::x ? x : x * x) * f.v[i];
    s += a * a;
  }
  return std::sqrt(s * f.grid->dx());
}

// ---- de-aliasing

SpectralField dealias(SpectralField F) {
  const Grid& g = *F.grid;
  const long cut = g.dealias_mode();
  for (std::size_t i = 0; i < F.c.size(); ++i)
    if (std::labs(g.mode(i)) > cut) F.c[i] = 0.0;
  return F;
}

RealField dealias(const RealField& f) {
  const Grid& g = *f.grid;
  cvec h = rfft(f);
  const std::size_t cut = static_cast<std::size_t>(g.dealias_mode());
  for (std::size_t i = cut + 1; i < h.size(); ++i) h[i] = 0.0;
  return irfft(f.grid, std::move(h));
}

ComplexField dealias(const ComplexField& f) {
  return idft(dealias(dft(f)));
}

RealField product(const RealField& a, const RealField& b) {
  require_same_grid(*a.grid, *b.grid);
  RealField p{a.grid, rvec(a.v.size())};
  for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
  return dealias(p);
}

ComplexField product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(*a.grid, *b.grid);
  ComplexField p{a.grid, cvec(a.v.size())};
  for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = a.v[i] * b.v[i];
  return dealias(p);
}

RealField operator+(const RealField& a, const RealField& b) {
  require_same_grid(*a.grid, *b.grid);
  RealField r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
  return r;
}

RealField operator-(const RealField& a, const RealField& b) {
  require_same_grid(*a.grid, *b.grid);
  RealField r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= b.v[i];
  return r;
}

RealField operator*(double s, const RealField& a) {
  RealField r = a;
  for (auto& v : r.v) v *= s;
  return r;
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(*a.grid, *b.grid);
  ComplexField r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
  return r;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  require_same_grid(*a.grid, *b.grid);
  ComplexField r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= b.v[i];
  return r;
}

ComplexField operator*(cplx s, const ComplexField& a) {
  ComplexField r = a;
  for (auto& v : r.v) v *= s;
  return r;
}

RealField times_x(const RealField& f) {
  RealField r = f;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] *= f.grid->x()[i];
  return r;
}

}  // namespace bolab
