#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "bolab/errors.hpp"

namespace bolab {

using cplx = std::complex<double>;
using rvec = std::vector<double>;
using cvec = std::vector<cplx>;

// FFTW plans for one size. Execution is thread safe, planning is serialized.
class FftPlans {
public:
  explicit FftPlans(std::size_t n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  // unnormalized in both directions
  void forward(const cplx* in, cplx* out) const;
  void backward(const cplx* in, cplx* out) const;
  // half spectrum, n/2+1 coefficients; c2r destroys its input
  void r2c(const double* in, cplx* out) const;
  void c2r(cplx* in, double* out) const;

private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
  void* r2c_;
  void* c2r_;
};

class Grid {
public:
  Grid(std::size_t n_points, double length);

  std::size_t n() const { return n_; }
  double length() const { return L_; }
  double dx() const { return dx_; }
  const rvec& x() const { return x_; }
  // FFT order: m = 0..n/2-1 then -n/2..-1 (Nyquist carries the negative wavenumber)
  const rvec& xi() const { return xi_; }
  long mode(std::size_t i) const;
  double dxi() const { return dxi_; }
  // |m| <= n/3 survives de-aliasing
  long dealias_mode() const { return static_cast<long>(n_ / 3); }
  double dealias_cutoff() const { return dxi_ * static_cast<double>(dealias_mode()); }
  bool same_as(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
  const FftPlans& fft() const { return *plans_; }

private:
  std::size_t n_;
  double L_, dx_, dxi_;
  rvec x_, xi_;
  std::shared_ptr<FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;
GridPtr make_grid(std::size_t n_points, double length);

struct RealField {
  GridPtr grid;
  rvec v;
};

struct ComplexField {
  GridPtr grid;
  cvec v;
};

struct SpectralField {
  GridPtr grid;
  cvec c;
  bool real_valued = false;
};

RealField zeros(const GridPtr& g);
RealField sample(const GridPtr& g, double (*f)(double));
template <class F>
RealField sample_fn(const GridPtr& g, F f) {
  RealField r{g, rvec(g->n())};
  for (std::size_t i = 0; i < g->n(); ++i) r.v[i] = f(g->x()[i]);
  return r;
}
ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
bool all_finite(const RealField& f);
bool all_finite(const ComplexField& f);
void require_same_grid(const Grid& a, const Grid& b);

// ---- transforms

SpectralField dft(const RealField& f);
SpectralField dft(const ComplexField& f);
ComplexField idft(const SpectralField& F);
bool hermitian(const SpectralField& F, double tol = 1e-12);

// half spectrum of a real field (n/2+1 entries) and its inverse (divides by n)
cvec rfft(const RealField& f);
RealField irfft(const GridPtr& g, cvec half);

// wavenumber of half-spectrum slot i
inline double half_xi(const Grid& g, std::size_t i) {
  return i == g.n() / 2 ? -g.dxi() * static_cast<double>(i) : g.dxi() * static_cast<double>(i);
}

// real-in real-out multiplier; sym must satisfy sym(-xi) = conj(sym(xi))
template <class Sym>
RealField apply_real(const RealField& f, Sym sym) {
  const Grid& g = *f.grid;
  cvec h = rfft(f);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] *= sym(half_xi(g, i));
  h[0] = h[0].real();
  h.back() = h.back().real();
  return irfft(f.grid, std::move(h));
}

template <class Sym>
ComplexField apply(const ComplexField& f, Sym sym) {
  const Grid& g = *f.grid;
  const std::size_t n = g.n();
  cvec F(n), out(n);
  g.fft().forward(f.v.data(), F.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) F[i] *= sym(g.xi()[i]) * inv;
  g.fft().backward(F.data(), out.data());
  return {f.grid, std::move(out)};
}

template <class Sym>
ComplexField apply(const RealField& f, Sym sym) {
  return apply(to_complex(f), sym);
}

// ---- dyadic calculus

// smooth even bump: 1 on [-1,1], 0 outside [-2,2]
double bump(double r);
// 0 for t <= 0, 1 for t >= 1, same exp(-1/t) family as bump
double smoothstep(double t);

enum class Proj { plus, minus, band, below, at_least, enlarged, band_plus, below_plus };

struct Selector {
  Proj kind;
  int k = 0;
};

double sym_le(double xi, int k);        // P_{<=k}
double sym_band(double xi, int k);      // P_k
double sym_enlarged(double xi, int k);  // P~_k
double selector_symbol(Selector s, double xi);
bool real_preserving(Selector s);

RealField project(const RealField& f, Selector s);  // real-preserving selectors only
ComplexField project_complex(const RealField& f, Selector s);
ComplexField project(const ComplexField& f, Selector s);

RealField hilbert(const RealField& f);
ComplexField hilbert(const ComplexField& f);

RealField derivative(const RealField& f, int order);
ComplexField derivative(const ComplexField& f, int order);
RealField abs_derivative(const RealField& f, double s);

enum class MeanMode { strict, drop };
enum class Pin { none, left_edge };

struct Antiderivative {
  RealField field;
  double dropped_mean = 0.0;  // mean removed before inversion
};

// zero-mode-excised inverse of d/dx
RealField inverse_derivative(const RealField& f);
ComplexField inverse_derivative(const ComplexField& f);
Antiderivative antiderivative(const RealField& f, MeanMode mode = MeanMode::strict,
                              Pin pin = Pin::none, double mean_tol = 1e-10);

// Phi with Phi_x = phi/2, Phi(-L/2) = 0
RealField primitive_phi(const RealField& phi, MeanMode mode = MeanMode::strict,
                        double mean_tol = 1e-10);

double mean(const RealField& f);

// ---- norms and quadrature

double integral(const RealField& f);
double inner(const RealField& f, const RealField& g);
cplx inner(const ComplexField& f, const ComplexField& g);  // sum f conj(g) dx
double l2_norm(const RealField& f);
double l2_norm(const ComplexField& f);
double sobolev_norm(const RealField& f, double s);
double sobolev_norm(const ComplexField& f, double s);
double sup_norm(const RealField& f);
double sup_norm(const ComplexField& f);

// max |f| on the outer 5% of the domain
double boundary_magnitude(const RealField& f);
double peak(const RealField& f);
void require_localized(const RealField& f, double boundary_tol, const char* what);

enum class Weight { x, x_squared };
double weighted_l2(const RealField& f, Weight w, double boundary_tol = 1e-8);

// ---- de-aliasing and products

SpectralField dealias(SpectralField F);
RealField dealias(const RealField& f);
ComplexField dealias(const ComplexField& f);
RealField product(const RealField& a, const RealField& b);
ComplexField product(const ComplexField& a, const ComplexField& b);

// pointwise arithmetic
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx s, const ComplexField& a);
RealField times_x(const RealField& f);

}  // namespace bolab
