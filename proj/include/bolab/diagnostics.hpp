#pragma once

#include <limits>
#include <string>
#include <vector>

#include "bolab/evolution.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

// least squares y = slope x + intercept on (log x, log y), natural logs; residual is the rms misfit
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
};
LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);
// same, but y already a log2 and x linear (convergence rates)
LogLogFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// ---- frequency envelopes

struct EnvelopeReport {
  double delta = 0.1;
  double floor = 1.0;          // lower bound imposed on c_0
  std::vector<double> c;       // k = 0 .. K
  std::vector<double> norms;   // ||P_k phi||
  bool admissible = false;
};

// last dyadic index whose band meets the resolved spectrum
int dyadic_top(const Grid& g);
std::vector<double> dyadic_norms(const RealField& phi);

// c_k = max_j 2^{-delta|j-k|} a_j, a_j = ||P_j phi|| / ||phi||, a_0 raised to `floor` first
EnvelopeReport minimal_envelope(const RealField& phi, double delta = 0.1, double floor = 1.0);
// direct scan: c_k >= a_k, c_j / c_k <= 2^{delta|j-k|}, c_0 >= floor
bool envelope_admissible(const EnvelopeReport& r, double rel_tol = 1e-12);

// ---- Strichartz

struct StrichartzNorms {
  double linf_l2 = 0.0;  // max_t ||phi(t)||
  double l4_linf = 0.0;  // (int sup|phi|^4 dt)^{1/4}, trapezoid weights
  double S = 0.0;        // sum of the two
};
StrichartzNorms strichartz_norms(const Trajectory& tr,
                                 double t_min = -std::numeric_limits<double>::infinity(),
                                 double t_max = std::numeric_limits<double>::infinity());

// ---- bilinear

struct BilinearReport {
  double value = 0.0;        // sup_y ||phi_j T_y phi_k||_{L^2_{t,x}}
  double reference = 0.0;    // 2^{-max(j,k)/2} ||phi_j(0)|| ||phi_k(0)||
  double ratio = 0.0;
  double best_shift = 0.0;
};

// 33 evenly spaced shifts over [-span, span]
std::vector<double> default_shifts(double span, int count = 33);

// j, k are the declared bands of the two trajectories; supports closer than 2^{max(j,k)-4}
// are rejected. Shifts are rounded to whole grid cells.
BilinearReport bilinear_functional(const Trajectory& tj, const Trajectory& tk, int j, int k,
                                   const std::vector<double>& shifts);

// ---- pointwise decay

struct DecayOptions {
  double fit_t_min = 1.0;
  double fit_t_max = std::numeric_limits<double>::infinity();
  double ratio_limit = 5.0;
};

struct DecayReport {
  std::vector<double> times, sup_norms, hilbert_sup_norms;
  // max_x (|phi| + |H phi|) t^{1/2} <x_- t^{-1/2}>^{1/2} / eps, x_- = max(-x, 0)
  std::vector<double> profile_ratios;
  // profile ratio divided by its value at the first snapshot with t >= fit_t_min
  std::vector<double> normalized_ratios;
  // max over x <= -sqrt(t) of (|phi| + |H phi|) t^{1/4} |x|^{1/2} / eps
  std::vector<double> elliptic_ratios;
  // max_x |d^{-1} phi| / (eps (1 + eps log <t/x>)), d^{-1} phi integrated from the left edge
  std::vector<double> intphi_ratios;
  LogLogFit fit;
  double fitted_exponent = 0.0;
  double max_normalized_ratio = 0.0;
  double t_ratio_le_limit = 0.0;  // last time up to which the normalized ratio stays <= limit
};

DecayReport decay_profile(const Trajectory& tr, double eps, const DecayOptions& o = {});

// sup(|psi| + |H psi|) t^{1/2} / (||psi||^{1/2} ||L psi||^{1/2})
double pointwise_constant(const RealField& psi, double t, double boundary_tol = 1e-8);
// max over x < 0 of |psi| t^{1/2} (1 + |x| t^{-1/2})^{1/4}, divided by its value at x = 0
double left_refinement_ratio(const RealField& psi, double t);

// location of the maximum of the trigonometric interpolant (Newton from the grid argmax)
double peak_location(const RealField& f);

// ---- convergence of frequency-truncated solutions

struct ConvergenceOptions {
  std::vector<int> n_list{4, 5, 6, 7, 8, 9};
  double t_end = 1.0;
  double dt = 1e-3;
  std::int64_t cadence = 100;
  Integrator integrator = Integrator::ifrk4;
};

struct ConvergenceReport {
  std::vector<int> n;
  std::vector<double> sup_diff;  // sup_t ||phi^(n) - phi^ref||_{H^{-1/2}}
  int n_ref = 0;
  LogLogFit fit;                 // log2 sup_diff against n
  bool monotone = false;         // nonincreasing within 10%
};

// phi^(n)(0) = P_{<n} phi0; reference at max(n_list) + 2
ConvergenceReport convergence_experiment(const RealField& phi0, const ConvergenceOptions& o);

}  // namespace bolab
