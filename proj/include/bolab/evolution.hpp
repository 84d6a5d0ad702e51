#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bolab/spectral.hpp"

namespace bolab {

enum class Integrator { ifrk4, etdrk4 };
std::string to_string(Integrator I);
Integrator integrator_from_string(const std::string& s);

struct SolverState {
  RealField field;
  double time = 0.0;
  std::int64_t step_count = 0;
};

struct Snap {
  double t;
  RealField f;
};

struct Trajectory {
  std::vector<Snap> snapshots;
  std::string integrator;
  double dt = 0.0;
  bool dealiased = true;
  GridPtr grid;
};

// each mode multiplied by exp(-i xi|xi| t)
RealField linear_propagate(const RealField& f, double t);
// exact linear flow sampled at the given times
Trajectory linear_trajectory(const RealField& f, const std::vector<double>& times);

// heuristic: dt * xi_cut * sup|phi| <= 2.5 (RK4 stability on the imaginary axis for the
// advective term); the linear part is integrated exactly and imposes no limit
double dt_max(const RealField& f);

// Advances u_hat (half spectrum) of phi_t = -H phi_xx + 1/2 (phi^2)_x by fixed steps.
class Stepper {
public:
  Stepper(GridPtr g, double dt, Integrator I);
  void step(cvec& uh);
  // (phi_t + H phi_xx) part: 1/2 i xi (phi^2)^, de-aliased
  void nonlinear(const cvec& uh, cvec& out);
  double dt() const { return dt_; }

private:
  GridPtr g_;
  double dt_;
  Integrator I_;
  cvec E_, E2_;            // exp(h L/2), exp(h L)
  cvec Q_, f1_, f2_, f3_;  // ETDRK4
  cvec k1_, k2_, k3_, k4_, a_, b_, c_, tmp_;
  rvec phys_;
};

struct EvolveOptions {
  Integrator integrator = Integrator::ifrk4;
  std::int64_t cadence = 1;  // steps between stored snapshots
  bool keep_snapshots = true;
  bool enforce_dt_max = true;
  double dt_max_override = 0.0;  // > 0 replaces the heuristic
  std::function<void(const SolverState&)> observer;
};

SolverState step(const SolverState& s, double dt, Integrator I = Integrator::ifrk4);

// throws DivergenceError on non-finite samples or E0 growth above 10%
Trajectory evolve(const RealField& initial, double t_end, double dt, const EvolveOptions& opt = {});

// ---- linearized flow v_t + H v_xx = (phi v)_x

struct LinearizedState {
  RealField v;
  const Trajectory* background = nullptr;
  double time = 0.0;
};

RealField background_at(const Trajectory& bg, double t);
LinearizedState step_linearized(const LinearizedState& s, double dt,
                                Integrator I = Integrator::ifrk4);

// ---- reference data

// periodic travelling wave, moves left with speed c:
//   Q(x) = 2 kappa sinh g / (cosh g - cos(kappa (x - x0))),  kappa = 2 pi / L,  tanh g = kappa / c
// periodisation of the line profile 4c / (1 + c^2 x^2); E0 = 8 pi c
RealField soliton(double c, double x0, const GridPtr& g);
double soliton_speed(double c);  // signed: -c
// relative L2 residual of c Q' + H Q'' - Q Q'
double soliton_residual(double c, const GridPtr& g);
inline constexpr const char* kSolitonConvention =
    "phi(t,x) = Q(x + c t), Q = 2k sinh(g)/(cosh(g) - cos(k x)), k = 2pi/L, tanh(g) = k/c; "
    "line limit 4c/(1+c^2 x^2); leftward; E0 = 8 pi c";

RealField gaussian(double amplitude, double width, double x0, const GridPtr& g);
// a sgn(x - x0) exp(-(x-x0)^2/w^2)
RealField odd_gaussian(double amplitude, double width, double x0, const GridPtr& g);
// a y exp(-y^2), y = (x - x0)/w: smooth, odd, mean zero
RealField gaussian_derivative(double amplitude, double width, double x0, const GridPtr& g);

struct RandomDataOptions {
  int bumps = 5;
  double width = 1.0;   // mean Gaussian width
  double spread = 4.0;  // centers uniform in [-spread, spread]
  double band = 0.0;    // > 0: multiply spectrum by bump(xi / band)
};

// x-derivative of a random sum of Gaussians (mean zero), normalized to data_functional = eps
RealField random_localized(std::uint64_t seed, double eps, const GridPtr& g,
                           const RandomDataOptions& opt = {});

// random data at frequency scale 2^k: Gaussians of width ~2^{1-k}, spectrum cut by bump(xi/2^k),
// rescaled to sup = amplitude (k >= 1)
RealField dyadic_random(std::uint64_t seed, int k, double amplitude, const GridPtr& g);

// ||f|| + ||x f||
double data_functional(const RealField& f, double boundary_tol = 1e-8);
RealField normalize_data(const RealField& f, double eps, double boundary_tol = 1e-8);

// x f - 2t H f_x
RealField push_forward_L(const RealField& f, double t, double boundary_tol = 1e-8);

// std::mt19937_64 with explicit conversions (the engine output is fixed by the standard,
// the std distributions are not)
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // [0,1), 53 high bits
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();   // Box-Muller
private:
  std::mt19937_64 eng_;
};

}  // namespace bolab
