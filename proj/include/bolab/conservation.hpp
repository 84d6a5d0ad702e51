#pragma once

#include <string>
#include <vector>

#include "bolab/evolution.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

// E0 = int phi^2, E1 = int phi H phi_x - phi^3/3, E2 = int phi_x^2 - 3/4 phi^2 H phi_x + phi^4/8
double mass(const RealField& phi);
double momentum(const RealField& phi);
double energy(const RealField& phi);

struct Densities {
  RealField m, p, e;
};
Densities densities(const RealField& phi);

// x phi - 2t H phi_x + t/4 (3 phi^2 - (H phi)^2)
RealField scaling_operator(const RealField& phi, double t, double boundary_tol = 1e-8);
// int x^2 m - 4 x t p + 4 t^2 e
double scaling_functional(const RealField& phi, double t, double boundary_tol = 1e-8);
// same with the linear densities p = phi H phi_x, e = phi_x^2
double linear_scaling_functional(const RealField& phi, double t, double boundary_tol = 1e-8);

struct ConservationReport {
  std::vector<double> times, E0, E1, E2, G, L2_of_scalingop;
  struct Drifts {
    double E0 = 0, E1 = 0, E2 = 0, G = 0, L2_of_scalingop = 0;
  } drifts;
};

// (max - min) / max(|mean|, floor)
double relative_drift(const std::vector<double>& v, double floor = 1e-14);

ConservationReport conservation_report(const Trajectory& tr, double boundary_tol = 1e-8);
std::string to_csv(const ConservationReport& r);
std::string drifts_json(const ConservationReport& r);  // canonical, 2-space indent

// ||H(phi^2 - (H phi)^2) - 2 phi H phi||_inf, products de-aliased
double hilbert_identity_residual(const RealField& phi);

// int x (P_+ phi)^3 dx, evaluated on a 4x zero-padded grid so the cube is alias free
struct MomentCheck {
  cplx value;
  double scale = 0.0;  // int |x| |P_+ phi|^3 dx
};
MomentCheck moment_cancellation(const RealField& phi, double boundary_tol = 1e-8);

struct DecayBounds {
  double max_L_ratio = 0.0;    // max ||L phi|| / <t>
  double max_sup_ratio = 0.0;  // max sup|phi| t^{1/2} / <t^{1/2}>
  std::vector<double> times, L_ratio, sup_ratio;
};
DecayBounds decay_bounds_check(const Trajectory& tr, double boundary_tol = 1e-8);

}  // namespace bolab
