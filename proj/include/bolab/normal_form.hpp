#pragma once

#include "bolab/spectral.hpp"

namespace bolab {

// Conventions: T = P_k^+ H, [T, a] g = T(a g) - a T(g), d^{-1} is the zero-mode-excised inverse,
// phi_t is always replaced by -H phi_xx + 1/2 (phi^2)_x.

enum class VariableKind { plain, corrected, gauged };

struct DyadicVariable {
  int k = 0;
  ComplexField base;
  VariableKind kind = VariableKind::plain;
};

struct NormalFormOptions {
  MeanMode mean_mode = MeanMode::strict;
  double mean_tol = 1e-10;
};

// Two-slot form, u sits under d^{-1}:
//   k >= 1: B(u,w) = 1/2 [T, d^{-1}u_{<k}] P_+ w + 1/4 P_k^+(H w d^{-1}u_{>=k}) + 1/4 T(w d^{-1}u_{>=k})
//   k = 0:  B(u,w) = 1/4 P_0^+(H w d^{-1}u_{>=1}) + 1/4 T(w d^{-1}u_{>=1})
ComplexField bilinear_form(const RealField& u, const RealField& w, int k);
ComplexField bilinear_Bk(const RealField& phi, int k, const NormalFormOptions& o = {});
ComplexField bilinear_B0(const RealField& phi, const NormalFormOptions& o = {});

// exp(-i Phi_{<k}), Phi_{<k} = 1/2 d^{-1} phi_{<k} pinned to 0 at the left edge
ComplexField gauge(const RealField& phi, int k, const NormalFormOptions& o = {});

DyadicVariable make_variable(const RealField& phi, int k, VariableKind kind,
                             const NormalFormOptions& o = {});

ComplexField cubic_Q3(const RealField& phi, int k, const NormalFormOptions& o = {});
// Q3 + 1/4 phi_k^+ (P_{<k}(phi^2) - phi_{<k}^2)
ComplexField cubic_Q3_tilde(const RealField& phi, int k, const NormalFormOptions& o = {});
// 1/4 B_k (P_{<k}(phi^2) - phi_{<k}^2)
ComplexField quartic_Q4_tilde(const RealField& phi, int k, const NormalFormOptions& o = {});

struct ABOOptions {
  bool linear_flow = false;  // phi_t = -H phi_xx and phi_{<k} -> 0
};

// plain / corrected: (i d_t + d_x^2 - i phi_{<k} d_x - 1/2 (H + i)(d_x phi_{<k})) v
// gauged: (i d_t + d_x^2) psi, the gauge having absorbed the paradifferential terms
ComplexField apply_ABO(const RealField& phi, const DyadicVariable& var,
                       const ABOOptions& a = {}, const NormalFormOptions& o = {});

// paradifferential part S u = -i phi_{<k} u_x - 1/2 (H + i)(d_x phi_{<k}) u (symmetric)
ComplexField paradifferential_part(const RealField& phi, const ComplexField& u, int k);

// relative L2 residuals; 0 for phi = 0
double residual_identity(const RealField& phi, int k, const NormalFormOptions& o = {});
double residual_gauged(const RealField& phi, int k, const NormalFormOptions& o = {});
// k = 0: (i d_t + d_x^2)(phi_0^+ + B_0) = Q2_0 + Q3_0
double residual_identity_k0(const RealField& phi, const NormalFormOptions& o = {});
ComplexField quadratic_Q2_0(const RealField& phi, const NormalFormOptions& o = {});

// defects with one correction removed (order counting)
double defect_without_Bk(const RealField& phi, int k, const NormalFormOptions& o = {});
double defect_without_Q3(const RealField& phi, int k, const NormalFormOptions& o = {});

// B(v,phi) + B(phi,v) + 1/2 H(P_k^+ phi) d^{-1} v_(0,k),  v_(0,k) = (P_{<k} - P_{<=0}) v
ComplexField linearized_Bk(const RealField& phi, const RealField& v, int k,
                           const NormalFormOptions& o = {});

struct CommutatorResult {
  RealField field;  // [P_k, f] g
  double ratio;     // ||[P_k,f]g|| / (2^{-k} ||f_x||_inf ||g||)
};
CommutatorResult commutator_leibnitz(const RealField& f, const RealField& g, int k);

}  // namespace bolab
