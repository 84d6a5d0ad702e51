#include "bolab/normal_form.hpp"

#include <cmath>
#include <string>

namespace bolab {

namespace {

RealField prepared(const RealField& phi, const NormalFormOptions& o) {
  const double mu = mean(phi);
  if (o.mean_mode == MeanMode::drop) {
    RealField r = phi;
    for (auto& a : r.v) a -= mu;
    return r;
  }
  if (std::abs(mu) >= o.mean_tol)
    throw PreconditionError("normal form requires mean-zero data, mean = " + std::to_string(mu), mu);
  return phi;
}

void check_k(int k, int min) {
  if (k < min) throw ArgumentError("dyadic index k = " + std::to_string(k) + " below " + std::to_string(min));
}

double pos(double xi) { return xi > 0.0 ? 1.0 : 0.0; }

// symbols
ComplexField Pk(const ComplexField& u, int k) {
  return apply(u, [k](double xi) { return cplx(pos(xi) * sym_band(xi, k)); });
}
ComplexField Tk(const ComplexField& u, int k) {
  return apply(u, [k](double xi) { return cplx(0.0, -pos(xi) * sym_band(xi, k)); });
}
ComplexField Pplus(const ComplexField& u) {
  return apply(u, [](double xi) { return cplx(pos(xi)); });
}
ComplexField Pminus(const ComplexField& u) {
  return apply(u, [](double xi) { return cplx(xi < 0.0 ? 1.0 : 0.0); });
}
ComplexField below(const ComplexField& u, int k) {
  return apply(u, [k](double xi) { return cplx(sym_le(xi, k - 1)); });
}
ComplexField at_least(const ComplexField& u, int k) {
  return apply(u, [k](double xi) { return cplx(1.0 - sym_le(xi, k - 1)); });
}
ComplexField dx(const ComplexField& u) { return derivative(u, 1); }
ComplexField dxx(const ComplexField& u) { return derivative(u, 2); }
ComplexField dinv(const ComplexField& u) { return inverse_derivative(u); }
ComplexField H(const ComplexField& u) { return hilbert(u); }
ComplexField mul(const ComplexField& a, const ComplexField& b) { return product(a, b); }

// [T, a] g
ComplexField comm(const ComplexField& a, const ComplexField& g, int k) {
  return Tk(mul(a, g), k) - mul(a, Tk(g, k));
}

ComplexField form(const ComplexField& u, const ComplexField& w, int k) {
  const ComplexField b = dinv(at_least(u, std::max(k, 1)));
  ComplexField r = cplx(0.25) * Pk(mul(H(w), b), k) + cplx(0.25) * Tk(mul(w, b), k);
  if (k >= 1) r = r + cplx(0.5) * comm(dinv(below(u, k)), Pplus(w), k);
  return r;
}

// everything the identities need at one snapshot
struct Snapshot {
  int k;
  ComplexField phi, phit, N2, s, pl;
  Snapshot(const RealField& p, int k_, bool linear) : k(k_) {
    phi = to_complex(p);
    s = mul(phi, phi);
    N2 = linear ? cplx(0.0) * phi : cplx(0.5) * dx(s);
    phit = cplx(-1.0) * H(dxx(phi)) + N2;
    pl = linear ? cplx(0.0) * phi : below(phi, k);
  }
};

// (i d_t + d_x^2) of phi_k^+: the linear symbol p_k^+(xi)(xi|xi| - xi^2) vanishes identically
ComplexField schr_plain(const Snapshot& S) {
  const int k = S.k;
  ComplexField lin = apply(S.phi, [k](double xi) {
    return cplx(pos(xi) * sym_band(xi, k) * (xi * std::abs(xi) - xi * xi));
  });
  return lin + cplx(0.0, 1.0) * Pk(S.N2, k);
}

ComplexField schr_B(const Snapshot& S, const ComplexField& B) {
  return cplx(0.0, 1.0) * (form(S.phit, S.phi, S.k) + form(S.phi, S.phit, S.k)) + dxx(B);
}

ComplexField para(const ComplexField& pl, const ComplexField& v) {
  const ComplexField plx = dx(pl);
  const ComplexField m = cplx(-0.5) * (H(plx) + cplx(0.0, 1.0) * plx);
  return cplx(0.0, -1.0) * mul(pl, dx(v)) + mul(m, v);
}

ComplexField q3(const Snapshot& S, const ComplexField& B) {
  const int k = S.k;
  const cplx i(0.0, 1.0);
  const ComplexField& phi = S.phi;
  const ComplexField pp = Pplus(phi);
  const ComplexField a = dinv(S.pl);
  const ComplexField b = dinv(at_least(phi, k));
  const ComplexField sx = dx(S.s);
  const ComplexField sge = at_least(S.s, k);
  const ComplexField px = dx(phi);
  const ComplexField phige = at_least(phi, k);
  const ComplexField Hphi = H(phi);

  ComplexField Bx = cplx(0.5) * comm(S.pl, pp, k) + cplx(0.5) * comm(a, dx(pp), k) +
                    cplx(0.25) * Pk(mul(H(px), b), k) + cplx(0.25) * Pk(mul(Hphi, phige), k) +
                    cplx(0.25) * Tk(mul(px, b), k) + cplx(0.25) * Tk(mul(phi, phige), k);

  const ComplexField plx = dx(S.pl);
  const ComplexField m = cplx(0.5) * (H(plx) + i * plx);

  return (0.25 * i) * comm(below(S.s, k), pp, k) + (0.25 * i) * comm(a, Pplus(sx), k) +
         (0.125 * i) * Pk(mul(H(sx), b), k) + (0.125 * i) * Pk(mul(Hphi, sge), k) +
         (0.125 * i) * Tk(mul(sx, b), k) + (0.125 * i) * Tk(mul(phi, sge), k) -
         i * mul(S.pl, Bx) - mul(m, B);
}

double rel(const ComplexField& d, const ComplexField& ref) {
  const double r = l2_norm(ref);
  const double e = l2_norm(d);
  if (r == 0.0) return e;
  return e / r;
}

// P_{<k}(phi^2) - phi_{<k}^2
ComplexField low_defect(const Snapshot& S) { return below(S.s, S.k) - mul(S.pl, S.pl); }

}  // namespace

ComplexField bilinear_form(const RealField& u, const RealField& w, int k) {
  check_k(k, 0);
  return form(to_complex(u), to_complex(w), k);
}

ComplexField bilinear_Bk(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  return bilinear_form(p, p, k);
}

ComplexField bilinear_B0(const RealField& phi, const NormalFormOptions& o) {
  const RealField p = prepared(phi, o);
  return bilinear_form(p, p, 0);
}

ComplexField gauge(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 0);
  const RealField p = prepared(phi, o);
  const RealField Phi = primitive_phi(project(p, {Proj::below, k}), MeanMode::drop);
  ComplexField g{phi.grid, cvec(phi.v.size())};
  for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] = std::polar(1.0, -Phi.v[i]);
  return g;
}

DyadicVariable make_variable(const RealField& phi, int k, VariableKind kind,
                             const NormalFormOptions& o) {
  check_k(k, 0);
  const RealField p = prepared(phi, o);
  DyadicVariable v{k, project_complex(p, {Proj::band_plus, k}), kind};
  if (kind == VariableKind::plain) return v;
  v.base = v.base + bilinear_form(p, p, k);
  if (kind == VariableKind::corrected) return v;
  const ComplexField g = gauge(p, k, o);
  for (std::size_t i = 0; i < g.v.size(); ++i) v.base.v[i] *= g.v[i];
  return v;
}

ComplexField cubic_Q3(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  Snapshot S(p, k, false);
  return q3(S, form(S.phi, S.phi, k));
}

ComplexField cubic_Q3_tilde(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  Snapshot S(p, k, false);
  return q3(S, form(S.phi, S.phi, k)) + cplx(0.25) * mul(Pk(S.phi, k), low_defect(S));
}

ComplexField quartic_Q4_tilde(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  Snapshot S(p, k, false);
  return cplx(0.25) * mul(form(S.phi, S.phi, k), low_defect(S));
}

ComplexField paradifferential_part(const RealField& phi, const ComplexField& u, int k) {
  check_k(k, 0);
  return para(below(to_complex(phi), k), u);
}

ComplexField apply_ABO(const RealField& phi, const DyadicVariable& var, const ABOOptions& a,
                       const NormalFormOptions& o) {
  const int k = var.k;
  check_k(k, 0);
  const RealField p = prepared(phi, o);
  Snapshot S(p, k, a.linear_flow);
  const ComplexField plain = Pk(S.phi, k);
  ComplexField sv = schr_plain(S);
  ComplexField v = plain;
  if (var.kind != VariableKind::plain) {
    const ComplexField B = form(S.phi, S.phi, k);
    sv = sv + schr_B(S, B);
    v = v + B;
  }
  if (var.kind != VariableKind::gauged) return sv + para(S.pl, v);

  // psi = v e^{-i Theta}: (i d_t + d_x^2) psi = e^{-i Theta}[S v + Theta_t v - 2i Theta_x v_x
  //   - i Theta_xx v - Theta_x^2 v], Theta_t from the Phi equation
  const cplx i(0.0, 1.0);
  const ComplexField thx = cplx(0.5) * S.pl;
  const ComplexField tht = cplx(-0.5) * H(dx(S.pl)) + cplx(0.25) * below(S.s, k);
  ComplexField lhs = sv + mul(tht, v) - (2.0 * i) * mul(thx, dx(v)) - i * mul(dx(thx), v) -
                     mul(mul(thx, thx), v);
  const ComplexField g = gauge(p, k, o);
  for (std::size_t j = 0; j < lhs.v.size(); ++j) lhs.v[j] *= g.v[j];
  return lhs;
}

double residual_identity(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  const ComplexField lhs = apply_ABO(p, {k, {}, VariableKind::corrected}, {}, o);
  const ComplexField rhs = cubic_Q3(p, k, o);
  return rel(lhs - rhs, rhs);
}

double residual_gauged(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  const ComplexField lhs = apply_ABO(p, {k, {}, VariableKind::gauged}, {}, o);
  ComplexField rhs = cubic_Q3_tilde(p, k, o) + quartic_Q4_tilde(p, k, o);
  const ComplexField g = gauge(p, k, o);
  for (std::size_t j = 0; j < rhs.v.size(); ++j) rhs.v[j] *= g.v[j];
  return rel(lhs - rhs, rhs);
}

ComplexField quadratic_Q2_0(const RealField& phi, const NormalFormOptions& o) {
  const RealField p = prepared(phi, o);
  const ComplexField c = to_complex(p);
  const ComplexField pp = Pplus(c);
  const ComplexField p0 = apply(c, [](double xi) { return cplx(sym_le(xi, 0)); });
  return cplx(0.0, 1.0) * Pk(mul(p0, dx(pp)) + mul(dx(Pminus(p0)), pp), 0);
}

double residual_identity_k0(const RealField& phi, const NormalFormOptions& o) {
  const RealField p = prepared(phi, o);
  Snapshot S(p, 0, false);
  const ComplexField B = form(S.phi, S.phi, 0);
  const ComplexField lhs = schr_plain(S) + schr_B(S, B);
  const ComplexField q3 =
      cplx(0.0, 1.0) * (form(S.N2, S.phi, 0) + form(S.phi, S.N2, 0));
  const ComplexField rhs = quadratic_Q2_0(p, o) + q3;
  return rel(lhs - rhs, rhs);
}

double defect_without_Bk(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  return l2_norm(apply_ABO(phi, {k, {}, VariableKind::plain}, {}, o));
}

double defect_without_Q3(const RealField& phi, int k, const NormalFormOptions& o) {
  check_k(k, 1);
  return l2_norm(apply_ABO(phi, {k, {}, VariableKind::corrected}, {}, o));
}

ComplexField linearized_Bk(const RealField& phi, const RealField& v, int k,
                           const NormalFormOptions& o) {
  check_k(k, 1);
  const RealField p = prepared(phi, o);
  const RealField w = prepared(v, o);
  const ComplexField band = to_complex(project(w, {Proj::below, k}) - project(w, {Proj::band, 0}));
  const ComplexField corr = mul(H(Pk(to_complex(p), k)), dinv(band));
  return bilinear_form(w, p, k) + bilinear_form(p, w, k) + cplx(0.5) * corr;
}

CommutatorResult commutator_leibnitz(const RealField& f, const RealField& g, int k) {
  check_k(k, 0);
  const Selector P{Proj::band, k};
  const RealField c = project(product(f, g), P) - product(f, project(g, P));
  const double den = std::ldexp(1.0, -k) * sup_norm(derivative(f, 1)) * l2_norm(g);
  return {c, den > 0.0 ? l2_norm(c) / den : 0.0};
}

}  // namespace bolab
