#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "bolab/conservation.hpp"
#include "bolab/diagnostics.hpp"
#include "bolab/field_io.hpp"
#include "bolab/normal_form.hpp"
#include "bolab/scenario.hpp"
#include "json.hpp"

namespace bolab {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Ctx {
  const ScenarioConfig& cfg;
  std::uint64_t seed;
  fs::path dir;
  std::vector<CheckResult> checks;
  std::vector<std::string> outputs;
  ojson summary = ojson::object();

  bool wants(const char* fmt) const {
    return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), fmt) !=
           cfg.output.formats.end();
  }
  void write(const std::string& name, const std::string& body) {
    std::ofstream o(dir / name, std::ios::binary);
    if (!o) throw Error("cannot write " + (dir / name).string());
    o << body;
    outputs.push_back(name);
  }
  void csv(const std::string& name, const std::string& body) {
    if (wants("csv")) write(name, body);
  }
  void json(const std::string& name, const ojson& j) {
    if (wants("json")) write(name, j.dump(2) + "\n");
  }

  void upper(const std::string& name, double v, double bound, bool strict = true) {
    checks.push_back({name, v, strict ? "<" : "<=", bound, bound,
                      std::isfinite(v) && (strict ? v < bound : v <= bound)});
  }
  void within(const std::string& name, double v, double lo, double hi) {
    checks.push_back({name, v, "in", lo, hi, std::isfinite(v) && v >= lo && v <= hi});
  }
  void truth(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, "==", 1.0, 1.0, ok});
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class... T>
std::string row(const T&... v) {
  std::string s;
  ((s += (s.empty() ? "" : ",") + num(static_cast<double>(v))), ...);
  return s + "\n";
}

GridPtr grid_of(const ScenarioConfig& c) { return make_grid(c.grid.n_points, c.grid.length); }

RealField initial_field(const Ctx& x, const GridPtr& g) {
  if (!x.cfg.initial_data) throw ConfigError("initial_data: required by this subcommand");
  const InitialDataConfig& d = *x.cfg.initial_data;
  RealField f;
  if (d.kind == "soliton") {
    f = soliton(d.c, d.x0, g);
  } else if (d.kind == "gaussian") {
    f = gaussian(d.amplitude, d.width, d.x0, g);
  } else if (d.kind == "odd_gaussian") {
    f = odd_gaussian(d.amplitude, d.width, d.x0, g);
  } else if (d.kind == "gaussian_derivative") {
    f = gaussian_derivative(d.amplitude, d.width, d.x0, g);
  } else if (d.kind == "random_localized") {
    RandomDataOptions o;
    o.band = d.band;
    return random_localized(x.seed, *d.eps, g, o);
  } else {
    const Snapshot s = load_field(d.path);
    if (!s.grid->same_as(*g))
      throw ConfigError("initial_data.path: field grid (" + std::to_string(s.grid->n()) + ", " +
                        num(s.grid->length()) + ") differs from grid section");
    f = as_real(s);
  }
  if (d.normalize) f = normalize_data(f, *d.eps);
  return f;
}

EvolveOptions evolve_options(const ScenarioConfig& c) {
  EvolveOptions o;
  o.integrator = integrator_from_string(c.integrator.name);
  o.cadence = c.integrator.snapshot_cadence;
  o.enforce_dt_max = c.integrator.enforce_dt_max;
  return o;
}

void write_trajectory_bof(Ctx& x, const Trajectory& tr, const std::string& name) {
  if (!x.wants("bof")) return;
  std::ofstream o(x.dir / name, std::ios::binary);
  for (const Snap& s : tr.snapshots) write_field(o, s.f, s.t);
  x.outputs.push_back(name);
}

std::string decay_csv(const DecayReport& r) {
  std::string s = "t,sup,hilbert_sup,profile_ratio,normalized_ratio,elliptic_ratio,intphi_ratio\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    s += row(r.times[i], r.sup_norms[i], r.hilbert_sup_norms[i], r.profile_ratios[i],
             r.normalized_ratios[i], r.elliptic_ratios[i], r.intphi_ratios[i]);
  return s;
}

ojson fit_json(const LogLogFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"points", f.points}};
}

// ---- subcommands

void run_simulate(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const RealField f0 = initial_field(x, g);
  const auto& I = x.cfg.integrator;
  const Trajectory tr = evolve(f0, I.t_end, I.dt, evolve_options(x.cfg));
  std::string s = "t,E0,E1,E2,sup\n";
  for (const Snap& q : tr.snapshots) s += row(q.t, mass(q.f), momentum(q.f), energy(q.f), sup_norm(q.f));
  x.csv("trajectory.csv", s);
  write_trajectory_bof(x, tr, "trajectory.bof");

  const auto& d = x.cfg.initial_data;
  if (x.cfg.diagnostics.soliton && d && d->kind == "soliton") {
    const SolitonDiag& sd = *x.cfg.diagnostics.soliton;
    const double T = tr.snapshots.back().t;
    const RealField& fT = tr.snapshots.back().f;
    const RealField expected = soliton(d->c, d->x0 + soliton_speed(d->c) * T, g);
    const double shape = sup_norm(fT - expected) / sup_norm(expected);
    const double L = g->length();
    double disp = peak_location(fT) - peak_location(f0);
    disp -= L * std::round(disp / L);
    const double v = T > 0.0 ? disp / T : 0.0;
    const double speed_err = std::abs(v - soliton_speed(d->c)) / d->c;
    const double res = soliton_residual(d->c, g);
    x.upper("soliton_substitution_residual", res, sd.residual_tol);
    x.upper("soliton_shape_error", shape, sd.shape_tol);
    x.upper("soliton_speed_relative_error", speed_err, sd.speed_tol);
    x.upper("soliton_velocity_leftward", v, 0.0);
    x.summary["soliton"] = {{"c", d->c},
                            {"residual", res},
                            {"shape_error", shape},
                            {"measured_velocity", v},
                            {"nominal_velocity", soliton_speed(d->c)}};
  }
  x.json("summary.json", x.summary);
}

std::vector<double> linear_times(const ScenarioConfig& c) {
  std::vector<double> t;
  const auto& I = c.integrator;
  const DecayDiag* d = c.diagnostics.decay ? &*c.diagnostics.decay : nullptr;
  if (d && d->log_samples >= 2) {
    const double a = d->fit_t_min, b = d->fit_t_max.value_or(I.t_end);
    for (int i = 0; i < d->log_samples; ++i)
      t.push_back(a * std::pow(b / a, static_cast<double>(i) / (d->log_samples - 1)));
    return t;
  }
  const auto steps = static_cast<std::int64_t>(std::llround(I.t_end / I.dt));
  for (std::int64_t s = 0; s <= steps; s += I.snapshot_cadence) t.push_back(static_cast<double>(s) * I.dt);
  if (t.back() < I.t_end) t.push_back(I.t_end);
  return t;
}

void decay_checks(Ctx& x, const DecayReport& r, const DecayDiag& d, bool nonlinear) {
  x.within("decay_fitted_exponent", r.fitted_exponent, d.exponent - d.exponent_tol,
           d.exponent + d.exponent_tol);
  if (nonlinear) x.upper("decay_max_profile_ratio", r.max_normalized_ratio, d.ratio_limit, false);
  x.summary["decay"] = {{"fit", fit_json(r.fit)},
                        {"max_normalized_ratio", r.max_normalized_ratio},
                        {"t_ratio_le_limit", r.t_ratio_le_limit},
                        {"ratio_limit", d.ratio_limit}};
}

void run_linear(Ctx& x) {
  const auto& D = x.cfg.diagnostics;
  const GridPtr g = grid_of(x.cfg);
  if (x.cfg.initial_data) {
    const RealField f0 = initial_field(x, g);
    const Trajectory tr = linear_trajectory(f0, linear_times(x.cfg));
    const DecayDiag dd = D.decay.value_or(DecayDiag{});
    DecayOptions o;
    o.fit_t_min = dd.fit_t_min;
    o.fit_t_max = dd.fit_t_max.value_or(x.cfg.integrator.t_end);
    o.ratio_limit = dd.ratio_limit;
    const double eps = dd.eps.value_or(data_functional(f0));
    const DecayReport r = decay_profile(tr, eps, o);
    x.csv("linear_decay.csv", decay_csv(r));
    if (D.decay) decay_checks(x, r, dd, false);
    const StrichartzNorms s = strichartz_norms(tr, o.fit_t_min, o.fit_t_max);
    x.summary["strichartz"] = {{"linf_l2", s.linf_l2}, {"l4_linf", s.l4_linf}, {"S", s.S}};
    write_trajectory_bof(x, tr, "trajectory.bof");
  }
  if (D.pointwise) {
    const PointwiseDiag& p = *D.pointwise;
    std::string s = "sample,t,K,left_refinement\n";
    double worst = 0.0, worst_left = 0.0;
    for (int i = 0; i < p.samples; ++i) {
      const RealField f = random_localized(x.seed + static_cast<std::uint64_t>(i), p.eps, g);
      for (double t : p.times) {
        const RealField psi = linear_propagate(f, t);
        const double K = pointwise_constant(psi, t, p.boundary_tol);
        const double lr = left_refinement_ratio(psi, t);
        worst = std::max(worst, K);
        worst_left = std::max(worst_left, lr);
        s += row(i, t, K, lr);
      }
    }
    x.csv("pointwise.csv", s);
    x.upper("pointwise_constant_max", worst, p.max_constant, false);
    x.summary["pointwise"] = {{"max_K", worst}, {"max_left_refinement", worst_left}};
  }
  x.json("summary.json", x.summary);
}

void run_conservation(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const RealField f0 = initial_field(x, g);
  const auto& I = x.cfg.integrator;
  const Trajectory tr = evolve(f0, I.t_end, I.dt, evolve_options(x.cfg));
  const ConservationDiag cd = x.cfg.diagnostics.conservation.value_or(ConservationDiag{});
  const ConservationReport r = conservation_report(tr, cd.boundary_tol);
  x.csv("conservation.csv", to_csv(r));
  if (x.wants("json")) x.write("drifts.json", drifts_json(r));
  if (x.cfg.diagnostics.conservation) {
    x.upper("drift_E0", r.drifts.E0, cd.max_drift);
    x.upper("drift_E1", r.drifts.E1, cd.max_drift);
    x.upper("drift_E2", r.drifts.E2, cd.max_drift);
    x.upper("drift_L2_scalingop", r.drifts.L2_of_scalingop, cd.max_drift);
    x.upper("drift_G", r.drifts.G, cd.max_drift);
  }
  write_trajectory_bof(x, tr, "trajectory.bof");
}

double slope_of(const std::vector<double>& a, const std::vector<double>& d) { return loglog_fit(a, d).slope; }

void run_normalform(Ctx& x) {
  const NormalFormDiag nd = x.cfg.diagnostics.normalform.value_or(NormalFormDiag{});
  const std::size_t n = x.cfg.grid.n_points;
  auto grid_k = [&](int k) {
    if (nd.nyquist_factor <= 0.0) return grid_of(x.cfg);
    const double L = std::numbers::pi * static_cast<double>(n) /
                     (nd.nyquist_factor * std::ldexp(1.0, std::max(k, 1)));
    return make_grid(n, L);
  };
  const bool checks = x.cfg.diagnostics.normalform.has_value();
  std::string s = "k,amplitude,residual_identity,residual_gauged,norm_Bk,norm_Q3\n";
  if (nd.include_k0) {
    const GridPtr g = grid_k(0);
    const RealField phi = dyadic_random(x.seed, 1, nd.amplitude, g);
    const double r0 = residual_identity_k0(phi);
    s += row(0, nd.amplitude, r0, std::nan(""), l2_norm(bilinear_B0(phi)), std::nan(""));
    if (checks) x.upper("residual_identity_k0", r0, nd.tolerance);
  }
  std::string o = "k,amplitude,defect_without_Bk,defect_without_Q3\n";
  ojson slopes = ojson::array();
  for (int k = nd.k_min; k <= nd.k_max; ++k) {
    const GridPtr g = grid_k(k);
    const std::uint64_t sd = x.seed + static_cast<std::uint64_t>(k);
    const RealField phi = dyadic_random(sd, k, nd.amplitude, g);
    const double ri = residual_identity(phi, k), rg = residual_gauged(phi, k);
    s += row(k, nd.amplitude, ri, rg, l2_norm(bilinear_Bk(phi, k)), l2_norm(cubic_Q3(phi, k)));
    std::vector<double> dB, dQ;
    for (double a : nd.amplitudes) {
      const RealField p = dyadic_random(sd, k, a, g);
      dB.push_back(defect_without_Bk(p, k));
      dQ.push_back(defect_without_Q3(p, k));
      o += row(k, a, dB.back(), dQ.back());
    }
    const double sB = slope_of(nd.amplitudes, dB), sQ = slope_of(nd.amplitudes, dQ);
    slopes.push_back({{"k", k}, {"slope_without_Bk", sB}, {"slope_without_Q3", sQ}});
    if (checks) {
      const std::string ks = std::to_string(k);
      x.upper("residual_identity_k" + ks, ri, nd.tolerance);
      x.upper("residual_gauged_k" + ks, rg, nd.tolerance);
      x.within("order_slope_without_Bk_k" + ks, sB, 2.0 - nd.slope_tol, 2.0 + nd.slope_tol);
      x.within("order_slope_without_Q3_k" + ks, sQ, 3.0 - nd.slope_tol, 3.0 + nd.slope_tol);
    }
  }
  x.csv("normalform.csv", s);
  x.csv("order_counting.csv", o);
  x.json("order_counting.json", slopes);
}

void run_decay(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const RealField f0 = initial_field(x, g);
  const auto& I = x.cfg.integrator;
  const DecayDiag dd = x.cfg.diagnostics.decay.value_or(DecayDiag{});
  DecayOptions o;
  o.fit_t_min = dd.fit_t_min;
  o.fit_t_max = dd.fit_t_max.value_or(I.t_end);
  o.ratio_limit = dd.ratio_limit;
  const double eps = dd.eps.value_or(data_functional(f0));
  const Trajectory tr = evolve(f0, I.t_end, I.dt, evolve_options(x.cfg));
  const DecayReport r = decay_profile(tr, eps, o);
  x.csv("decay.csv", decay_csv(r));
  if (x.cfg.diagnostics.decay) decay_checks(x, r, dd, true);
  if (dd.soliton_control) {
    const SolitonControl& sc = *dd.soliton_control;
    const RealField q = soliton(sc.c, 0.0, g);
    const Trajectory ts = evolve(q, I.t_end, I.dt, evolve_options(x.cfg));
    // x Q is not square integrable; the growth exponent does not depend on the scale
    const DecayReport rs = decay_profile(ts, l2_norm(q), o);
    std::vector<double> t, a, p;
    for (std::size_t i = 0; i < rs.times.size(); ++i) {
      if (rs.times[i] < o.fit_t_min || rs.times[i] > o.fit_t_max) continue;
      t.push_back(rs.times[i]);
      a.push_back(rs.sup_norms[i] * std::sqrt(rs.times[i]));
      p.push_back(rs.profile_ratios[i]);
    }
    const LogLogFit fa = loglog_fit(t, a), fp = loglog_fit(t, p);
    x.csv("soliton_control.csv", decay_csv(rs));
    x.within("soliton_control_growth_exponent", fa.slope, sc.exponent - sc.tolerance,
             sc.exponent + sc.tolerance);
    x.summary["soliton_control"] = {{"c", sc.c},
                                    {"sup_times_sqrt_t", fit_json(fa)},
                                    {"profile_ratio", fit_json(fp)}};
  }
  x.json("decay.json", x.summary);
}

void run_envelope(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const RealField f0 = initial_field(x, g);
  const EnvelopeDiag ed = x.cfg.diagnostics.envelope.value_or(EnvelopeDiag{});
  const EnvelopeReport r = minimal_envelope(f0, ed.delta, ed.floor);
  std::string s = "k,norm,c\n";
  for (std::size_t k = 0; k < r.c.size(); ++k) s += row(k, r.norms[k], r.c[k]);
  x.csv("envelope.csv", s);
  x.json("envelope.json", {{"delta", r.delta}, {"floor", r.floor}, {"admissible", r.admissible}, {"c", r.c}});
  if (x.cfg.diagnostics.envelope) x.truth("envelope_admissible", r.admissible);
}

void run_bilinear(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const BilinearDiag bd = x.cfg.diagnostics.bilinear.value_or(BilinearDiag{});
  const bool checks = x.cfg.diagnostics.bilinear.has_value();
  auto packet = [&](int j) {
    const double w = bd.packet_width, f = bd.carrier * std::ldexp(1.0, j);
    const RealField p = sample_fn(g, [&](double y) { return std::exp(-y * y / (w * w)) * std::cos(f * y); });
    return project(p, {Proj::band, j});
  };
  std::string s = "j,k,value,reference,ratio,best_shift\n";
  std::vector<std::vector<double>> val(bd.band_max + 1, std::vector<double>(bd.band_max + 1, 0.0));
  const std::vector<double> shifts = default_shifts(bd.shift_span, bd.shifts);
  for (int j = bd.band_min; j <= bd.band_max; ++j)
    for (int k = j + bd.min_gap; k <= bd.band_max; ++k) {
      const double T = bd.window / std::ldexp(1.0, k);
      std::vector<double> ts;
      for (int i = 0; i <= bd.time_samples; ++i) ts.push_back(-T + 2.0 * T * i / bd.time_samples);
      const BilinearReport r =
          bilinear_functional(linear_trajectory(packet(j), ts), linear_trajectory(packet(k), ts), j, k, shifts);
      val[j][k] = r.value;
      s += row(j, k, r.value, r.reference, r.ratio, r.best_shift);
      if (checks)
        x.within("bilinear_ratio_j" + std::to_string(j) + "_k" + std::to_string(k), r.ratio,
                 1.0 / bd.max_ratio, bd.max_ratio);
    }
  std::string b = "j,k,factor\n";
  for (int j = bd.band_min; j <= bd.band_max; ++j)
    for (int k = j + bd.min_gap; k + 1 <= bd.band_max; ++k) {
      const double f = val[j][k + 1] / val[j][k];
      b += row(j, k, f);
      if (checks)
        x.within("bilinear_band_factor_j" + std::to_string(j) + "_k" + std::to_string(k), f,
                 bd.band_factor * (1.0 - bd.band_factor_tol), bd.band_factor * (1.0 + bd.band_factor_tol));
    }
  x.csv("bilinear.csv", s);
  x.csv("bilinear_band_factor.csv", b);
}

void run_convergence(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const RealField f0 = initial_field(x, g);
  const ConvergenceDiag cd = x.cfg.diagnostics.convergence.value_or(ConvergenceDiag{});
  ConvergenceOptions o;
  o.n_list = cd.n_list;
  o.t_end = x.cfg.integrator.t_end;
  o.dt = x.cfg.integrator.dt;
  o.cadence = x.cfg.integrator.snapshot_cadence;
  o.integrator = integrator_from_string(x.cfg.integrator.name);
  const ConvergenceReport r = convergence_experiment(f0, o);
  std::string s = "n,sup_diff_Hm12,log2_sup_diff\n";
  for (std::size_t i = 0; i < r.n.size(); ++i) s += row(r.n[i], r.sup_diff[i], std::log2(r.sup_diff[i]));
  x.csv("convergence.csv", s);
  x.json("convergence.json", {{"n_ref", r.n_ref}, {"fit", fit_json(r.fit)}, {"monotone", r.monotone}});
  if (x.cfg.diagnostics.convergence) {
    x.within("convergence_slope", r.fit.slope, cd.slope - cd.slope_tol, cd.slope + cd.slope_tol);
    if (cd.require_monotone) x.truth("convergence_monotone", r.monotone);
  }
}

void run_identity(Ctx& x) {
  const GridPtr g = grid_of(x.cfg);
  const IdentityDiag id = x.cfg.diagnostics.identity.value_or(IdentityDiag{});
  const bool checks = x.cfg.diagnostics.identity.has_value();
  auto has = [&](const char* t) { return std::find(id.tests.begin(), id.tests.end(), t) != id.tests.end(); };
  RandomDataOptions ro;
  ro.band = id.band;
  auto sample = [&](int i) { return random_localized(x.seed + static_cast<std::uint64_t>(i), id.eps, g, ro); };

  if (has("scaling")) {
    std::vector<RealField> fields;
    if (x.cfg.initial_data) fields.push_back(initial_field(x, g));
    for (int i = 0; i < id.samples; ++i) fields.push_back(sample(i));
    std::string s = "sample,t,G,L2_scalingop,relative_residual\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i)
      for (double t : id.times) {
        const double G = scaling_functional(fields[i], t, id.boundary_tol);
        const double l = l2_norm(scaling_operator(fields[i], t, id.boundary_tol));
        const double r = std::abs(G - l * l) / std::abs(G);
        worst = std::max(worst, r);
        s += row(i, t, G, l * l, r);
      }
    x.csv("scaling_identity.csv", s);
    if (checks) x.upper("scaling_identity_residual", worst, id.scaling_tol);
  }
  if (has("hilbert")) {
    std::string s = "sample,sup_residual\n";
    double worst = 0.0;
    for (int i = 0; i < id.samples; ++i) {
      RealField f = dealias(sample(i));
      f = (1.0 / sup_norm(f)) * f;
      const double r = hilbert_identity_residual(f);
      worst = std::max(worst, r);
      s += row(i, r);
    }
    x.csv("hilbert_identity.csv", s);
    if (checks) x.upper("hilbert_identity_residual", worst, id.hilbert_tol);
  }
  if (has("moment")) {
    std::string s = "sample,re,im,scale,relative\n";
    double worst = 0.0;
    for (int i = 0; i < id.samples; ++i) {
      const MomentCheck m = moment_cancellation(sample(i), id.boundary_tol);
      const double r = std::abs(m.value) / m.scale;
      worst = std::max(worst, r);
      s += row(i, m.value.real(), m.value.imag(), m.scale, r);
    }
    x.csv("moment_cancellation.csv", s);
    if (checks) x.upper("moment_cancellation_relative", worst, id.moment_tol);
  }
}

ojson check_json(const CheckResult& c) {
  ojson j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["relation"] = c.relation;
  if (c.relation == "in")
    j["bounds"] = {c.lo, c.hi};
  else
    j["bound"] = c.lo;
  j["passed"] = c.passed;
  return j;
}

}  // namespace

RunResult run_scenario(const std::string& sub, const ScenarioConfig& cfg, const RunOverrides& ov) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  ScenarioConfig c = cfg;
  if (ov.out_dir) c.output.directory = *ov.out_dir;
  if (ov.seed) c.seed = *ov.seed;
  res.out_dir = c.output.directory;
  Ctx x{c, c.seed, fs::path(c.output.directory), {}, {}, ojson::object()};

  try {
    fs::create_directories(x.dir);
  } catch (const fs::filesystem_error& e) {
    res.exit_code = 2;
    res.status = "config_error";
    res.message = std::string("output.directory: ") + e.what();
    return res;
  }

  try {
    if (sub == "simulate") run_simulate(x);
    else if (sub == "linear") run_linear(x);
    else if (sub == "conservation") run_conservation(x);
    else if (sub == "normalform") run_normalform(x);
    else if (sub == "decay") run_decay(x);
    else if (sub == "envelope") run_envelope(x);
    else if (sub == "bilinear") run_bilinear(x);
    else if (sub == "convergence") run_convergence(x);
    else if (sub == "identity") run_identity(x);
    else throw ArgumentError("unknown subcommand '" + sub + "'");
    const bool ok = std::all_of(x.checks.begin(), x.checks.end(), [](const CheckResult& r) { return r.passed; });
    res.exit_code = ok ? 0 : 1;
    res.status = ok ? "ok" : "checks_failed";
  } catch (const DivergenceError& e) {
    res.exit_code = 3;
    res.status = "diverged";
    res.message = e.what();
    res.last_good_time = e.last_good_time;
  } catch (const Error& e) {
    res.exit_code = 2;
    res.status = "error";
    res.message = e.what();
  }
  res.checks = x.checks;
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ojson m;
  m["tool"] = "bo-lab";
  m["subcommand"] = sub;
  m["status"] = res.status;
  m["exit_code"] = res.exit_code;
  if (!res.message.empty()) m["message"] = res.message;
  m["last_good_time"] = res.last_good_time ? ojson(*res.last_good_time) : ojson(nullptr);
  m["seed"] = c.seed;
  m["soliton_convention"] = kSolitonConvention;
  ojson ver;
  ver["bo-lab"] = kVersion;
  ver["fftw"] = std::string(fftw_version);
  ver["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  ver["compiler"] = std::string(__VERSION__);
  m["versions"] = ver;
  m["floating_point"] = "IEEE-754 binary64, round-to-nearest, FFTW_ESTIMATE plans";
  m["wall_time_s"] = res.wall_time;
  ojson ch = ojson::array();
  for (const auto& r : res.checks) ch.push_back(check_json(r));
  m["checks"] = ch;
  m["outputs"] = x.outputs;
  m["config"] = ojson::parse(emit_canonical(c));
  std::ofstream(x.dir / "manifest.json") << m.dump(2) << "\n";
  std::ofstream(x.dir / "config.json") << emit_canonical(c);
  return res;
}

const std::vector<AcceptanceCheck>& acceptance_checks() {
  static const std::vector<AcceptanceCheck> v{
      {1, "scaling_identity", "identity", "c01_scaling_identity.json", "|G - ||Lphi||^2| / G < 1e-6", {"scaling_identity"}},
      {2, "scaling_law_dynamics", "conservation", "c02_c03_conservation.json", "drift ||Lphi||^2 < 1e-6", {"drift_L2_scalingop", "drift_G"}},
      {3, "classical_invariants", "conservation", "c02_c03_conservation.json", "drift E0, E1, E2 < 1e-6", {"drift_E"}},
      {4, "normal_form_identities", "normalform", "c04_c05_normalform.json", "relative residual < 1e-8, k = 1..8", {"residual_"}},
      {5, "order_counting", "normalform", "c04_c05_normalform.json", "slopes 2 +- 0.1 and 3 +- 0.1", {"order_slope"}},
      {6, "linear_decay", "linear", "c06_linear_decay.json", "exponent -0.50 +- 0.05 on [1, 100]", {"decay_"}},
      {7, "pointwise_bound", "linear", "c07_pointwise.json", "K <= 10", {"pointwise_"}},
      {8, "hilbert_identity", "identity", "c08_hilbert_identity.json", "sup residual < 1e-10", {"hilbert_"}},
      {9, "soliton_fidelity", "simulate", "c09_soliton.json", "residual < 1e-8, shape < 1e-4, speed 1%, leftward", {"soliton_"}},
      {10, "bilinear_scaling", "bilinear", "c10_bilinear.json", "ratio within 10x, band factor 2^-1/2 +- 30%", {"bilinear_"}},
      {11, "weak_lipschitz_convergence", "convergence", "c11_convergence.json", "slope -1.0 +- 0.3", {"convergence_"}},
      {12, "small_data_decay", "decay", "c12_decay.json", "ratio <= 5, exponent -0.5 +- 0.1, soliton control", {"decay_", "soliton_control"}, true},
      {13, "moment_cancellation", "identity", "c13_moment.json", "|int x (phi+)^3| < 1e-8 scale", {"moment_"}},
  };
  return v;
}

}  // namespace bolab
