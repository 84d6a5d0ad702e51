#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "bolab/scenario.hpp"
#include "json.hpp"

namespace bolab {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

class Reader {
public:
  Reader(const json* j, std::string path, std::vector<std::string>& errs)
      : j_(j), path_(std::move(path)), errs_(errs) {
    if (j_ && !j_->is_object()) {
      fail("", "must be an object");
      j_ = nullptr;
    }
  }
  ~Reader() {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key())) errs_.push_back(join(it.key()) + ": unknown key");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_ && j_->contains(k);
  }
  const json* sub(const std::string& k) { return has(k) ? &j_->at(k) : nullptr; }
  std::string join(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  void fail(const std::string& k, const std::string& msg) {
    errs_.push_back((k.empty() ? (path_.empty() ? std::string("<root>") : path_) : join(k)) + ": " + msg);
  }

  void num(const std::string& k, double& out, bool (*ok)(double) = nullptr, const char* what = nullptr) {
    if (!has(k)) return;
    const json& v = j_->at(k);
    if (!v.is_number()) return fail(k, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) return fail(k, "must be finite");
    if (ok && !ok(d)) return fail(k, what);
    out = d;
  }
  void opt_num(const std::string& k, std::optional<double>& out, bool (*ok)(double) = nullptr,
               const char* what = nullptr) {
    if (!has(k)) return;
    double d = 0.0;
    const std::size_t before = errs_.size();
    num(k, d, ok, what);
    if (errs_.size() == before) out = d;
  }
  template <class I>
  void integer(const std::string& k, I& out, long long lo, long long hi) {
    if (!has(k)) return;
    const json& v = j_->at(k);
    if (!v.is_number_integer()) return fail(k, "must be an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
      return fail(k, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = static_cast<I>(x);
  }
  void boolean(const std::string& k, bool& out) {
    if (!has(k)) return;
    if (!j_->at(k).is_boolean()) return fail(k, "must be true or false");
    out = j_->at(k).get<bool>();
  }
  void str(const std::string& k, std::string& out, const std::set<std::string>& allowed = {}) {
    if (!has(k)) return;
    if (!j_->at(k).is_string()) return fail(k, "must be a string");
    const std::string s = j_->at(k).get<std::string>();
    if (!allowed.empty() && !allowed.count(s)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : " | ") + a;
      return fail(k, "'" + s + "' not one of " + list);
    }
    out = s;
  }
  void nums(const std::string& k, std::vector<double>& out, bool (*ok)(double) = nullptr,
            const char* what = nullptr) {
    if (!has(k)) return;
    const json& v = j_->at(k);
    if (!v.is_array() || v.empty()) return fail(k, "must be a non-empty array of numbers");
    std::vector<double> r;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
        return fail(k + "[" + std::to_string(i) + "]", "must be a finite number");
      if (ok && !ok(v[i].get<double>())) return fail(k + "[" + std::to_string(i) + "]", what);
      r.push_back(v[i].get<double>());
    }
    out = r;
  }
  void ints(const std::string& k, std::vector<int>& out, int lo, int hi) {
    if (!has(k)) return;
    const json& v = j_->at(k);
    if (!v.is_array() || v.empty()) return fail(k, "must be a non-empty array of integers");
    std::vector<int> r;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<long long>() < lo || v[i].get<long long>() > hi)
        return fail(k + "[" + std::to_string(i) + "]",
                    "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      r.push_back(v[i].get<int>());
    }
    out = r;
  }
  void strs(const std::string& k, std::vector<std::string>& out, const std::set<std::string>& allowed) {
    if (!has(k)) return;
    const json& v = j_->at(k);
    if (!v.is_array()) return fail(k, "must be an array of strings");
    std::vector<std::string> r;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string() || !allowed.count(v[i].get<std::string>()))
        return fail(k + "[" + std::to_string(i) + "]", "unsupported value");
      r.push_back(v[i].get<std::string>());
    }
    out = r;
  }

private:
  const json* j_;
  std::string path_;
  std::vector<std::string>& errs_;
  std::set<std::string> seen_;
};

bool positive(double d) { return d > 0.0; }
bool nonneg(double d) { return d >= 0.0; }
bool unit_open(double d) { return d > 0.0 && d < 1.0; }

bool power_of_two(std::size_t n) { return n >= 4 && (n & (n - 1)) == 0; }

template <class T, class F>
void section(Reader& r, const std::string& key, std::optional<T>& out, std::vector<std::string>& errs,
             const std::string& base, F fill) {
  const json* s = r.sub(key);
  if (!s) return;
  T v;
  {
    Reader q(s, base.empty() ? key : base + "." + key, errs);
    fill(q, v);
  }
  out = v;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: malformed JSON: ") + e.what());
  }
  std::vector<std::string> errs;
  ScenarioConfig c;
  {
    Reader root(&j, "", errs);

    if (const json* g = root.sub("grid")) {
      Reader r(g, "grid", errs);
      r.integer("n_points", c.grid.n_points, 4, 1LL << 24);
      if (!power_of_two(c.grid.n_points)) r.fail("n_points", "must be a power of two");
      const bool L = r.has("length"), Lp = r.has("length_pi");
      if (L && Lp) r.fail("length", "give either length or length_pi, not both");
      if (L) r.num("length", c.grid.length, positive, "must be positive");
      if (Lp) {
        std::optional<double> lp;
        r.opt_num("length_pi", lp, positive, "must be positive");
        if (lp) {
          c.grid.length_pi = *lp;
          c.grid.length = *lp * std::numbers::pi;
        }
      }
      if (!L && !Lp) {
        c.grid.length_pi = 256.0;
        c.grid.length = 256.0 * std::numbers::pi;
      }
    } else {
      root.fail("grid", "missing (n_points, length or length_pi)");
    }

    section(root, "initial_data", c.initial_data, errs, "", [&](Reader& r, InitialDataConfig& d) {
      if (!r.has("kind")) r.fail("kind", "missing");
      r.str("kind", d.kind, {"soliton", "gaussian", "odd_gaussian", "gaussian_derivative", "random_localized", "file"});
      r.num("amplitude", d.amplitude);
      r.num("width", d.width, positive, "must be positive");
      r.num("x0", d.x0);
      r.num("c", d.c, positive, "must be positive");
      r.opt_num("eps", d.eps, positive, "must be positive");
      r.boolean("normalize", d.normalize);
      r.num("band", d.band, nonneg, "must be >= 0");
      r.str("path", d.path);
      if (d.kind == "file" && d.path.empty()) r.fail("path", "required for kind = file");
      if (d.kind == "random_localized" && !d.eps) r.fail("eps", "required for kind = random_localized");
      if (d.normalize && !d.eps) r.fail("eps", "required when normalize is true");
    });

    if (const json* g = root.sub("integrator")) {
      Reader r(g, "integrator", errs);
      r.str("name", c.integrator.name, {"ifrk4", "etdrk4"});
      if (r.has("dt")) {
        const json& v = g->at("dt");
        if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>()))
          r.fail("dt", "must be a positive finite number");
        else
          c.integrator.dt = v.get<double>();
      }
      r.num("t_end", c.integrator.t_end, nonneg, "must be >= 0");
      r.integer("snapshot_cadence", c.integrator.snapshot_cadence, 1, 1LL << 40);
      r.boolean("enforce_dt_max", c.integrator.enforce_dt_max);
      const double steps = c.integrator.t_end / c.integrator.dt;
      if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
        r.fail("t_end", "must be an integer multiple of dt");
      else if (std::round(steps) >= 1.0 &&
               static_cast<double>(c.integrator.snapshot_cadence) > std::round(steps))
        r.fail("snapshot_cadence", "exceeds the number of steps t_end / dt");
    }

    if (const json* d = root.sub("diagnostics")) {
      Reader r(d, "diagnostics", errs);
      auto& D = c.diagnostics;
      const std::string b = "diagnostics";
      section(r, "conservation", D.conservation, errs, b, [](Reader& q, ConservationDiag& v) {
        q.num("boundary_tol", v.boundary_tol, positive, "must be positive");
        q.num("max_drift", v.max_drift, positive, "must be positive");
      });
      section(r, "identity", D.identity, errs, b, [](Reader& q, IdentityDiag& v) {
        q.strs("tests", v.tests, {"scaling", "hilbert", "moment"});
        q.integer("samples", v.samples, 0, 100000);
        q.nums("times", v.times, nonneg, "must be >= 0");
        q.num("eps", v.eps, positive, "must be positive");
        q.num("band", v.band, nonneg, "must be >= 0");
        q.num("scaling_tol", v.scaling_tol, positive, "must be positive");
        q.num("hilbert_tol", v.hilbert_tol, positive, "must be positive");
        q.num("moment_tol", v.moment_tol, positive, "must be positive");
        q.num("boundary_tol", v.boundary_tol, positive, "must be positive");
      });
      section(r, "normalform", D.normalform, errs, b, [](Reader& q, NormalFormDiag& v) {
        q.integer("k_min", v.k_min, 1, 30);
        q.integer("k_max", v.k_max, 1, 30);
        if (v.k_max < v.k_min) q.fail("k_max", "must be >= k_min");
        q.num("amplitude", v.amplitude, positive, "must be positive");
        q.nums("amplitudes", v.amplitudes, positive, "must be positive");
        if (v.amplitudes.size() < 2) q.fail("amplitudes", "needs at least two values");
        q.num("nyquist_factor", v.nyquist_factor, nonneg, "must be >= 0");
        q.num("tolerance", v.tolerance, positive, "must be positive");
        q.num("slope_tol", v.slope_tol, positive, "must be positive");
        q.boolean("include_k0", v.include_k0);
      });
      section(r, "decay", D.decay, errs, b, [&errs](Reader& q, DecayDiag& v) {
        q.opt_num("eps", v.eps, positive, "must be positive");
        q.num("fit_t_min", v.fit_t_min, positive, "must be positive");
        q.opt_num("fit_t_max", v.fit_t_max, positive, "must be positive");
        if (v.fit_t_max && *v.fit_t_max <= v.fit_t_min) q.fail("fit_t_max", "must exceed fit_t_min");
        q.num("ratio_limit", v.ratio_limit, positive, "must be positive");
        q.num("exponent", v.exponent);
        q.num("exponent_tol", v.exponent_tol, positive, "must be positive");
        q.integer("log_samples", v.log_samples, 0, 100000);
        if (v.log_samples == 1) q.fail("log_samples", "must be 0 or >= 2");
        section(q, "soliton_control", v.soliton_control, errs, "diagnostics.decay",
                [](Reader& s, SolitonControl& w) {
                  s.num("c", w.c, positive, "must be positive");
                  s.num("exponent", w.exponent);
                  s.num("tolerance", w.tolerance, positive, "must be positive");
                });
      });
      section(r, "pointwise", D.pointwise, errs, b, [](Reader& q, PointwiseDiag& v) {
        q.integer("samples", v.samples, 1, 100000);
        q.nums("times", v.times, positive, "must be positive");
        q.num("eps", v.eps, positive, "must be positive");
        q.num("max_constant", v.max_constant, positive, "must be positive");
        q.num("boundary_tol", v.boundary_tol, positive, "must be positive");
      });
      section(r, "envelope", D.envelope, errs, b, [](Reader& q, EnvelopeDiag& v) {
        q.num("delta", v.delta, positive, "must be positive");
        q.num("floor", v.floor, nonneg, "must be >= 0");
      });
      section(r, "bilinear", D.bilinear, errs, b, [](Reader& q, BilinearDiag& v) {
        q.integer("band_min", v.band_min, 0, 30);
        q.integer("band_max", v.band_max, 0, 30);
        q.integer("min_gap", v.min_gap, 3, 30);
        if (v.band_max < v.band_min + v.min_gap) q.fail("band_max", "leaves no separated band pair");
        q.num("packet_width", v.packet_width, positive, "must be positive");
        q.num("carrier", v.carrier, positive, "must be positive");
        q.integer("shifts", v.shifts, 1, 100000);
        q.num("shift_span", v.shift_span, nonneg, "must be >= 0");
        q.num("window", v.window, positive, "must be positive");
        q.integer("time_samples", v.time_samples, 1, 1000000);
        q.num("max_ratio", v.max_ratio, positive, "must be positive");
        q.num("band_factor", v.band_factor, unit_open, "must be in (0, 1)");
        q.num("band_factor_tol", v.band_factor_tol, unit_open, "must be in (0, 1)");
      });
      section(r, "convergence", D.convergence, errs, b, [](Reader& q, ConvergenceDiag& v) {
        q.ints("n_list", v.n_list, 0, 40);
        if (v.n_list.size() < 2) q.fail("n_list", "needs at least two levels");
        q.num("slope", v.slope);
        q.num("slope_tol", v.slope_tol, positive, "must be positive");
        q.boolean("require_monotone", v.require_monotone);
      });
      section(r, "soliton", D.soliton, errs, b, [](Reader& q, SolitonDiag& v) {
        q.num("residual_tol", v.residual_tol, positive, "must be positive");
        q.num("shape_tol", v.shape_tol, positive, "must be positive");
        q.num("speed_tol", v.speed_tol, positive, "must be positive");
      });
    }

    if (const json* o = root.sub("output")) {
      Reader r(o, "output", errs);
      r.str("directory", c.output.directory);
      if (c.output.directory.empty()) r.fail("directory", "must not be empty");
      r.strs("formats", c.output.formats, {"csv", "json", "bof"});
    }

    if (root.has("seed")) {
      const json& s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        root.fail("seed", "must be a non-negative integer");
      else
        c.seed = s.get<std::uint64_t>();
    }
  }
  if (!errs.empty()) {
    std::string msg;
    for (const auto& e : errs) msg += (msg.empty() ? "" : "\n") + e;
    throw ConfigError(msg);
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_canonical(const ScenarioConfig& c) {
  ojson j;
  ojson g;
  g["n_points"] = c.grid.n_points;
  if (c.grid.length_pi)
    g["length_pi"] = *c.grid.length_pi;
  else
    g["length"] = c.grid.length;
  j["grid"] = g;
  if (c.initial_data) {
    const auto& d = *c.initial_data;
    ojson o;
    o["kind"] = d.kind;
    o["amplitude"] = d.amplitude;
    o["width"] = d.width;
    o["x0"] = d.x0;
    o["c"] = d.c;
    if (d.eps) o["eps"] = *d.eps;
    o["normalize"] = d.normalize;
    o["band"] = d.band;
    if (!d.path.empty()) o["path"] = d.path;
    j["initial_data"] = o;
  }
  j["integrator"] = {{"name", c.integrator.name},
                     {"dt", c.integrator.dt},
                     {"t_end", c.integrator.t_end},
                     {"snapshot_cadence", c.integrator.snapshot_cadence},
                     {"enforce_dt_max", c.integrator.enforce_dt_max}};
  ojson d = ojson::object();
  const auto& D = c.diagnostics;
  if (D.conservation)
    d["conservation"] = {{"boundary_tol", D.conservation->boundary_tol},
                         {"max_drift", D.conservation->max_drift}};
  if (D.identity) {
    const auto& v = *D.identity;
    d["identity"] = {{"tests", v.tests},         {"samples", v.samples},
                     {"times", v.times},         {"eps", v.eps},
                     {"band", v.band},           {"scaling_tol", v.scaling_tol},
                     {"hilbert_tol", v.hilbert_tol}, {"moment_tol", v.moment_tol},
                     {"boundary_tol", v.boundary_tol}};
  }
  if (D.normalform) {
    const auto& v = *D.normalform;
    d["normalform"] = {{"k_min", v.k_min},         {"k_max", v.k_max},
                       {"amplitude", v.amplitude}, {"amplitudes", v.amplitudes},
                       {"nyquist_factor", v.nyquist_factor}, {"tolerance", v.tolerance},
                       {"slope_tol", v.slope_tol}, {"include_k0", v.include_k0}};
  }
  if (D.decay) {
    const auto& v = *D.decay;
    ojson o;
    if (v.eps) o["eps"] = *v.eps;
    o["fit_t_min"] = v.fit_t_min;
    if (v.fit_t_max) o["fit_t_max"] = *v.fit_t_max;
    o["ratio_limit"] = v.ratio_limit;
    o["exponent"] = v.exponent;
    o["exponent_tol"] = v.exponent_tol;
    o["log_samples"] = v.log_samples;
    if (v.soliton_control)
      o["soliton_control"] = {{"c", v.soliton_control->c},
                              {"exponent", v.soliton_control->exponent},
                              {"tolerance", v.soliton_control->tolerance}};
    d["decay"] = o;
  }
  if (D.pointwise) {
    const auto& v = *D.pointwise;
    d["pointwise"] = {{"samples", v.samples}, {"times", v.times}, {"eps", v.eps},
                      {"max_constant", v.max_constant}, {"boundary_tol", v.boundary_tol}};
  }
  if (D.envelope) d["envelope"] = {{"delta", D.envelope->delta}, {"floor", D.envelope->floor}};
  if (D.bilinear) {
    const auto& v = *D.bilinear;
    d["bilinear"] = {{"band_min", v.band_min},         {"band_max", v.band_max},
                     {"min_gap", v.min_gap},           {"packet_width", v.packet_width},
                     {"carrier", v.carrier},           {"shifts", v.shifts},
                     {"shift_span", v.shift_span},     {"window", v.window},
                     {"time_samples", v.time_samples}, {"max_ratio", v.max_ratio},
                     {"band_factor", v.band_factor},   {"band_factor_tol", v.band_factor_tol}};
  }
  if (D.convergence) {
    const auto& v = *D.convergence;
    d["convergence"] = {{"n_list", v.n_list}, {"slope", v.slope}, {"slope_tol", v.slope_tol},
                        {"require_monotone", v.require_monotone}};
  }
  if (D.soliton)
    d["soliton"] = {{"residual_tol", D.soliton->residual_tol},
                    {"shape_tol", D.soliton->shape_tol},
                    {"speed_tol", D.soliton->speed_tol}};
  j["diagnostics"] = d;
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"simulate", "linear",      "conservation",
                                          "normalform", "decay",     "envelope",
                                          "bilinear", "convergence", "identity"};
  return s;
}

}  // namespace bolab
