#pragma once

// File formats. Complex numbers are [re, im] pairs; every floating value is
// written with 17 significant digits (exact round trip for doubles).
//
//   state:   {"dim": int, "amps": [[re, im], ...]}
//   herald:  {"theta_half", "r", "mu": [re, im], "phi", "varphi", "detection": "h"|"v"}
//   plan:    {"coeffs": [[re, im], ...], "steps": [{"mu": [..], "nu": [..]}, ...],
//             "scale": [re, im], "predicted_probability": real}
//   grid:    CSV "x,p,w" in row-major order, or JSON mirroring PhaseSpaceGrid
//   params:  ExperimentParams fields in SI units (missing keys keep defaults)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "phononforge/channels.hpp"
#include "phononforge/feasibility.hpp"
#include "phononforge/fock.hpp"
#include "phononforge/transform.hpp"
#include "phononforge/wigner.hpp"

namespace phononforge::io {

using json = nlohmann::json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericalError("cannot serialize non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace detail {

inline void dump(const json& j, std::string& out, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays such as [re, im] stay on one line.
      const bool flat = j.size() <= 2 && !j[0].is_structured();
      out += flat ? "[" : std::string("[") + nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : std::string(",") + nl;
        first = false;
        if (!flat) out += pad;
        dump(v, out, indent, depth + 1);
      }
      out += flat ? "]" : std::string(nl) + pad_close + "]";
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += std::string("{") + nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      out += std::string(nl) + pad_close + "}";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// nlohmann-compatible JSON text with 17-significant-digit floats.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  out += "\n";
  return out;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(what + ": malformed JSON (" + e.what() + ")");
  }
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgument(what + ": complex values must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace detail {

inline double number(const json& obj, const char* key, double fallback, const std::string& what) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw InvalidArgument(what + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

inline void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw InvalidArgument(what + ": expected a JSON object");
}

}  // namespace detail

// --- state -----------------------------------------------------------------

inline json to_json(const PureState& s) {
  json amps = json::array();
  for (std::size_t n = 0; n < s.dim(); ++n) amps.push_back(complex_to_json(s[n]));
  return {{"dim", s.dim()}, {"amps", std::move(amps)}};
}

inline PureState state_from_json(const json& j) {
  detail::require_object(j, "state");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw InvalidArgument("state: 'dim' must be a positive integer");
  }
  if (!j.contains("amps") || !j["amps"].is_array()) throw InvalidArgument("state: 'amps' must be an array");
  const auto dim = j["dim"].get<std::size_t>();
  if (j["amps"].size() != dim) throw InvalidArgument("state: amps length differs from dim");
  CVector v(static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < dim; ++n) v[static_cast<Eigen::Index>(n)] = complex_from_json(j["amps"][n], "state");
  return PureState(std::move(v));
}

// --- herald spec -----------------------------------------------------------

inline json to_json(const HeraldSpec& s) {
  return {{"theta_half", s.theta_half},
          {"r", s.r},
          {"mu", complex_to_json(s.mu)},
          {"phi", s.phi},
          {"varphi", s.varphi},
          {"detection", s.detection == Detection::h ? "h" : "v"}};
}

inline HeraldSpec herald_from_json(const json& j) {
  const std::string what = "herald spec";
  detail::require_object(j, what);
  HeraldSpec s;
  s.theta_half = detail::number(j, "theta_half", 0.0, what);
  s.r = detail::number(j, "r", 0.0, what);
  if (j.contains("mu")) s.mu = complex_from_json(j["mu"], what);
  s.phi = detail::number(j, "phi", 0.0, what);
  s.varphi = detail::number(j, "varphi", 0.0, what);
  if (j.contains("detection")) {
    const auto d = j["detection"];
    if (d == "h") s.detection = Detection::h;
    else if (d == "v") s.detection = Detection::v;
    else throw InvalidArgument(what + ": detection must be \"h\" or \"v\"");
  }
  return s;
}

// --- plan ------------------------------------------------------------------

inline json to_json(const TransformPlan& p) {
  json coeffs = json::array();
  for (auto c : p.coeffs) coeffs.push_back(complex_to_json(c));
  json steps = json::array();
  for (const auto& s : p.steps) steps.push_back({{"mu", complex_to_json(s.mu)}, {"nu", complex_to_json(s.nu)}});
  return {{"coeffs", std::move(coeffs)},
          {"steps", std::move(steps)},
          {"scale", complex_to_json(p.scale)},
          {"predicted_probability", p.predicted_probability}};
}

inline TransformPlan plan_from_json(const json& j) {
  const std::string what = "plan";
  detail::require_object(j, what);
  TransformPlan p;
  if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty()) {
    throw InvalidArgument(what + ": 'coeffs' must be a non-empty array");
  }
  for (const auto& c : j["coeffs"]) p.coeffs.push_back(complex_from_json(c, what));
  if (!j.contains("steps") || !j["steps"].is_array()) throw InvalidArgument(what + ": 'steps' must be an array");
  for (const auto& s : j["steps"]) {
    if (!s.is_object() || !s.contains("mu") || !s.contains("nu")) throw InvalidArgument(what + ": bad step");
    p.steps.push_back({complex_from_json(s["mu"], what), complex_from_json(s["nu"], what)});
  }
  if (j.contains("scale")) p.scale = complex_from_json(j["scale"], what);
  p.predicted_probability = detail::number(j, "predicted_probability", 0.0, what);
  p.degree = 0;
  for (const auto& s : p.steps) {
    if (s.nu != cplx{}) ++p.degree;
  }
  return p;
}

inline json to_json(const ExecutionTrace& t) {
  json steps = json::array();
  for (const auto& s : t.per_step) steps.push_back({{"probability", s.probability}, {"state", to_json(s.state)}});
  json out = {{"per_step", std::move(steps)}, {"total_probability", t.total_probability}};
  if (t.final_fidelity) out["final_fidelity"] = *t.final_fidelity;
  return out;
}

// --- grid ------------------------------------------------------------------

inline std::string grid_to_csv(const PhaseSpaceGrid& g) {
  std::string out = "x,p,w\n";
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    for (std::size_t j = 0; j < g.ps.size(); ++j) {
      out += format_double(g.xs[i]) + "," + format_double(g.ps[j]) + "," + format_double(g.at(i, j)) + "\n";
    }
  }
  return out;
}

inline json to_json(const PhaseSpaceGrid& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"p_min", g.p_min}, {"p_max", g.p_max},
          {"step", g.step},   {"xs", g.xs},       {"ps", g.ps},       {"values", g.values}};
}

// --- feasibility -----------------------------------------------------------

inline ExperimentParams params_from_json(const json& j) {
  const std::string what = "params";
  detail::require_object(j, what);
  static const char* known[] = {"wavelength", "cavity_length", "finesse",      "mech_freq",
                                "eff_mass",   "quality",       "bath_temp",    "pulse_power",
                                "pulse_periods", "detuning_sign", "visibility", "filter_kappa"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw InvalidArgument(what + ": unknown key '" + it.key() + "'");
    }
  }
  ExperimentParams p;
  p.wavelength = detail::number(j, "wavelength", p.wavelength, what);
  p.cavity_length = detail::number(j, "cavity_length", p.cavity_length, what);
  p.finesse = detail::number(j, "finesse", p.finesse, what);
  p.mech_freq = detail::number(j, "mech_freq", p.mech_freq, what);
  p.eff_mass = detail::number(j, "eff_mass", p.eff_mass, what);
  p.quality = detail::number(j, "quality", p.quality, what);
  p.bath_temp = detail::number(j, "bath_temp", p.bath_temp, what);
  p.pulse_power = detail::number(j, "pulse_power", p.pulse_power, what);
  p.pulse_periods = detail::number(j, "pulse_periods", p.pulse_periods, what);
  p.visibility = detail::number(j, "visibility", p.visibility, what);
  p.filter_kappa = detail::number(j, "filter_kappa", p.filter_kappa, what);
  if (j.contains("detuning_sign")) {
    const auto d = j["detuning_sign"];
    if (d == "red") p.detuning_sign = DetuningSign::red;
    else if (d == "blue") p.detuning_sign = DetuningSign::blue;
    else throw InvalidArgument(what + ": detuning_sign must be \"red\" or \"blue\"");
  }
  validate(p);
  return p;
}

inline json to_json(const ExperimentParams& p) {
  return {{"wavelength", p.wavelength},     {"cavity_length", p.cavity_length},
          {"finesse", p.finesse},           {"mech_freq", p.mech_freq},
          {"eff_mass", p.eff_mass},         {"quality", p.quality},
          {"bath_temp", p.bath_temp},       {"pulse_power", p.pulse_power},
          {"pulse_periods", p.pulse_periods},
          {"detuning_sign", p.detuning_sign == DetuningSign::red ? "red" : "blue"},
          {"visibility", p.visibility},     {"filter_kappa", p.filter_kappa}};
}

inline json to_json(const DerivedParams& d) {
  return {{"kappa", d.kappa},
          {"fsr", d.fsr},
          {"x_zpf", d.x_zpf},
          {"g0", d.g0},
          {"tau", d.tau},
          {"photon_number", d.photon_number},
          {"alpha_sq", d.alpha_sq},
          {"G", d.G},
          {"theta_half", d.theta_half},
          {"r", d.r},
          {"beta", d.beta},
          {"n_bar", d.n_bar},
          {"xi", d.xi},
          {"sideband_resolution", d.sideband_resolution},
          {"warnings", d.warnings}};
}

inline json to_json(const FilterBudget& f) {
  return {{"interferometric_residual", f.interferometric_residual},
          {"interferometric_suppression", f.interferometric_suppression},
          {"filter_transmission", f.filter_transmission},
          {"drive_to_sideband_ratio", f.drive_to_sideband_ratio},
          {"residual_drive_photons", f.residual_drive_photons}};
}

// --- convenience -----------------------------------------------------------

inline PureState read_state(const std::string& path) { return state_from_json(parse(read_text(path), path)); }
inline void write_state(const std::string& path, const PureState& s) { write_text(path, dump(to_json(s))); }

}  // namespace phononforge::io
