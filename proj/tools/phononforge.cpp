#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "phononforge/channels.hpp"
#include "phononforge/feasibility.hpp"
#include "phononforge/fock.hpp"
#include "phononforge/io.hpp"
#include "phononforge/realizations.hpp"
#include "phononforge/repro.hpp"
#include "phononforge/transform.hpp"
#include "phononforge/wigner.hpp"

namespace pf = phononforge;
namespace io = phononforge::io;

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

void log_line(const char* level, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string line = level;
  for (const auto& [k, v] : kv) line += " " + k + "=" + v;
  std::cerr << line << '\n';
}

std::string num(double v) { return io::format_double(v); }

void warn_all(const std::vector<std::string>& warnings, const char* source) {
  for (const auto& w : warnings) log_line("WARN", {{"source", source}, {"message", quoted(w)}});
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    io::write_text(out, text);
  }
}

void check_readable(const std::string& path) {
  if (path.empty()) return;
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw pf::IoError("cannot open " + path + " for reading");
  std::fclose(f);
}

void check_writable_dir(const std::string& path) {
  if (path.empty() || path == "-") return;
  const auto slash = path.find_last_of('/');
  const std::string dir = slash == std::string::npos ? "." : (slash == 0 ? "/" : path.substr(0, slash));
  std::FILE* probe = std::fopen((dir + "/.").c_str(), "r");
  if (probe == nullptr) throw pf::IoError("output directory " + dir + " does not exist");
  std::fclose(probe);
}

pf::cplx parse_complex(const std::vector<double>& v, const char* what) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return {v[0], v[1]};
  throw pf::InvalidArgument(std::string(what) + " takes one or two numbers (re [im])");
}

struct StateArgs {
  std::optional<std::size_t> fock;
  std::vector<double> coherent;
  double squeeze = 0.0;
  double squeeze_angle = 0.0;
  std::size_t dim = 0;
  std::string out;
};

int run_state(const StateArgs& a) {
  check_writable_dir(a.out);
  if (a.dim == 0) throw pf::InvalidArgument("state: --dim must be >= 1");
  pf::PureState s = pf::PureState::fock(0, a.dim);
  if (a.fock) {
    if (!a.coherent.empty() || a.squeeze != 0.0) throw pf::InvalidArgument("state: --fock excludes --coherent/--squeeze");
    s = pf::PureState::fock(*a.fock, a.dim);
  } else {
    const pf::GaussianSpec g{parse_complex(a.coherent, "--coherent"), a.squeeze, a.squeeze_angle};
    s = pf::gaussian_state(g, a.dim);
    log_line("INFO", {{"event", "gaussian"}, {"leakage", num(pf::gaussian_leakage(g, a.dim))}});
  }
  emit(a.out, io::dump(io::to_json(s)));
  return 0;
}

struct OrthArgs {
  std::string input;
  std::string out;
  double r = 0.1;
  std::string mode = "quadrature";
};

int run_orthogonalize(const OrthArgs& a) {
  check_readable(a.input);
  check_writable_dir(a.out);
  const pf::PureState psi = io::read_state(a.input);
  pf::HeraldOutcome res{psi, 1.0};
  if (a.mode == "quadrature") {
    const pf::MeanAngle m = pf::mean_angle(psi);
    if (m.degenerate) log_line("INFO", {{"event", "zero_mean"}, {"angle", "0"}});
    res = pf::apply_herald(psi, pf::orthogonalizer_spec(psi, a.r));
  } else if (a.mode == "sub" || a.mode == "add") {
    res = pf::displaced_ladder_orthogonalize(psi, a.mode == "sub" ? pf::Ladder::sub : pf::Ladder::add);
  } else {
    throw pf::InvalidArgument("orthogonalize: --mode must be quadrature, sub or add");
  }
  log_line("INFO", {{"event", "heralded"},
                    {"probability", num(res.probability)},
                    {"overlap_with_input", num(std::abs(pf::overlap(psi, res.state)))}});
  emit(a.out, io::dump(io::to_json(res.state)));
  return 0;
}

struct QubitArgs {
  std::string input;
  std::string out;
  std::vector<double> mu{0.1};
  double r = 0.1;
};

int run_qubit(const QubitArgs& a) {
  check_readable(a.input);
  check_writable_dir(a.out);
  const pf::PureState psi = io::read_state(a.input);
  const pf::HeraldOutcome res = pf::qubit_synthesis(psi, parse_complex(a.mu, "--mu"), a.r);
  log_line("INFO", {{"event", "heralded"},
                    {"probability", num(res.probability)},
                    {"overlap_with_input", num(std::abs(pf::overlap(psi, res.state)))}});
  emit(a.out, io::dump(io::to_json(res.state)));
  return 0;
}

struct HeraldArgs {
  std::string input;
  std::string spec;
  std::string out;
};

int run_herald(const HeraldArgs& a) {
  check_readable(a.input);
  check_readable(a.spec);
  check_writable_dir(a.out);
  const pf::PureState psi = io::read_state(a.input);
  const pf::HeraldSpec spec = io::herald_from_json(io::parse(io::read_text(a.spec), a.spec));
  warn_all(pf::validate(spec), "herald");
  const pf::HeraldOutcome res = pf::apply_herald(psi, spec);
  log_line("INFO", {{"event", "heralded"}, {"probability", num(res.probability)}});
  emit(a.out, io::dump(io::to_json(res.state)));
  return 0;
}

struct TransformArgs {
  std::string input;
  std::string target;
  std::string out;
  std::string trace;
  std::uint64_t seed = 0;
  std::string normalization = "unit-identity";
  std::size_t pad_to = 0;
  bool match = false;
};

int run_transform(const TransformArgs& a) {
  check_readable(a.input);
  check_readable(a.target);
  check_writable_dir(a.out);
  check_writable_dir(a.trace);
  pf::PureState psi = io::read_state(a.input);
  const pf::PureState phi = io::read_state(a.target);
  pf::FactorOptions opt;
  opt.seed = a.seed;
  opt.pad_to = a.pad_to;
  if (a.normalization == "unit-identity") {
    opt.normalization = pf::StepNormalization::unit_identity;
  } else if (a.normalization == "unit-max") {
    opt.normalization = pf::StepNormalization::unit_max;
  } else {
    throw pf::InvalidArgument("transform: --normalization must be unit-identity or unit-max");
  }
  if (a.match) {
    const pf::DimensionMatch m = pf::dimension_match(psi, phi.dim());
    std::string ops;
    for (auto op : m.operations) ops += op == pf::Ladder::add ? "a" : "s";
    log_line("INFO", {{"event", "dimension_match"}, {"operations", ops.empty() ? "none" : ops}});
    psi = m.state;
  }
  const pf::TransformPlan plan = pf::plan_transformation(psi, phi, opt);
  log_line("INFO", {{"event", "plan"},
                    {"degree", std::to_string(plan.degree)},
                    {"steps", std::to_string(plan.steps.size())},
                    {"expansion_error", num(pf::expansion_error(plan))},
                    {"predicted_probability", num(plan.predicted_probability)}});
  emit(a.out, io::dump(io::to_json(plan)));
  if (!a.trace.empty()) {
    const pf::ExecutionTrace t = pf::execute_plan(psi, plan, phi);
    log_line("INFO", {{"event", "executed"},
                      {"total_probability", num(t.total_probability)},
                      {"fidelity", num(*t.final_fidelity)}});
    io::write_text(a.trace, io::dump(io::to_json(t)));
  }
  return 0;
}

struct WignerArgs {
  std::string input;
  std::string out;
  std::optional<double> bounds;
  std::vector<double> x_range;
  std::vector<double> p_range;
  double step = 0.05;
  std::string format;
};

int run_wigner(const WignerArgs& a) {
  check_readable(a.input);
  check_writable_dir(a.out);
  const pf::PureState psi = io::read_state(a.input);
  pf::GridSpec spec = pf::GridSpec::square(a.bounds.value_or(6.0), a.step);
  if (!a.x_range.empty()) {
    spec.x_min = a.x_range.at(0);
    spec.x_max = a.x_range.at(1);
  }
  if (!a.p_range.empty()) {
    spec.p_min = a.p_range.at(0);
    spec.p_max = a.p_range.at(1);
  }
  const pf::PhaseSpaceGrid g = pf::wigner_grid(psi, spec);
  double lo = g.values.front();
  for (double v : g.values) lo = std::min(lo, v);
  log_line("INFO", {{"event", "grid"},
                    {"points", std::to_string(g.values.size())},
                    {"integral", num(pf::grid_integral(g))},
                    {"min", num(lo)}});
  std::string format = a.format;
  if (format.empty()) format = a.out.size() > 5 && a.out.substr(a.out.size() - 5) == ".json" ? "json" : "csv";
  if (format == "json") {
    emit(a.out, io::dump(io::to_json(g)));
  } else if (format == "csv") {
    emit(a.out, io::grid_to_csv(g));
  } else {
    throw pf::InvalidArgument("wigner: --format must be csv or json");
  }
  return 0;
}

std::string table_row(const std::string& name, double v, const char* unit) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-26s %-24.10g %s\n", name.c_str(), v, unit);
  return buf;
}

struct FeasibilityArgs {
  std::string params;
  std::string out;
};

int run_feasibility(const FeasibilityArgs& a) {
  check_readable(a.params);
  check_writable_dir(a.out);
  const pf::ExperimentParams p =
      a.params.empty() ? pf::ExperimentParams{} : io::params_from_json(io::parse(io::read_text(a.params), a.params));
  const pf::DerivedParams d = pf::derive(p);
  const pf::FilterBudget f = pf::filter_budget(p, p.mech_freq);
  warn_all(d.warnings, "feasibility");

  std::string t;
  t += table_row("kappa", d.kappa, "rad/s");
  t += table_row("omega_M/kappa", d.sideband_resolution, "");
  t += table_row("g0", d.g0, "rad/s");
  t += table_row("x_zpf", d.x_zpf, "m");
  t += table_row("tau", d.tau, "s");
  t += table_row("photons per pulse", d.photon_number, "");
  t += table_row("|alpha|^2", d.alpha_sq, "s");
  t += table_row("G", d.G, "1/s");
  t += table_row("theta/2", d.theta_half, "");
  t += table_row("r", d.r, "");
  t += table_row("r^2 (paper: 0.01)", d.r * d.r, "informational");
  t += table_row("beta", d.beta, "");
  t += table_row("n_bar", d.n_bar, "");
  t += table_row("xi", d.xi, "");
  t += table_row("drive suppression", f.interferometric_suppression, "");
  t += table_row("filter transmission", f.filter_transmission, "");
  t += table_row("residual drive photons", f.residual_drive_photons, "");
  std::cout << t;

  if (!a.out.empty()) {
    io::json j = io::to_json(d);
    j["params"] = io::to_json(p);
    j["filter"] = io::to_json(f);
    io::write_text(a.out, io::dump(j));
  }
  return 0;
}

io::json convergence_json(const pf::ConvergenceReport& r) {
  io::json rows = io::json::array();
  for (std::size_t i = 0; i < r.eps.size(); ++i) rows.push_back({{"eps", r.eps[i]}, {"residual", r.residuals[i]}});
  return {{"points", rows}, {"slope", r.slope}};
}

struct RealizationArgs {
  std::string out;
  std::size_t jc_dim = 10;
  std::size_t optical_dim = 3;
  std::size_t mech_dim = 8;
  std::vector<double> qubit{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
};

int run_realization_check(const RealizationArgs& a) {
  check_writable_dir(a.out);
  if (a.qubit.size() != 2) throw pf::InvalidArgument("realization-check: --qubit takes A B");
  const std::vector<double> eps(std::begin(pf::repro::kConvergenceEps), std::end(pf::repro::kConvergenceEps));
  const pf::ConvergenceReport jc = pf::jc_convergence({a.qubit[0], a.qubit[1]}, a.jc_dim, eps);
  const pf::ConvergenceReport h =
      pf::optomech_convergence(pf::repro::unit_shape(), a.optical_dim, a.mech_dim, eps, pf::OpticalPort::h);
  const pf::ConvergenceReport v =
      pf::optomech_convergence(pf::repro::unit_shape(), a.optical_dim, a.mech_dim, eps, pf::OpticalPort::v);
  for (const auto& [name, rep] : {std::pair{"jc", &jc}, std::pair{"optomech_h", &h}, std::pair{"optomech_v", &v}}) {
    log_line("INFO", {{"map", name}, {"slope", num(rep->slope)}});
  }
  const io::json j = {{"jc", convergence_json(jc)}, {"optomech_h", convergence_json(h)}, {"optomech_v", convergence_json(v)}};
  emit(a.out, io::dump(j));
  return 0;
}

struct ReproArgs {
  std::string out;
};

int run_repro(const ReproArgs& a) {
  check_writable_dir(a.out);
  const pf::repro::Report rep = pf::repro::repro_report();
  for (const auto& row : rep.rows) std::cout << pf::repro::format_row(row) << '\n';
  std::cout << "pass=" << rep.count(pf::repro::Status::pass) << " fail=" << rep.count(pf::repro::Status::fail)
            << " info=" << rep.count(pf::repro::Status::info) << " tol_scale=" << num(rep.tol_scale) << '\n';
  if (!a.out.empty()) io::write_text(a.out, io::dump(pf::repro::to_json(rep)));
  return 0;
}

int report_error(const char* kind, const std::exception& e, int code) {
  log_line("ERROR", {{"kind", kind}, {"exit", std::to_string(code)}, {"message", quoted(e.what())}});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phononforge: heralded phonon state engineering"};
  app.require_subcommand(1);

  StateArgs state;
  auto* s = app.add_subcommand("state", "write a Fock or displaced squeezed state");
  s->add_option("--fock", state.fock, "Fock level n");
  s->add_option("--coherent", state.coherent, "displacement alpha: re [im]")->expected(1, 2);
  s->add_option("--squeeze", state.squeeze, "squeeze magnitude");
  s->add_option("--squeeze-angle", state.squeeze_angle, "squeeze angle");
  s->add_option("--dim", state.dim, "Fock dimension")->required();
  s->add_option("--out,-o", state.out, "output state JSON (default stdout)");

  OrthArgs orth;
  auto* o = app.add_subcommand("orthogonalize", "herald the quadrature orthogonalizer (or a displaced ladder op)");
  o->add_option("--input,-i", orth.input)->required();
  o->add_option("--out,-o", orth.out);
  o->add_option("--r", orth.r, "heralding strength");
  o->add_option("--mode", orth.mode, "quadrature | sub | add");

  QubitArgs qubit;
  auto* q = app.add_subcommand("qubit", "apply mu/sqrt2 + orthogonalizer");
  q->add_option("--input,-i", qubit.input)->required();
  q->add_option("--out,-o", qubit.out);
  q->add_option("--mu", qubit.mu, "identity weight: re [im]")->expected(1, 2);
  q->add_option("--r", qubit.r, "heralding strength");

  HeraldArgs herald;
  auto* h = app.add_subcommand("herald", "apply a heralding spec");
  h->add_option("--input,-i", herald.input)->required();
  h->add_option("--spec", herald.spec, "HeraldSpec JSON")->required();
  h->add_option("--out,-o", herald.out);

  TransformArgs tr;
  auto* t = app.add_subcommand("transform", "plan a psi -> phi transformation");
  t->add_option("--input,-i", tr.input)->required();
  t->add_option("--target", tr.target)->required();
  t->add_option("--out,-o", tr.out);
  t->add_option("--trace", tr.trace, "also execute the plan and write the trace JSON");
  t->add_option("--seed", tr.seed, "root-finder seed");
  t->add_option("--normalization", tr.normalization, "unit-identity | unit-max");
  t->add_option("--pad-to", tr.pad_to, "pad with identity steps up to this count");
  t->add_flag("--match", tr.match, "first raise/lower psi so its top level matches the target");

  WignerArgs wg;
  auto* w = app.add_subcommand("wigner", "Wigner function on a grid");
  w->add_option("--input,-i", wg.input)->required();
  w->add_option("--out,-o", wg.out);
  w->add_option("--bounds", wg.bounds, "square grid [-b, b]^2");
  w->add_option("--x-range", wg.x_range, "x_min x_max")->expected(2);
  w->add_option("--p-range", wg.p_range, "p_min p_max")->expected(2);
  w->add_option("--step", wg.step);
  w->add_option("--format", wg.format, "csv | json (default from extension)");

  FeasibilityArgs fe;
  auto* f = app.add_subcommand("feasibility", "derived parameters for an optomechanical setup");
  f->add_option("--params", fe.params, "params JSON (defaults to the reference set)");
  f->add_option("--out,-o", fe.out, "report JSON");

  RealizationArgs re;
  auto* r = app.add_subcommand("realization-check", "compare exact realizations with the ideal operators");
  r->add_option("--out,-o", re.out);
  r->add_option("--jc-dim", re.jc_dim);
  r->add_option("--optical-dim", re.optical_dim);
  r->add_option("--mech-dim", re.mech_dim);
  r->add_option("--qubit", re.qubit, "A B")->expected(2);

  ReproArgs rp;
  auto* rr = app.add_subcommand("repro", "run every acceptance check and print the table");
  rr->add_option("--out,-o", rp.out, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s) return run_state(state);
    if (*o) return run_orthogonalize(orth);
    if (*q) return run_qubit(qubit);
    if (*h) return run_herald(herald);
    if (*t) return run_transform(tr);
    if (*w) return run_wigner(wg);
    if (*f) return run_feasibility(fe);
    if (*r) return run_realization_check(re);
    if (*rr) return run_repro(rp);
  } catch (const pf::InvalidArgument& e) {
    return report_error("invalid_argument", e, 2);
  } catch (const pf::TruncationError& e) {
    log_line("ERROR", {{"kind", "truncation"},
                       {"exit", "3"},
                       {"required_dim", std::to_string(e.required_dim())},
                       {"message", quoted(e.what())}});
    return 3;
  } catch (const pf::HeraldingImpossible& e) {
    return report_error("heralding_impossible", e, 3);
  } catch (const pf::NonConvergence& e) {
    return report_error("non_convergence", e, 3);
  } catch (const pf::NumericalError& e) {
    return report_error("numerical", e, 3);
  } catch (const pf::IoError& e) {
    return report_error("io", e, 4);
  } catch (const std::exception& e) {
    return report_error("internal", e, 3);
  }
  return 2;
}
