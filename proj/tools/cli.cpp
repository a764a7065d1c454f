#include "cli.hpp"

#include "cgeom/error.hpp"
#include "cgeom/gauss.hpp"
#include "cgeom/io.hpp"
#include "cgeom/john.hpp"
#include "cgeom/measures.hpp"
#include "cgeom/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cgeom {

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct Globals {
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string format;
  std::string manifest_path;
};

void add_globals(CLI::App* app, Globals& g) {
  app->add_option("--samples", g.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  app->add_option("--seed", g.seed, "random seed");
  app->add_option("--tol", g.tol, "tolerance")->check(CLI::PositiveNumber);
  app->add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--manifest", g.manifest_path, "also write the run manifest to this file");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) s += ',';
    s += fields[i];
  }
  return s + '\n';
}

const char* flag(bool b) { return b ? "true" : "false"; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unbounded:
    case ErrorCode::Infeasible:
    case ErrorCode::Empty:
    case ErrorCode::NoConvergence:
    case ErrorCode::DecompositionFailed:
    case ErrorCode::NonFinite:
      return kExitViolation;
    default:
      return kExitInput;
  }
}

Json error_object(std::string_view code, const std::string& message) {
  Json e;
  e["code"] = std::string(code);
  e["message"] = message;
  Json j;
  j["error"] = std::move(e);
  return j;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  Globals g;
  std::string command;
  std::vector<std::string> inputs;

  std::string format(const char* fallback = "json") const { return g.format.empty() ? fallback : g.format; }

  MCConfig cfg() const {
    MCConfig c;
    c.samples = g.samples;
    c.seed = g.seed;
    return c;
  }

  Json manifest(const char* fallback = "json") const {
    Json m;
    m["command"] = command;
    m["inputs"] = inputs;
    const MCConfig c = cfg();
    m["cfg"] = {{"samples", c.samples}, {"seed", c.seed}, {"batch", c.batch}};
    m["tolerances"] = {{"tol", g.tol}, {"sigmas", 3.0}};
    m["output_format"] = format(fallback);
    return m;
  }

  Json load(const std::string& path) {
    inputs.push_back(path);
    return read_json_file(path);
  }

  void emit_json(Json body, const char* fallback = "json") {
    body["manifest"] = manifest(fallback);
    out_ << dump_json(body) << '\n';
  }

  void finish(const char* fallback = "json") {
    if (g.manifest_path.empty()) return;
    std::ofstream f(g.manifest_path);
    if (!f) throw Error(ErrorCode::InvalidArgument, g.manifest_path + ": cannot write manifest");
    f << dump_json(manifest(fallback)) << '\n';
  }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

Json report_json(const BoundReport& r) {
  Json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["k"] = r.k;
  j["direction"] = r.direction == BoundDirection::Lower ? "lower_bound" : "upper_bound";
  j["lhs"] = r.lhs.value;
  j["stderr"] = r.lhs.std_error;
  j["samples"] = r.lhs.samples;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["holds"] = r.holds;
  j["equality"] = r.equality;
  return j;
}

// ------------------------------------------------------------------ commands

int cmd_check_isotropic(Runner& run, const std::string& file) {
  const DiscreteSphericalMeasure m = measure_from_json(run.load(file));
  const IsotropyReport r = isotropy_check(m);
  const bool ok = r.isotropic(run.g.tol) && r.centered(run.g.tol);
  if (run.format() == "csv") {
    run.out() << csv_line({"frobenius_defect", "centroid_norm", "mass", "isotropic", "centered"});
    run.out() << csv_line({num(r.frobenius_defect), num(r.centroid_norm), num(r.mass),
                           flag(r.isotropic(run.g.tol)), flag(r.centered(run.g.tol))});
  } else {
    Json j;
    j["report"] = {{"frobenius_defect", r.frobenius_defect},
                   {"centroid_norm", r.centroid_norm},
                   {"mass", r.mass},
                   {"isotropic", r.isotropic(run.g.tol)},
                   {"centered", r.centered(run.g.tol)}};
    run.emit_json(std::move(j));
  }
  run.finish();
  return ok ? kExitHolds : kExitViolation;
}

struct VerifyArgs {
  std::string kind;
  std::string measure;
  std::string subspace;
  std::vector<double> f;
  double lambda = 0.0;
  double rmax = 0.0;
  int rsteps = 2000;
};

int cmd_verify(Runner& run, const VerifyArgs& a) {
  const DiscreteSphericalMeasure mu = measure_from_json(run.load(a.measure));

  if (a.kind == "ball-barthe" || a.kind == "lyz-norm") {
    if (!a.subspace.empty()) throw Error(ErrorCode::InvalidArgument, a.kind + " takes no subspace");
    const std::vector<double> f = a.f.empty() ? std::vector<double>(mu.size(), 1.0) : a.f;
    const ScalarCheck r = a.kind == "ball-barthe" ? ball_barthe_check(mu, f) : lyz_norm_check(mu, f);
    if (run.format() == "csv") {
      run.out() << csv_line({"name", "lhs", "rhs", "holds", "equality"});
      run.out() << csv_line({a.kind, num(r.lhs), num(r.rhs), flag(r.holds), flag(r.equality)});
    } else {
      Json j;
      j["report"] = {{"name", a.kind}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds},
                     {"equality", r.equality}};
      run.emit_json(std::move(j));
    }
    run.finish();
    return r.holds ? kExitHolds : kExitViolation;
  }
  if (!a.f.empty()) throw Error(ErrorCode::InvalidArgument, "--f applies only to ball-barthe and lyz-norm");

  const Subspace H = a.subspace.empty() ? Subspace::full(mu.dim()) : subspace_from_json(run.load(a.subspace));

  if (a.kind == "transport") {
    const TransportReport r = transport_bound_check(mu, H, a.lambda, run.cfg(), a.rmax, a.rsteps);
    if (run.format() == "csv") {
      run.out() << csv_line({"n", "k", "lambda", "lhs", "stderr", "rhs", "beta", "beta_from_mu", "holds"});
      run.out() << csv_line({std::to_string(r.n), std::to_string(r.k), num(r.lambda), num(r.lhs.value),
                             num(r.lhs.std_error), num(r.rhs), num(r.beta), num(r.beta_from_mu),
                             flag(r.holds)});
    } else {
      Json j;
      j["report"] = {{"name", "transport"},  {"n", r.n},
                     {"k", r.k},             {"lambda", r.lambda},
                     {"lhs", r.lhs.value},   {"stderr", r.lhs.std_error},
                     {"samples", r.lhs.samples}, {"rhs", r.rhs},
                     {"beta", r.beta},       {"beta_from_mu", r.beta_from_mu},
                     {"r_max", r.r_max},     {"r_steps", r.r_steps},
                     {"holds", r.holds}};
      run.emit_json(std::move(j));
    }
    run.finish();
    return r.holds ? kExitHolds : kExitViolation;
  }

  const auto kind = parse_sweep_kind(a.kind);
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown verify kind '" + a.kind + "'");
  const BoundReport r = run_check(*kind, mu, H, run.cfg());
  if (run.format() == "csv") {
    run.out() << csv_line({"name", "n", "k", "lhs", "stderr", "rhs", "margin", "holds", "equality"});
    run.out() << csv_line({r.name, std::to_string(r.n), std::to_string(r.k), num(r.lhs.value),
                           num(r.lhs.std_error), num(r.rhs), num(r.margin), flag(r.holds),
                           flag(r.equality)});
  } else {
    Json j;
    j["report"] = report_json(r);
    run.emit_json(std::move(j));
  }
  run.finish();
  return r.holds ? kExitHolds : kExitViolation;
}

struct SweepArgs {
  std::string kind;
  int n_min = 2;
  int n_max = 6;
  int count = 1;
  std::string k_policy = "random";
  int subspaces = 3;
};

int cmd_sweep(Runner& run, const SweepArgs& a) {
  const auto kind = parse_sweep_kind(a.kind);
  if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown sweep kind '" + a.kind + "'");
  SweepOptions o;
  o.kind = *kind;
  o.n_min = a.n_min;
  o.n_max = a.n_max;
  o.count = a.count;
  o.seed = run.g.seed;
  o.all_k = a.k_policy == "all";
  o.subspaces = a.subspaces;
  o.samples = run.g.samples;
  const std::vector<SweepRow> rows = run_sweep(o);
  bool all = true;
  for (const SweepRow& r : rows) all = all && r.report.holds;

  if (run.format("csv") == "csv") {
    run.out() << csv_line({"seed", "n", "k", "m_atoms", "lhs", "stderr", "rhs", "margin", "holds", "equality"});
    for (const SweepRow& r : rows) {
      const BoundReport& b = r.report;
      run.out() << csv_line({std::to_string(r.seed), std::to_string(b.n), std::to_string(b.k),
                             std::to_string(r.m_atoms), num(b.lhs.value), num(b.lhs.std_error),
                             num(b.rhs), num(b.margin), flag(b.holds), flag(b.equality)});
    }
  } else {
    Json list = Json::array();
    for (const SweepRow& r : rows) {
      Json j = report_json(r.report);
      j["seed"] = r.seed;
      j["m_atoms"] = r.m_atoms;
      list.push_back(std::move(j));
    }
    Json j;
    j["rows"] = std::move(list);
    j["all_hold"] = all;
    run.emit_json(std::move(j), "csv");
  }
  run.finish("csv");
  return all ? kExitHolds : kExitViolation;
}

int cmd_john(Runner& run, const std::string& file, bool contacts_only) {
  const Body body = body_from_json(run.load(file));
  const auto* h = std::get_if<HPolytope>(&body);
  if (!h) throw Error(ErrorCode::InvalidArgument, "john needs an hpolytope body");
  const JohnResult r = john_decomposition(*h);
  if (contacts_only) {
    run.out() << dump_json(measure_to_json(r.contacts)) << '\n';
  } else {
    const IsotropyReport iso = isotropy_check(r.contacts);
    Json j;
    j["ellipsoid"] = {{"center", vec_to_json(r.ellipsoid.center)}, {"shape", mat_to_json(r.ellipsoid.shape)}};
    j["transform"] = {{"linear", mat_to_json(r.transform.linear)}, {"shift", vec_to_json(r.transform.shift)}};
    j["contacts"] = measure_to_json(r.contacts);
    j["isotropy"] = {{"frobenius_defect", iso.frobenius_defect}, {"centroid_norm", iso.centroid_norm},
                     {"mass", iso.mass}};
    run.emit_json(std::move(j));
  }
  run.finish();
  return kExitHolds;
}

int cmd_mean_width(Runner& run, const std::string& file, const std::string& method) {
  const Body body = body_from_json(run.load(file));
  const auto* ref = std::get_if<ReferenceBody>(&body);
  const auto* vp = std::get_if<VPolytope>(&body);
  const auto* hp = std::get_if<HPolytope>(&body);
  const int dim = ref ? ref->k : vp ? vp->dim() : hp->dim();

  Json j;
  Estimate e;
  if (method == "reference") {
    if (!ref) throw Error(ErrorCode::InvalidArgument, "method reference accepts only reference bodies");
    e.value = mean_width_reference(*ref);
  } else if (method == "mc") {
    const SupportFn h = ref ? reference_support(*ref) : vp ? support_oracle(*vp) : support_oracle(*hp);
    e = mean_width_mc(dim, h, run.cfg());
  } else {
    ComplementEstimate c;
    if (hp) {
      if (hp->offsets().minCoeff() <= 0.0) {
        throw Error(ErrorCode::OriginNotInterior, "complement method needs the origin inside the body");
      }
      // The gauge of the polar is the support function of the body.
      c = mean_width_complement_gauge(dim, support_oracle(*hp), run.cfg());
    } else if (ref && ref->kind == ReferenceKind::Ball) {
      c = mean_width_complement(dim, [](const Vec& x) { return x.norm() <= 1.0; }, run.cfg());
    } else {
      const HPolytope polar = polar_v(ref ? reference_vertices(*ref) : *vp);
      c = mean_width_complement(dim, [&polar](const Vec& x) { return polar.contains(x); }, run.cfg());
    }
    e = c.estimate;
    j["tail_mass"] = c.tail_mass;
    j["truncation_warning"] = c.truncation_warning;
    if (c.truncation_warning) run.err() << "warning: polar tail mass beyond r_max is " << c.tail_mass << '\n';
  }
  if (run.format() == "csv") {
    run.out() << csv_line({"method", "dim", "value", "stderr", "samples"});
    run.out() << csv_line({method, std::to_string(dim), num(e.value), num(e.std_error), std::to_string(e.samples)});
  } else {
    j["method"] = method;
    j["dim"] = dim;
    j["value"] = e.value;
    j["stderr"] = e.std_error;
    j["samples"] = e.samples;
    run.emit_json(std::move(j));
  }
  run.finish();
  return kExitHolds;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner run(out, err);
  CLI::App app{"Numerical checks of mean width inequalities for isotropic measures"};
  app.require_subcommand(1);

  std::string file;

  auto* iso = app.add_subcommand("check-isotropic", "check a measure file for isotropy and centering");
  iso->add_option("measure", file, "measure JSON file ('-' for stdin)")->required();
  add_globals(iso, run.g);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "check one inequality instance");
  ver->add_option("kind", va.kind,
                  "projection-simplex | projection-cross | section-cube | ell-section-cross | "
                  "ell-projection-cross | ell-section-simplex | ball-barthe | lyz-norm | transport")
      ->required();
  ver->add_option("measure", va.measure, "measure JSON file")->required();
  ver->add_option("subspace", va.subspace, "subspace JSON file (default: the whole space)");
  ver->add_option("--f", va.f, "per-atom values for ball-barthe / lyz-norm")->delimiter(',');
  ver->add_option("--lambda", va.lambda, "transport parameter");
  ver->add_option("--rmax", va.rmax, "transport integration range (default sqrt(n)(8+|lambda|))");
  ver->add_option("--rsteps", va.rsteps, "transport trapezoid nodes")->check(CLI::Range(2, 1000000));
  add_globals(ver, run.g);

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "run a seeded family of instances");
  sw->add_option("kind", sa.kind, "check to sweep (as for verify, bound kinds only)")->required();
  sw->add_option("--n-min", sa.n_min, "smallest ambient dimension");
  sw->add_option("--n-max", sa.n_max, "largest ambient dimension");
  sw->add_option("--count", sa.count, "measures per dimension");
  sw->add_option("--k-policy", sa.k_policy, "random or all")->check(CLI::IsMember({"random", "all"}));
  sw->add_option("--subspaces", sa.subspaces, "subspaces per measure (per k for --k-policy all)");
  add_globals(sw, run.g);

  bool contacts_only = false;
  auto* jo = app.add_subcommand("john", "John ellipsoid and contact measure of an hpolytope");
  jo->add_option("body", file, "body JSON file")->required();
  jo->add_flag("--contacts-only", contacts_only, "print only the contact measure");
  add_globals(jo, run.g);

  std::string method = "mc";
  auto* mw = app.add_subcommand("mean-width", "estimate or evaluate a mean width");
  mw->add_option("body", file, "body JSON file")->required();
  mw->add_option("--method", method, "mc, complement or reference")
      ->check(CLI::IsMember({"mc", "complement", "reference"}));
  add_globals(mw, run.g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitHolds;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitHolds;
  } catch (const CLI::ParseError& e) {
    out << dump_json(error_object("UsageError", e.what())) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (iso->parsed()) {
      run.command = "check-isotropic";
      return cmd_check_isotropic(run, file);
    }
    if (ver->parsed()) {
      run.command = "verify " + va.kind;
      return cmd_verify(run, va);
    }
    if (sw->parsed()) {
      run.command = "sweep " + sa.kind;
      return cmd_sweep(run, sa);
    }
    if (jo->parsed()) {
      run.command = "john";
      return cmd_john(run, file, contacts_only);
    }
    run.command = "mean-width";
    return cmd_mean_width(run, file, method);
  } catch (const Error& e) {
    out << dump_json(error_object(to_string(e.code()), e.what())) << '\n';
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    out << dump_json(error_object("InternalError", e.what())) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace cgeom
