#include "cli.hpp"

#include "weightlab/cantor.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/grids.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/measure_io.hpp"
#include "weightlab/rational.hpp"
#include "weightlab/report.hpp"
#include "weightlab/triadic.hpp"
#include "weightlab/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace weightlab::cli {

namespace {

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeLimit:
    case ErrorCode::ScaleRange: return kResourceCap;
    case ErrorCode::NoConvergence:
    case ErrorCode::MonotonicityViolation: return kCheckFailure;
    default: return kUsage;
  }
}

void print_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + path + " for writing");
  f << text;
  if (!f) fail(ErrorCode::InvalidArgument, "write failed: " + path);
}

std::string tree_path(const std::string& measure_path) {
  const std::string tail = ".measure.json";
  if (measure_path.size() > tail.size() && measure_path.ends_with(tail)) {
    return measure_path.substr(0, measure_path.size() - tail.size()) + ".tree.json";
  }
  if (measure_path.ends_with(".json")) return measure_path.substr(0, measure_path.size() - 5) + ".tree.json";
  return measure_path + ".tree.json";
}

/// One rational per line (first CSV field); '#' comments, blank lines and a
/// non-numeric first line (header) are skipped.
std::vector<Rational> read_points(const std::string& path) {
  if (path.empty()) fail(ErrorCode::InvalidArgument, "--points is required");
  std::ifstream f(path);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  std::vector<Rational> xs;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    std::string field = line.substr(0, line.find(','));
    field.erase(0, field.find_first_not_of(" \t\r"));
    field.erase(field.find_last_not_of(" \t\r") + 1);
    if (field.empty() || field.front() == '#') continue;
    try {
      xs.push_back(parse_rational(field));
    } catch (const Error&) {
      if (!first) throw;
    }
    first = false;
  }
  return xs;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string format_real(const Real& v) {
  std::ostringstream s;
  s << std::setprecision(20) << v;
  return s.str();
}

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) fail(ErrorCode::Parse, "expected a,b: " + text);
  return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

std::vector<Rational> parse_ps(const RunConfig& c) {
  std::vector<Rational> ps;
  for (const std::string& s : c.ps) {
    const Rational p = parse_rational(s);
    if (!(p > 1)) fail(ErrorCode::InvalidArgument, "p must exceed 1");
    ps.push_back(p);
  }
  return ps;
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  o.seed = c.seed;
  o.tol = c.tol;
  o.quad_tol = c.quad_tol;
  o.samples = c.samples;
  o.hilbert_samples = c.hilbert_samples;
  o.random_q = c.random_q;
  o.rule = parse_sign_rule(c.sign_rule);
  o.residual_cap = c.residual_cap;
  o.grid.j_min = c.j_min;
  o.grid.j_max = c.j_max;
  return o;
}

int run_build(const RunConfig& c, std::ostream& out) {
  if (c.ks.size() != 1) fail(ErrorCode::InvalidArgument, "build takes a single --k");
  if (c.out.empty()) fail(ErrorCode::InvalidArgument, "--out is required");
  const Construction w = build_w_k(c.ks.front(), c.depth.value_or(2), parse_sign_rule(c.sign_rule), c.residual_cap);
  write_measure_file(c.out, w.measure);
  write_json_file(tree_path(c.out), tree_to_json(w.tree));
  out << nlohmann::json{{"measure", c.out},
                        {"tree", tree_path(c.out)},
                        {"pieces", w.measure.pieces().size()},
                        {"residuals", w.tree.residual_count()},
                        {"total_mass", format_rational(w.measure.total_mass())}}
             .dump()
      << '\n';
  return kPass;
}

int run_eval_hilbert(const RunConfig& c, std::ostream& out) {
  const PiecewiseMeasure mu = read_measure_file(c.measure);
  const std::vector<Rational> xs = read_points(c.points);
  std::ostringstream csv;
  csv << "x,value,kind,error_bound";
  if (c.oracle_tol > 0) csv << ",oracle,oracle_error_bound";
  csv << '\n';
  for (const Rational& x : xs) {
    const TransformValue v = hilbert_exact(mu, x);
    csv << format_rational(x) << ',' << (v.finite() ? format_real(v.value) : std::string(to_string(v.kind))) << ','
        << to_string(v.kind) << ',' << format_double(v.error_bound);
    if (c.oracle_tol > 0) {
      if (v.finite()) {
        const TransformValue q = hilbert_quadrature_oracle(mu, x, c.oracle_tol);
        csv << ',' << format_real(q.value) << ',' << format_double(q.error_bound);
      } else {
        csv << ",,";
      }
    }
    csv << '\n';
  }
  write_text(c.out, csv.str(), out);
  return kPass;
}

int run_eval_maximal(const RunConfig& c, std::ostream& out) {
  const PiecewiseMeasure mu = read_measure_file(c.measure);
  if (!c.linearize.empty()) {
    GridFamily family{parse_grid_kind(c.grid == "full" ? "dyadic" : c.grid), c.j_min, c.j_max};
    const LinearizationMap map = linearize_maximal(mu, parse_interval(c.linearize), family);
    write_text(c.out, map.to_json().dump(2) + "\n", out);
    return kPass;
  }
  const std::vector<Rational> xs = read_points(c.points);
  std::ostringstream csv;
  if (c.grid == "full") {
    csv << "x,value,approx\n";
    for (const Rational& x : xs) {
      const Rational m = maximal_exact(mu, x);
      csv << format_rational(x) << ',' << format_rational(m) << ',' << format_double(to_double(m)) << '\n';
    }
  } else {
    const bool both = c.grid == "both";
    const GridFamily family{parse_grid_kind(both ? "dyadic" : c.grid), c.j_min, c.j_max};
    csv << "x,value,approx,tail_bound,certified,grid,j,n\n";
    for (const Rational& x : xs) {
      const DyadicMaximalValue m = dyadic_maximal(mu, x, family, both);
      csv << format_rational(x) << ',' << format_rational(m.value) << ',' << format_double(to_double(m.value)) << ','
          << format_rational(m.tail_bound) << ',' << format_rational(m.certified) << ',' << to_string(m.argmax.kind)
          << ',' << m.argmax.j << ',' << m.argmax.n.str() << '\n';
    }
  }
  write_text(c.out, csv.str(), out);
  return kPass;
}

int run_cantor_zeros(const RunConfig& c, std::ostream& out) {
  FindZeroOptions fo;
  fo.r_start = c.r_start;
  fo.r_limit = c.r_limit;
  const LambdaMeasure lambda = build_lambda(c.r_max, c.zero_tol, fo);
  nlohmann::json arr = nlohmann::json::array();
  for (const ZeroEstimate& z : lambda.zeros) {
    arr.push_back({{"r", z.r},
                   {"l", z.l},
                   {"lo", format_rational(z.lo)},
                   {"hi", format_rational(z.hi)},
                   {"est", z.estimate},
                   {"R", z.levels_used}});
  }
  write_text(c.out, arr.dump(2) + "\n", out);
  return kPass;
}

/// Reports for one suite; construction failures become report errors.
ReportSet run_suite(const RunConfig& c) {
  const VerifyOptions o = verify_options(c);
  const std::vector<Rational> ps = parse_ps(c);
  const std::string& suite = c.subcommand;
  const int depth = c.depth.value_or(suite == "gliding" ? 1 : 2);
  ReportSet set;
  auto with_w_k = [&](int k, auto&& body) {
    try {
      const Construction w = build_w_k(k, depth, o.rule, o.residual_cap);
      body(w.measure, default_q_family(w.measure, depth * k, o.random_q, o.seed));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SizeLimit) throw;
      VerificationReport rep;
      rep.check_name = suite;
      rep.parameters = {{"k", k}, {"depth", depth}};
      rep.record_error(e);
      set.reports.push_back(std::move(rep));
    }
  };
  auto tag = [&](VerificationReport rep, int k) {
    rep.parameters["k"] = k;
    rep.parameters["depth"] = depth;
    set.reports.push_back(std::move(rep));
  };

  if (suite == "contmax") {
    for (int k : c.ks) set.reports.push_back(check_contmax(k, depth, o));
  } else if (suite == "hlower") {
    set.reports.push_back(check_hlower(c.ks, depth, o));
  } else if (suite == "prop41") {
    set.reports.push_back(check_prop_unbddH1(c.ks, ps, depth, o));
  } else if (suite == "prop51") {
    std::vector<Rational> duals;
    for (const Rational& p : ps) duals.push_back(p / (p - 1));
    set.reports.push_back(check_prop_unbddH2(c.ks, duals, depth, o));
  } else if (suite == "sawyer") {
    for (int k : c.ks) {
      with_w_k(k, [&](const PiecewiseMeasure& w, const std::vector<Interval>& qs) {
        for (const Rational& p : ps) tag(sawyer_testing(w, p, qs, o), k);
      });
    }
    if (c.translated > 0) {
      const PiecewiseMeasure w = translated_sum(c.translated, depth, o.rule, o.residual_cap);
      const auto qs = default_q_family(w, depth * c.translated, o.random_q, o.seed);
      for (const Rational& p : ps) {
        VerificationReport rep = sawyer_testing(w, p, qs, o);
        rep.check_name = "sawyer-translated";
        rep.parameters["K"] = c.translated;
        rep.parameters["depth"] = depth;
        set.reports.push_back(std::move(rep));
      }
    }
  } else if (suite == "linearization") {
    std::vector<GridKind> grids;
    if (c.grids == "both") {
      grids = {GridKind::Dyadic, GridKind::Shifted};
    } else {
      grids = {parse_grid_kind(c.grids)};
    }
    for (int k : c.ks) {
      with_w_k(k, [&](const PiecewiseMeasure& w, const std::vector<Interval>& qs) {
        tag(linearization_testing(w, ps, grids, qs, o), k);
      });
    }
  } else if (suite == "gliding") {
    for (const Rational& p : ps) set.reports.push_back(gliding_hump_partial(p, c.eps, c.K_max, depth, o));
  } else if (suite == "theorem6") {
    set.reports.push_back(theorem6_check(c.r, c.T, c.R.value_or(c.r + 10)));
  } else if (suite == "all") {
    for (int k : c.ks) {
      for (const Rational& p : ps) {
        ReportSet part = verify_all(k, p, depth, o);
        for (VerificationReport& rep : part.reports) set.reports.push_back(std::move(rep));
      }
    }
  } else {
    fail(ErrorCode::InvalidArgument, "unknown verify suite: " + suite);
  }
  set.sort();
  return set;
}

int status_of(const ReportSet& set) {
  if (set.pass()) return kPass;
  bool failed_threshold = false, resource = false;
  for (const VerificationReport& rep : set.reports) {
    for (const Threshold& t : rep.thresholds) failed_threshold |= t.gating && !t.pass;
    for (const ReportError& e : rep.errors) resource |= e.code == "SizeLimit" || e.code == "ScaleRange";
  }
  return resource && !failed_threshold ? kResourceCap : kCheckFailure;
}

void write_plotdata(const std::string& path, const ReportSet& set, std::ostream& out) {
  std::ostringstream csv;
  emit_plotdata(set.reports, csv);
  write_text(path, csv.str(), out);
}

int run_verify(const RunConfig& c, std::ostream& out) {
  const ReportSet set = run_suite(c);
  const std::string text = set.to_json().dump(2) + "\n";
  if (c.json.empty()) {
    out << text;
  } else {
    write_text(c.json, text, out);
    out << nlohmann::json{{"pass", set.pass()}, {"reports", set.reports.size()}, {"json", c.json}}.dump() << '\n';
  }
  if (!c.csv.empty()) write_plotdata(c.csv, set, out);
  return status_of(set);
}

int run_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.inputs.empty()) fail(ErrorCode::InvalidArgument, "report needs at least one --in file");
  ReportSet set;
  bool consistent = true;
  for (const std::string& path : c.inputs) {
    ReportSet part = ReportSet::from_json(read_json_file(path));
    for (VerificationReport& rep : part.reports) {
      if (!rep.consistent()) {
        consistent = false;
        print_error(err, "Inconsistent", path + ": stored pass flags disagree with the data in " + rep.check_name);
      }
      set.reports.push_back(std::move(rep));
    }
  }
  write_plotdata(c.csv, set, out);
  if (!consistent) return kCheckFailure;
  return status_of(set);
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.precision_bits) set_precision_bits(*c.precision_bits);
    if (c.command == "build") return run_build(c, out);
    if (c.command == "eval" && c.subcommand == "hilbert") return run_eval_hilbert(c, out);
    if (c.command == "eval" && c.subcommand == "maximal") return run_eval_maximal(c, out);
    if (c.command == "cantor" && c.subcommand == "zeros") return run_cantor_zeros(c, out);
    if (c.command == "verify") return run_verify(c, out);
    if (c.command == "report") return run_report(c, out, err);
    fail(ErrorCode::InvalidArgument, "unknown command: " + c.command + " " + c.subcommand);
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what());
    return exit_for(e.code());
  } catch (const std::exception& e) {
    print_error(err, "Internal", e.what());
    return kCheckFailure;
  }
}

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"weightlab: exact weights, Hilbert and maximal transforms, verification reports"};
  app.require_subcommand(1);

  auto construction = [&](CLI::App* s) {
    s->add_option("--depth", c.depth, "Construction depth (default 2; gliding 1)");
    s->add_option("--sign-rule", c.sign_rule, "greedy | all-plus | all-minus")->capture_default_str();
    s->add_option("--cap", c.residual_cap, "Residual interval cap")->capture_default_str();
  };

  CLI::App* build = app.add_subcommand("build", "Build w_k and its .tree.json sidecar");
  build->add_option("--k", c.ks, "Construction parameter k")->required()->expected(1);
  construction(build);
  build->add_option("--out", c.out, "Output <name>.measure.json")->required();

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a transform at points");
  eval->require_subcommand(1);
  CLI::App* hilbert = eval->add_subcommand("hilbert", "Exact Hilbert transform");
  CLI::App* maximal = eval->add_subcommand("maximal", "Maximal function or grid maximal function");
  for (CLI::App* s : {hilbert, maximal}) {
    s->add_option("--measure", c.measure, "Measure JSON")->required();
    s->add_option("--points", c.points, "CSV with one x per line");
    s->add_option("--out", c.out, "Output CSV (default stdout)");
  }
  hilbert->add_option("--oracle-tol", c.oracle_tol, "Also run the quadrature oracle with this tolerance");
  maximal->add_option("--grid", c.grid, "full | dyadic | shifted | both")->capture_default_str();
  maximal->add_option("--linearize", c.linearize, "Q as a,b: dump the linearization of M(1_Q w) as JSON");
  maximal->add_option("--j-min", c.j_min, "Finest grid scale 2^j")->capture_default_str();
  maximal->add_option("--j-max", c.j_max, "Coarsest grid scale 2^j")->capture_default_str();

  CLI::App* cantor = app.add_subcommand("cantor", "Cantor measure tools");
  cantor->require_subcommand(1);
  CLI::App* zeros = cantor->add_subcommand("zeros", "Zeros of H(gamma) in the gaps");
  zeros->add_option("--rmax", c.r_max, "Largest gap level")->capture_default_str();
  zeros->add_option("--tol", c.zero_tol, "Agreement tolerance between approximation levels")->capture_default_str();
  zeros->add_option("--r-start", c.r_start, "First approximation level R")->capture_default_str();
  zeros->add_option("--r-limit", c.r_limit, "Give up past this R")->capture_default_str();
  zeros->add_option("--out", c.out, "Output zeros.json (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", c.subcommand,
                     "contmax | hlower | prop41 | prop51 | sawyer | linearization | gliding | theorem6 | all")
      ->required()
      ->check(CLI::IsMember(
          {"contmax", "hlower", "prop41", "prop51", "sawyer", "linearization", "gliding", "theorem6", "all"}));
  verify->add_option("--k", c.ks, "One or more k")->capture_default_str();
  verify->add_option("--p", c.ps, "One or more Lebesgue exponents p > 1")->capture_default_str();
  construction(verify);
  verify->add_option("--eps", c.eps, "Gliding hump epsilon, 1/p < eps < 1")->capture_default_str();
  verify->add_option("--K", c.K_max, "Gliding hump block count")->capture_default_str();
  verify->add_option("--translated", c.translated, "Sawyer: also test the translated sum of w_1..w_K")
      ->capture_default_str();
  verify->add_option("--r", c.r, "Cantor level r for theorem6")->capture_default_str();
  verify->add_option("--T", c.T, "Last block index T for theorem6")->capture_default_str();
  verify->add_option("--R", c.R, "Cantor approximation level (default r + 10)");
  verify->add_option("--grids", c.grids, "Linearization grids: dyadic | shifted | both")->capture_default_str();
  verify->add_option("--j-min", c.j_min, "Finest grid scale 2^j")->capture_default_str();
  verify->add_option("--j-max", c.j_max, "Coarsest grid scale 2^j")->capture_default_str();
  verify->add_option("--tol", c.tol, "Relative slack on upper bounds")->capture_default_str();
  verify->add_option("--quad-tol", c.quad_tol, "Relative quadrature tolerance")->capture_default_str();
  verify->add_option("--samples", c.samples, "Exact samples per residual interval")->capture_default_str();
  verify->add_option("--hilbert-samples", c.hilbert_samples, "Samples per residual middle third")
      ->capture_default_str();
  verify->add_option("--random-q", c.random_q, "Random intervals added to the Q-family")->capture_default_str();
  verify->add_option("--seed", c.seed, "Seed for the random Q intervals")->capture_default_str();
  verify->add_option("--json", c.json, "Report JSON (default stdout)");
  verify->add_option("--csv", c.csv, "Plot-data CSV");

  CLI::App* report = app.add_subcommand("report", "Re-check report JSON and emit plot data");
  report->add_option("--in", c.inputs, "Report JSON files")->required();
  report->add_option("--csv", c.csv, "Plot-data CSV (default stdout)");

  app.add_option("--precision-bits", c.precision_bits, "Real precision (default $WEIGHTLAB_PRECISION_BITS or 128)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(std::cerr, "Usage", e.what());
    return kUsage;
  }
  for (CLI::App* s : app.get_subcommands()) {
    c.command = s->get_name();
    for (CLI::App* sub : s->get_subcommands()) c.subcommand = sub->get_name();
  }
  return run(c, std::cout, std::cerr);
}

}  // namespace weightlab::cli
