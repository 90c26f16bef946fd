// Command-line front end: parse problem documents, dispatch to the library,
// and emit pretty or machine-readable reports.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqo/classify.hpp"
#include "eqo/document.hpp"
#include "eqo/errors.hpp"
#include "eqo/gallery.hpp"
#include "eqo/hammerstein.hpp"
#include "eqo/rank1.hpp"
#include "eqo/solve.hpp"

namespace {

using namespace eqo;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t env_seed() {
  if (const char* s = std::getenv("EQO_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 0);
    if (end && *end == '\0') return v;
    throw UsageError("EQO_SEED must be an unsigned integer");
  }
  return kDefaultSeed;
}

std::vector<double> parse_number_list(std::string text, const std::string& what) {
  for (char& ch : text) {
    if (ch == '(' || ch == ')' || ch == '[' || ch == ']' || ch == ',') ch = ' ';
  }
  std::istringstream is(text);
  std::vector<double> out;
  double v = 0.0;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (!(is >> rest) && !out.empty()) return out;
  throw UsageError("could not parse " + what + " as a list of numbers");
}

vector_t parse_point(const std::string& text, int n) {
  const std::vector<double> vals = parse_number_list(text, "--from point");
  if (static_cast<int>(vals.size()) != n) {
    throw UsageError("--from point has " + std::to_string(vals.size()) +
                     " coordinates, problem has dimension " + std::to_string(n));
  }
  vector_t x(n);
  for (int i = 0; i < n; ++i) x(i) = vals[i];
  return x;
}

BoxSpec parse_box(const std::string& text, int n) {
  const std::vector<double> vals = parse_number_list(text, "--box");
  BoxSpec box;
  if (static_cast<int>(vals.size()) == 1) {
    box.center = vector_t::Zero(n);
    box.radius = vals[0];
  } else if (static_cast<int>(vals.size()) == n + 1) {
    box.center = vector_t(n);
    for (int i = 0; i < n; ++i) box.center(i) = vals[i];
    box.radius = vals[n];
  } else {
    throw UsageError("--box needs either a radius or n center coordinates "
                     "plus a radius");
  }
  if (!(box.radius > 0.0)) throw UsageError("--box radius must be positive");
  return box;
}

Quadrature parse_quadrature(const std::string& text) {
  if (text == "trapezoid") return Quadrature::trapezoid();
  if (text == "gauss") return Quadrature::gauss(32);
  if (text.rfind("gauss:", 0) == 0) {
    const std::string tail = text.substr(6);
    char* end = nullptr;
    const long k = std::strtol(tail.c_str(), &end, 10);
    if (!end || *end != '\0' || k < 1 || k > 64)
      throw UsageError("--quadrature gauss:k needs k in [1,64]");
    return Quadrature::gauss(static_cast<int>(k));
  }
  throw UsageError("--quadrature must be trapezoid, gauss, or gauss:k");
}

void emit(const ReportDocument& report, bool json) {
  if (json) {
    std::cout << report_to_json(report, /*include_timing=*/false);
  } else {
    std::cout << report_to_text(report);
  }
}

void fill_classification(ReportDocument& report, const Classification& c) {
  report.kind = to_string(c.kind);
  report.margin = c.margin;
  report.restarts_used = c.restarts_used;
  report.heuristic = c.heuristic;
  if (c.witness) report.witness = c.witness->lambda;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

int cmd_classify(const std::string& input, bool json, int restarts, double eps_pd) {
  Timer timer;
  const ProblemDocument doc = parse_problem(read_input(input));
  const QopProblem p = doc.to_problem();

  ClassifyOptions opts;
  opts.seed = env_seed();
  if (restarts > 0) opts.restarts = restarts;
  if (eps_pd > 0.0) opts.eps_pd = eps_pd;

  ReportDocument report;
  report.command = "classify";
  if (p.n() == 2) {
    try {
      const Classification2d c2 = classify_2d(p.q, opts);
      fill_classification(report, c2.classification);
      report.delta = c2.delta;
    } catch (const DegenerateProportional&) {
      // Proportional coefficient rows sit outside the discriminant
      // classification; fall back to the general search.
      fill_classification(report, classify(p.q, opts));
    }
  } else {
    fill_classification(report, classify(p.q, opts));
  }
  report.timing_seconds = timer.seconds();
  emit(report, json);
  return 0;
}

EnumerateOptions make_enumerate_options(int starts, int threads,
                                        const std::string& box_text,
                                        double tol_res, int n) {
  EnumerateOptions opts;
  opts.seed = env_seed();
  if (starts == 0) throw UsageError("--starts must be at least 1");
  if (starts > 0) opts.starts = starts;
  if (threads > 0) opts.threads = threads;
  if (tol_res > 0.0) opts.nk.tol_res = tol_res;
  if (!box_text.empty()) opts.box = parse_box(box_text, n);
  return opts;
}

int cmd_solve(const std::string& input, bool json, int starts, int threads,
              const std::string& box_text, const std::string& from_text,
              bool trace, double tol_res) {
  Timer timer;
  const ProblemDocument doc = parse_problem(read_input(input));
  const QopProblem p = doc.to_problem();
  const EnumerateOptions opts =
      make_enumerate_options(starts, threads, box_text, tol_res, p.n());

  ReportDocument report;
  report.command = "solve";
  if (!from_text.empty()) {
    const vector_t x0 = parse_point(from_text, p.n());
    NkTrace t = nk_iterate(p, x0, opts.nk);
    SolveReport solo;
    solo.starts_run = 1;
    if (t.outcome == NkOutcome::Converged) {
      solo.roots.push_back(certify_stability(p, t.final_x(), opts.nk));
    }
    solo.even_count_ok = solo.stable_count() % 2 == 0;
    report.solve = std::move(solo);
    if (trace) {
      report.traces.push_back(std::move(t));
    } else {
      NkTrace last;
      last.outcome = t.outcome;
      if (!t.iterates.empty()) {
        last.iterates.push_back(t.iterates.back());
        last.residual_norms.push_back(t.residual_norms.back());
      }
      report.traces.push_back(std::move(last));
    }
  } else if (p.n() == 2) {
    try {
      report.solve = solve_2d(p, opts);
    } catch (const DegenerateResultant& err) {
      std::cerr << "note: " << err.what()
                << "; falling back to multistart enumeration\n";
      report.solve = enumerate_stable(p, opts);
    }
  } else {
    report.solve = enumerate_stable(p, opts);
  }
  report.timing_seconds = timer.seconds();
  emit(report, json);
  return 0;
}

int cmd_rank1(const std::string& input, bool json, int starts, int threads,
              double tol_res) {
  Timer timer;
  const ProblemDocument doc = parse_problem(read_input(input));
  if (!doc.is_rank1())
    throw UsageError("rank1 command needs a document with a rank1 block");
  const Rank1Problem& p = *doc.rank1;
  const EnumerateOptions opts =
      make_enumerate_options(starts, threads, "", tol_res, p.n());

  Rank1Report rr = solve_rank1(p, opts);
  ReportDocument report;
  report.command = "rank1";
  report.certificate = rr.certificate;
  if (!rr.certificate.column_sign_ok) {
    std::cerr << "note: a coefficient column mixes signs; the solvability "
                 "certificate does not apply and only the generic multistart "
                 "ran\n";
  }
  if (rr.sup_root) report.sup_root = rr.sup_root->x;
  report.theorem_violation = rr.theorem_violation;
  report.solve = std::move(rr.report);
  report.timing_seconds = timer.seconds();
  emit(report, json);
  return 0;
}

int cmd_hammerstein(const std::string& input, bool json, int starts, int threads,
                    const std::string& quad_text, const std::string& solutions,
                    double tol_res) {
  Timer timer;
  const ProblemDocument doc = parse_problem(read_input(input));
  if (!doc.is_hammerstein())
    throw UsageError("hammerstein command needs a document with a hammerstein block");
  const Quadrature quad = parse_quadrature(quad_text);
  const EnumerateOptions opts = make_enumerate_options(
      starts, threads, "", tol_res, 3 * doc.hammerstein->n_basis);

  HammersteinReport hr = solve_hammerstein(*doc.hammerstein, quad, opts);
  ReportDocument report;
  report.command = "hammerstein";
  fill_classification(report, hr.reduced_classification);
  report.grid = doc.hammerstein->grid;
  report.reconstructions = hr.reconstructions;
  report.solve = std::move(hr.report);
  report.timing_seconds = timer.seconds();

  if (!solutions.empty()) {
    for (std::size_t i = 0; i < report.reconstructions.size(); ++i) {
      const std::string path = solutions + "-" + std::to_string(i) + ".txt";
      std::ofstream out(path);
      if (!out) throw UsageError("cannot write solution file: " + path);
      const vector_t& grid = *report.grid;
      const vector_t& x = report.reconstructions[i];
      out.precision(17);
      for (int k = 0; k < grid.size(); ++k)
        out << grid(k) << " " << x(k) << "\n";
    }
  }
  emit(report, json);
  return 0;
}

int cmd_gallery_list() {
  for (const GalleryEntry& e : gallery()) {
    std::printf("%-24s n=%d  %-10s %s\n", e.id.c_str(), e.problem.n(),
                to_string(e.expected_kind).c_str(), e.title.c_str());
  }
  return 0;
}

int cmd_gallery_export(const std::string& id) {
  const GalleryEntry& e = gallery_entry(id);
  ProblemDocument doc;
  if (e.rank1_form) doc.rank1 = *e.rank1_form;
  else doc.full = e.problem;
  std::cout << problem_to_json(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic operator equations: classification, stable-root "
               "enumeration, rank-one systems, Hammerstein reductions"};
  app.require_subcommand(1);

  std::string input = "-";
  bool json = false;
  int starts = -1;
  int threads = -1;
  double tol_res = -1.0;
  int restarts = -1;
  double eps_pd = -1.0;
  std::string box_text, from_text, quad_text = "trapezoid", solutions, gallery_id;
  bool trace = false;

  CLI::App* c_classify = app.add_subcommand("classify", "Decide elliptic/parabolic/hyperbolic type");
  c_classify->add_option("input", input, "problem document path, or - for stdin");
  c_classify->add_flag("--json", json, "emit the machine-readable report");
  c_classify->add_option("--restarts", restarts, "ascent restarts");
  c_classify->add_option("--eps-pd", eps_pd, "positive-definiteness threshold");

  CLI::App* c_solve = app.add_subcommand("solve", "Enumerate stable solutions");
  c_solve->add_option("input", input, "problem document path, or - for stdin");
  c_solve->add_flag("--json", json, "emit the machine-readable report");
  c_solve->add_option("--starts", starts, "number of multistart points");
  c_solve->add_option("--threads", threads, "worker threads (does not change output)");
  c_solve->add_option("--box", box_text, "search box: radius, or c1,..,cn,radius");
  c_solve->add_option("--from", from_text, "run one iteration from this point, e.g. \"(2,4)\"");
  c_solve->add_flag("--trace", trace, "include the full iterate trace (with --from)");
  c_solve->add_option("--tol-res", tol_res, "residual tolerance");

  CLI::App* c_rank1 = app.add_subcommand("rank1", "Certified rank-one systems");
  c_rank1->add_option("input", input, "problem document path, or - for stdin");
  c_rank1->add_flag("--json", json, "emit the machine-readable report");
  c_rank1->add_option("--starts", starts, "number of multistart points");
  c_rank1->add_option("--threads", threads, "worker threads");
  c_rank1->add_option("--tol-res", tol_res, "residual tolerance");

  CLI::App* c_hammer = app.add_subcommand("hammerstein", "Degenerate-kernel integral equations");
  c_hammer->add_option("input", input, "problem document path, or - for stdin");
  c_hammer->add_flag("--json", json, "emit the machine-readable report");
  c_hammer->add_option("--starts", starts, "number of multistart points");
  c_hammer->add_option("--threads", threads, "worker threads");
  c_hammer->add_option("--quadrature", quad_text, "trapezoid, gauss, or gauss:k");
  c_hammer->add_option("--solutions", solutions, "write sampled solutions to <prefix>-<i>.txt");
  c_hammer->add_option("--tol-res", tol_res, "residual tolerance");

  CLI::App* c_gallery = app.add_subcommand("gallery", "Built-in worked examples");
  CLI::App* c_list = c_gallery->add_subcommand("list", "list catalog ids");
  CLI::App* c_export = c_gallery->add_subcommand("export", "print an entry as a problem document");
  c_export->add_option("id", gallery_id, "gallery entry id")->required();
  c_gallery->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_classify))
      return cmd_classify(input, json, restarts, eps_pd);
    if (app.got_subcommand(c_solve))
      return cmd_solve(input, json, starts, threads, box_text, from_text, trace,
                       tol_res);
    if (app.got_subcommand(c_rank1))
      return cmd_rank1(input, json, starts, threads, tol_res);
    if (app.got_subcommand(c_hammer))
      return cmd_hammerstein(input, json, starts, threads, quad_text, solutions,
                             tol_res);
    if (app.got_subcommand(c_gallery)) {
      if (c_gallery->got_subcommand(c_list)) return cmd_gallery_list();
      return cmd_gallery_export(gallery_id);
    }
  } catch (const ParseError& err) {
    if (err.line > 0)
      std::cerr << "parse error (line " << err.line << ", column " << err.column
                << "): " << err.what() << "\n";
    else
      std::cerr << "parse error: " << err.what() << "\n";
    return 2;
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
