#include "eqo/document.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqo/errors.hpp"

namespace eqo {

namespace {

using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& text, std::size_t byte,
                          const std::string& message) {
  int line = 1;
  int column = 1;
  const std::size_t stop = byte == 0 ? 0 : byte - 1;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ParseError(message, line, column);
}

[[noreturn]] void fail(const std::string& message) {
  throw ParseError(message, 0, 0);
}

vector_t vector_from(const njson& j, const std::string& name) {
  if (!j.is_array()) fail(name + " must be an array of numbers");
  vector_t v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(name + " must contain only numbers");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

matrix_t matrix_from(const njson& j, const std::string& name) {
  if (!j.is_array() || j.empty()) fail(name + " must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(name + " rows must be non-empty arrays");
  matrix_t m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw DimensionError(name + " is ragged: row " + std::to_string(r) +
                           " has a different length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) fail(name + " must contain only numbers");
      m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

void require_size(const vector_t& v, int n, const std::string& name) {
  if (v.size() != n)
    throw DimensionError(name + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(n));
}

void require_shape(const matrix_t& m, int rows, int cols, const std::string& name) {
  if (m.rows() != rows || m.cols() != cols)
    throw DimensionError(name + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
}

QopProblem full_from(const njson& j) {
  if (!j.contains("n") || !j["n"].is_number_integer())
    fail("full-form document needs an integer field n");
  const int n = j["n"].get<int>();
  if (n < 1) fail("n must be at least 1");
  if (!j.contains("q_mats") || !j["q_mats"].is_array() ||
      j["q_mats"].size() != static_cast<std::size_t>(n))
    throw DimensionError("q_mats must hold exactly n matrices");
  std::vector<matrix_t> mats;
  mats.reserve(n);
  for (int k = 0; k < n; ++k) {
    matrix_t a = matrix_from(j["q_mats"][k], "q_mats[" + std::to_string(k) + "]");
    require_shape(a, n, n, "q_mats[" + std::to_string(k) + "]");
    mats.push_back(std::move(a));
  }
  matrix_t lin = matrix_t::Zero(n, n);
  if (j.contains("lin")) {
    lin = matrix_from(j["lin"], "lin");
    require_shape(lin, n, n, "lin");
  }
  vector_t offset = vector_t::Zero(n);
  if (j.contains("offset")) {
    offset = vector_from(j["offset"], "offset");
    require_size(offset, n, "offset");
  }
  return QopProblem{QuadraticOperator(std::move(mats)), std::move(lin),
                    std::move(offset)};
}

Rank1Problem rank1_from(const njson& j) {
  if (!j.contains("coef") || !j.contains("rhs"))
    fail("rank1 block needs fields coef and rhs");
  Rank1Problem p;
  p.coef = matrix_from(j["coef"], "rank1.coef");
  if (p.coef.rows() != p.coef.cols())
    throw DimensionError("rank1.coef must be square");
  p.rhs = vector_from(j["rhs"], "rank1.rhs");
  require_size(p.rhs, static_cast<int>(p.coef.rows()), "rank1.rhs");
  return p;
}

GoursatSpec hammerstein_from(const njson& j) {
  if (!j.contains("n_basis") || !j["n_basis"].is_number_integer())
    fail("hammerstein block needs an integer field n_basis");
  GoursatSpec spec;
  spec.n_basis = j["n_basis"].get<int>();
  if (spec.n_basis < 1) fail("n_basis must be at least 1");
  if (!j.contains("grid")) fail("hammerstein block needs a grid");
  spec.grid = vector_from(j["grid"], "hammerstein.grid");
  const int pts = static_cast<int>(spec.grid.size());
  for (int i = 1; i < pts; ++i) {
    if (!(spec.grid(i) > spec.grid(i - 1)))
      throw NonIncreasingGrid("grid values must strictly increase");
  }
  auto family = [&](const char* key) {
    std::vector<vector_t> fam;
    if (!j.contains(key)) fail(std::string("hammerstein block needs family ") + key);
    const njson& arr = j[key];
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(spec.n_basis))
      throw DimensionError(std::string("family ") + key + " must hold n_basis rows");
    for (int k = 0; k < spec.n_basis; ++k) {
      vector_t row = vector_from(arr[k], std::string(key) + "[" + std::to_string(k) + "]");
      require_size(row, pts, std::string(key) + "[" + std::to_string(k) + "]");
      fam.push_back(std::move(row));
    }
    return fam;
  };
  spec.a = family("a");
  spec.b = family("b");
  spec.c = family("c");
  spec.d = family("d");
  spec.e = family("e");
  if (!j.contains("f")) fail("hammerstein block needs samples f");
  spec.f = vector_from(j["f"], "hammerstein.f");
  require_size(spec.f, pts, "hammerstein.f");
  return spec;
}

njson to_json_checked(const std::string& text) {
  try {
    return njson::parse(text);
  } catch (const njson::parse_error& err) {
    fail_at(text, err.byte, err.what());
  }
}

ojson vector_json(const vector_t& v) {
  ojson arr = ojson::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

ojson matrix_json(const matrix_t& m) {
  ojson rows = ojson::array();
  for (int r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

vector_t vector_from_plain(const njson& j) {
  vector_t v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

QopProblem ProblemDocument::to_problem(const Quadrature& quad) const {
  if (full) return *full;
  if (rank1) return eqo::to_problem(*rank1);
  if (hammerstein) return reduce(*hammerstein, quad).problem;
  throw PreconditionViolated("empty problem document");
}

ProblemDocument parse_problem(const std::string& text) {
  const njson j = to_json_checked(text);
  if (!j.is_object()) fail("problem document must be a JSON object");
  if (!j.contains("version") || !j["version"].is_string() ||
      j["version"].get<std::string>() != "1")
    fail("problem document needs version \"1\"");

  const bool has_full = j.contains("q_mats") || j.contains("n");
  const bool has_rank1 = j.contains("rank1");
  const bool has_hammer = j.contains("hammerstein");
  const int forms = int(has_full) + int(has_rank1) + int(has_hammer);
  if (forms == 0)
    fail("problem document needs one of: full form (n, q_mats), rank1, hammerstein");
  if (forms > 1) fail("problem document must use exactly one form");

  ProblemDocument doc;
  if (has_full) doc.full = full_from(j);
  if (has_rank1) doc.rank1 = rank1_from(j["rank1"]);
  if (has_hammer) doc.hammerstein = hammerstein_from(j["hammerstein"]);
  return doc;
}

std::string problem_to_json(const ProblemDocument& doc) {
  ojson j;
  j["version"] = "1";
  if (doc.full) {
    const QopProblem& p = *doc.full;
    j["n"] = p.n();
    ojson mats = ojson::array();
    for (int k = 0; k < p.n(); ++k) mats.push_back(matrix_json(p.q.mat(k)));
    j["q_mats"] = std::move(mats);
    j["lin"] = matrix_json(p.lin);
    j["offset"] = vector_json(p.offset);
  } else if (doc.rank1) {
    ojson r;
    r["coef"] = matrix_json(doc.rank1->coef);
    r["rhs"] = vector_json(doc.rank1->rhs);
    j["rank1"] = std::move(r);
  } else if (doc.hammerstein) {
    const GoursatSpec& s = *doc.hammerstein;
    ojson h;
    h["n_basis"] = s.n_basis;
    h["grid"] = vector_json(s.grid);
    auto family = [&](const std::vector<vector_t>& fam) {
      ojson arr = ojson::array();
      for (const vector_t& row : fam) arr.push_back(vector_json(row));
      return arr;
    };
    h["a"] = family(s.a);
    h["b"] = family(s.b);
    h["c"] = family(s.c);
    h["d"] = family(s.d);
    h["e"] = family(s.e);
    h["f"] = vector_json(s.f);
    j["hammerstein"] = std::move(h);
  }
  return j.dump(2) + "\n";
}

std::string report_to_json(const ReportDocument& report, bool include_timing) {
  ojson j;
  j["command"] = report.command;
  if (report.kind) {
    ojson c;
    c["kind"] = *report.kind;
    if (report.margin) c["margin"] = *report.margin;
    if (report.restarts_used) c["restarts_used"] = *report.restarts_used;
    if (report.heuristic) c["heuristic"] = *report.heuristic;
    if (report.witness) c["witness"] = vector_json(*report.witness);
    j["classification"] = std::move(c);
  }
  if (report.delta) j["delta"] = *report.delta;
  if (report.solve) {
    ojson s;
    ojson roots = ojson::array();
    for (const Root& r : report.solve->roots) {
      ojson jr;
      jr["x"] = vector_json(r.x);
      jr["residual"] = r.residual;
      jr["stable"] = r.stable;
      jr["jac_min_sv"] = r.jac_min_sv;
      roots.push_back(std::move(jr));
    }
    s["roots"] = std::move(roots);
    s["starts_run"] = report.solve->starts_run;
    s["even_count_ok"] = report.solve->even_count_ok;
    j["solve"] = std::move(s);
  }
  if (report.certificate) {
    ojson c;
    c["column_sign_ok"] = report.certificate->column_sign_ok;
    c["m"] = report.certificate->m;
    c["beta"] = report.certificate->beta;
    c["condition_value"] = report.certificate->condition_value;
    c["holds"] = report.certificate->holds;
    j["certificate"] = std::move(c);
  }
  if (report.sup_root) j["sup_root"] = vector_json(*report.sup_root);
  if (report.theorem_violation) j["theorem_violation"] = *report.theorem_violation;
  if (!report.traces.empty()) {
    ojson traces = ojson::array();
    for (const NkTrace& t : report.traces) {
      ojson jt;
      jt["outcome"] = to_string(t.outcome);
      ojson its = ojson::array();
      for (const vector_t& x : t.iterates) its.push_back(vector_json(x));
      jt["iterates"] = std::move(its);
      ojson res = ojson::array();
      for (double r : t.residual_norms) res.push_back(r);
      jt["residual_norms"] = std::move(res);
      traces.push_back(std::move(jt));
    }
    j["traces"] = std::move(traces);
  }
  if (report.grid) j["grid"] = vector_json(*report.grid);
  if (!report.reconstructions.empty()) {
    ojson recon = ojson::array();
    for (const vector_t& r : report.reconstructions) recon.push_back(vector_json(r));
    j["reconstructions"] = std::move(recon);
  }
  if (include_timing) j["timing"] = ojson{{"seconds", report.timing_seconds}};
  return j.dump(2) + "\n";
}

ReportDocument report_from_json(const std::string& text) {
  const njson j = to_json_checked(text);
  if (!j.is_object()) fail("report document must be a JSON object");
  ReportDocument r;
  r.command = j.value("command", std::string());
  if (j.contains("classification")) {
    const njson& c = j["classification"];
    r.kind = c.value("kind", std::string());
    if (c.contains("margin")) r.margin = c["margin"].get<double>();
    if (c.contains("restarts_used")) r.restarts_used = c["restarts_used"].get<int>();
    if (c.contains("heuristic")) r.heuristic = c["heuristic"].get<bool>();
    if (c.contains("witness")) r.witness = vector_from_plain(c["witness"]);
  }
  if (j.contains("delta")) r.delta = j["delta"].get<double>();
  if (j.contains("solve")) {
    const njson& s = j["solve"];
    SolveReport sr;
    for (const njson& jr : s["roots"]) {
      Root root;
      root.x = vector_from_plain(jr["x"]);
      root.residual = jr["residual"].get<double>();
      root.stable = jr["stable"].get<bool>();
      root.jac_min_sv = jr["jac_min_sv"].get<double>();
      sr.roots.push_back(std::move(root));
    }
    sr.starts_run = s.value("starts_run", 0);
    sr.even_count_ok = s.value("even_count_ok", false);
    r.solve = std::move(sr);
  }
  if (j.contains("certificate")) {
    const njson& c = j["certificate"];
    Rank1Certificate cert;
    cert.column_sign_ok = c["column_sign_ok"].get<bool>();
    cert.m = c["m"].get<double>();
    cert.beta = c["beta"].get<double>();
    cert.condition_value = c["condition_value"].get<double>();
    cert.holds = c["holds"].get<bool>();
    r.certificate = cert;
  }
  if (j.contains("sup_root")) r.sup_root = vector_from_plain(j["sup_root"]);
  if (j.contains("theorem_violation"))
    r.theorem_violation = j["theorem_violation"].get<bool>();
  if (j.contains("traces")) {
    for (const njson& jt : j["traces"]) {
      NkTrace t;
      const std::string outcome = jt.value("outcome", "converged");
      if (outcome == "converged") t.outcome = NkOutcome::Converged;
      else if (outcome == "singular-jacobian") t.outcome = NkOutcome::SingularJacobian;
      else if (outcome == "max-iterations") t.outcome = NkOutcome::MaxIterations;
      else t.outcome = NkOutcome::Diverged;
      for (const njson& x : jt["iterates"]) t.iterates.push_back(vector_from_plain(x));
      for (const njson& v : jt["residual_norms"]) t.residual_norms.push_back(v.get<double>());
      r.traces.push_back(std::move(t));
    }
  }
  if (j.contains("grid")) r.grid = vector_from_plain(j["grid"]);
  if (j.contains("reconstructions")) {
    for (const njson& rec : j["reconstructions"])
      r.reconstructions.push_back(vector_from_plain(rec));
  }
  if (j.contains("timing")) r.timing_seconds = j["timing"].value("seconds", 0.0);
  return r;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_vec(const vector_t& v) {
  std::string out = "(";
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v(i));
  }
  out += ")";
  return out;
}

}  // namespace

std::string report_to_text(const ReportDocument& report) {
  std::ostringstream os;
  os << "command: " << report.command << "\n";
  if (report.kind) {
    os << "classification: " << *report.kind;
    if (report.margin) os << "  margin " << fmt(*report.margin);
    if (report.restarts_used) os << "  restarts " << *report.restarts_used;
    if (report.heuristic && *report.heuristic) os << "  (heuristic)";
    os << "\n";
    if (report.witness) os << "witness: " << fmt_vec(*report.witness) << "\n";
  }
  if (report.delta) os << "delta: " << fmt(*report.delta) << "\n";
  if (report.certificate) {
    const Rank1Certificate& c = *report.certificate;
    os << "certificate: m " << fmt(c.m) << "  beta " << fmt(c.beta)
       << "  m^2+4*beta " << fmt(c.condition_value) << "  "
       << (c.holds ? "holds" : (c.column_sign_ok ? "fails" : "mixed-sign column"))
       << "\n";
  }
  if (report.solve) {
    const SolveReport& s = *report.solve;
    os << "roots: " << s.roots.size() << " found from " << s.starts_run
       << " starts, " << s.stable_count() << " stable, parity "
       << (s.even_count_ok ? "ok" : "ODD") << "\n";
    for (const Root& root : s.roots) {
      os << "  " << fmt_vec(root.x) << "  residual " << fmt(root.residual)
         << "  " << (root.stable ? "stable" : "not stable") << "  min_sv "
         << fmt(root.jac_min_sv) << "\n";
    }
  }
  if (report.sup_root) os << "sup root: " << fmt_vec(*report.sup_root) << "\n";
  if (report.theorem_violation && *report.theorem_violation)
    os << "WARNING: certified instance violated the expected conclusion\n";
  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    const NkTrace& t = report.traces[i];
    os << "trace " << i << ": " << to_string(t.outcome) << "\n";
    for (std::size_t k = 0; k < t.iterates.size(); ++k) {
      os << "  iter " << k << "  x " << fmt_vec(t.iterates[k]) << "  |P(x)| "
         << fmt(t.residual_norms[k]) << "\n";
    }
  }
  if (report.grid && !report.reconstructions.empty()) {
    os << "reconstructions: " << report.reconstructions.size()
       << " sampled on " << report.grid->size() << " grid points\n";
  }
  os << "timing: " << fmt(report.timing_seconds * 1e3) << " ms\n";
  return os.str();
}

}  // namespace eqo
