#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqo/classify.hpp"
#include "eqo/hammerstein.hpp"
#include "eqo/rank1.hpp"
#include "eqo/solve.hpp"

namespace eqo {

/// A parsed problem file. Exactly one of the three forms is present.
struct ProblemDocument {
  std::optional<QopProblem> full;
  std::optional<Rank1Problem> rank1;
  std::optional<GoursatSpec> hammerstein;

  bool is_full() const { return full.has_value(); }
  bool is_rank1() const { return rank1.has_value(); }
  bool is_hammerstein() const { return hammerstein.has_value(); }

  /// The problem in quadratic form, reducing shorthands as needed.
  /// Hammerstein documents reduce with the given quadrature.
  QopProblem to_problem(const Quadrature& quad = Quadrature::trapezoid()) const;
};

/// Parse a problem document from JSON text. Malformed syntax raises
/// ParseError carrying 1-based line/column; structural problems raise
/// ParseError (missing/duplicate forms, bad version) or DimensionError
/// (ragged or inconsistent arrays).
ProblemDocument parse_problem(const std::string& text);

/// Serialize back to canonical JSON text (two-space indent, ordered keys).
std::string problem_to_json(const ProblemDocument& doc);

/// Everything a CLI invocation reports. Optional fields appear in the
/// serialized form only when set.
struct ReportDocument {
  std::string command;

  std::optional<std::string> kind;
  std::optional<vector_t> witness;
  std::optional<double> margin;
  std::optional<int> restarts_used;
  std::optional<bool> heuristic;
  std::optional<double> delta;

  std::optional<SolveReport> solve;
  std::optional<Rank1Certificate> certificate;
  std::optional<vector_t> sup_root;
  std::optional<bool> theorem_violation;

  std::vector<NkTrace> traces;

  std::optional<vector_t> grid;                // Hammerstein sample abscissae
  std::vector<vector_t> reconstructions;       // one sampled function per root

  double timing_seconds = 0.0;
};

/// Machine form. Number formatting round-trips doubles exactly; the timing
/// block is emitted only when include_timing is set (kept out of the
/// default machine form so identical runs serialize to identical bytes).
std::string report_to_json(const ReportDocument& report, bool include_timing = false);

/// Inverse of report_to_json for round-trip checks and downstream tooling.
ReportDocument report_from_json(const std::string& text);

/// Human-readable rendering (includes timing).
std::string report_to_text(const ReportDocument& report);

}  // namespace eqo
