#pragma once

#include <optional>

#include "eqo/solve.hpp"

namespace eqo {

/// The rank-one system x_k^2 = sum_i coef(k,i) x_i + rhs_k, k = 1..n.
struct Rank1Problem {
  matrix_t coef;  // n x n
  vector_t rhs;   // n

  int n() const { return static_cast<int>(rhs.size()); }
};

/// Solvability certificate: with m = sum_j min_i |a_ij| and beta = min_i b_i,
/// the system has at least two stable solutions when every coefficient column
/// has uniform sign and m^2 + 4 beta > 0.
struct Rank1Certificate {
  bool column_sign_ok = false;
  double m = 0.0;
  double beta = 0.0;
  double condition_value = 0.0;  // m^2 + 4 beta
  bool holds = false;
};

/// Guaranteed Newton start for sign-normalized problems: the constant vector
/// (alpha, ..., alpha) with alpha just above (M + sqrt(M^2 + 4 b_max)) / 2.
struct StartPoint {
  double M = 0.0;      // max row sum of coefficients
  double b_max = 0.0;  // max right-hand side
  double alpha = 0.0;
};

struct SignNormalized {
  Rank1Problem problem;  // all coefficients nonnegative
  vector_t signs;        // +-1 per variable; x_original = signs .* x_normalized
};

struct Rank1Report {
  SolveReport report;            // all roots in original coordinates
  std::optional<Root> sup_root;  // the supremum root when certified
  Rank1Certificate certificate;
  bool theorem_violation = false;  // certificate held but the promised
                                   // two-stable-roots/sup structure failed
};

/// Equivalent general form: Q = diag squares, lin = -coef, offset = -rhs.
QopProblem to_problem(const Rank1Problem& p);

/// Evaluates the certificate; never throws on well-formed input.
Rank1Certificate check_condition(const Rank1Problem& p);

/// Flips variable signs so every coefficient column is nonnegative (columns
/// of zeros keep sign +1).  Throws MixedSignColumn when a column carries both
/// strict signs, which no flip can repair.
SignNormalized sign_normalize(const Rank1Problem& p);

/// Start point for the monotone Newton descent.  Requires a sign-normalized
/// problem (NotNormalized otherwise).  When M^2 + 4 b_max < 0 -- impossible
/// under a holding certificate -- the sqrt term is dropped: alpha = 1.001 M.
StartPoint guaranteed_start(const Rank1Problem& p);

/// Newton-Kantorovich from the guaranteed start; converges monotonically to
/// the supremum root (the componentwise-largest solution) in normalized
/// coordinates and returns it mapped back to original coordinates.  Throws
/// ConditionNotMet when the certificate fails and TheoremViolation when the
/// certified run fails to converge.
Root solve_sup(const Rank1Problem& p, const NkOptions& nk = {});

/// Full pipeline: certificate, supremum root, multistart enumeration, and a
/// dominance check of the supremum over every enumerated root.
Rank1Report solve_rank1(const Rank1Problem& p, const EnumerateOptions& opts = {});

/// Proof-step oracle: for a sign-normalized problem and two points of the
/// solution enclosure E = {x : x_k^2 <= (coef x + rhs)_k}, the componentwise
/// max stays in E.  Throws NotNormalized / PreconditionViolated when the
/// inputs break the assumptions.
bool sup_lattice_check(const Rank1Problem& p, const vector_t& x,
                       const vector_t& y);

}  // namespace eqo
