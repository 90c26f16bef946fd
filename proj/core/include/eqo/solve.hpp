#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqo/classify.hpp"
#include "eqo/operators.hpp"

namespace eqo {

struct NkOptions {
  double tol_res = 1e-10;       // residual norm for convergence
  double tol_step = 1e-12;      // step norm below which iteration stalls
  int max_iter = 100;
  double jac_cond_limit = 1e12; // Jacobian condition number cutoff
  double diverge_norm = 1e12;   // |x| beyond which the run is abandoned
  bool damping = false;         // Tikhonov-damped steps (exploration only)
};

enum class NkOutcome { Converged, SingularJacobian, MaxIterations, Diverged };

std::string to_string(NkOutcome o);

/// Full record of one Newton-Kantorovich run.  Numeric failures are encoded
/// in `outcome`; nothing in here throws once the dimensions check out.
struct NkTrace {
  std::vector<vector_t> iterates;      // x_0 ... x_final
  std::vector<double> residual_norms;  // |P(x_k)|, same length as iterates
  NkOutcome outcome = NkOutcome::MaxIterations;

  const vector_t& final_x() const { return iterates.back(); }
  double final_residual() const { return residual_norms.back(); }
};

/// A certified root.
struct Root {
  vector_t x;
  double residual = 0.0;
  bool stable = false;
  double jac_min_sv = 0.0;
};

struct SolveReport {
  std::vector<Root> roots;  // sorted lexicographically by coordinates
  int starts_run = 0;
  bool even_count_ok = true;  // stable-root count has even parity

  int stable_count() const;
};

/// Axis-aligned search box, center +- radius in every coordinate.
struct BoxSpec {
  vector_t center;
  double radius = 0.0;
};

struct EnumerateOptions {
  int starts = 128;
  std::optional<BoxSpec> box;      // default: derived from the certifying cone
  NkOptions nk = {};
  double dedup_tol = 1e-6;         // merged when |x-y| <= tol * (1 + |x|)
  int threads = 1;
  int cone_samples = 16;           // functionals sampled for the default box
  std::uint64_t seed = kDefaultSeed;
};

/// Newton-Kantorovich iteration x <- x - P'(x)^{-1} P(x) from x0.
NkTrace nk_iterate(const QopProblem& p, const vector_t& x0,
                   const NkOptions& opts = {});

/// Checks x against the residual tolerance (NotARoot otherwise) and returns
/// the Root record; stability is the invertibility test
/// sigma_min(P'(x)) > n * 1e-8 * |P'(x)|.
Root certify_stability(const QopProblem& p, const vector_t& x,
                       const NkOptions& opts = {});

/// Multistart enumeration of roots from scrambled low-discrepancy starts in
/// the box, one NK run per start, deduplicated and certified.  Results are
/// deterministic for fixed options; `threads` > 1 fans the starts out without
/// changing the output.
SolveReport enumerate_stable(const QopProblem& p,
                             const EnumerateOptions& opts = {});

/// Norm bound for the solution enclosure of an elliptic problem certified by
/// f: with alpha the weighted min eigenvalue at f/|f|,
///   C = (|A| + sqrt(|A|^2 + 4 alpha |b|)) / (2 alpha).
/// Throws NotInCone unless f certifies ellipticity at the given eps_pd.
double ellipsoid_bound(const QopProblem& p, const vector_t& f,
                       double eps_pd = 1e-8);

/// Deterministic sample of strictly interior unit functionals of the
/// certifying cone (the first entry is the classification witness).
/// Throws NotElliptic when the operator fails to classify Elliptic.
std::vector<vector_t> sample_interior_functionals(
    const QuadraticOperator& q, int count, std::uint64_t seed = kDefaultSeed,
    double eps_pd = 1e-8);

/// Membership test for the solution enclosure: true iff f(P(x)) <= 1e-10 for
/// every sampled in-cone functional.  Throws NotElliptic for operators
/// without a certificate.
bool en_membership(const QopProblem& p, const vector_t& x,
                   int cone_samples = 16, std::uint64_t seed = kDefaultSeed);

/// Search box used by enumerate_stable when none is given: center 0 with
/// radius twice the largest sampled ellipsoid bound (elliptic case) or a
/// documented coefficient-based heuristic otherwise.
BoxSpec default_box(const QopProblem& p, int cone_samples = 16,
                    std::uint64_t seed = kDefaultSeed);

/// All real roots of a x^2 + b x + c = 0 as certified Root records: two
/// stable roots for positive discriminant, one non-stable double root when
/// the (monic-normalized) discriminant is within 1e-12 of zero, none when
/// negative.  Throws ZeroLeadingCoefficient when a = 0.
std::vector<Root> solve_1d(double a, double b, double c);

/// Complete real intersection of the two conics of a 2-D problem: a rotated
/// degree-4 resultant eliminates one variable, companion-matrix eigenvalues
/// give candidates, each polished by nk_iterate; merged with a dense
/// multistart pass.  Throws DegenerateResultant when the conics share a
/// component (infinitely many solutions).
SolveReport solve_2d(const QopProblem& p, const EnumerateOptions& opts = {});

}  // namespace eqo
