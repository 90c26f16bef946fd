#include "eqo/rank1.hpp"

#include <algorithm>
#include <cmath>

namespace eqo {

namespace {

void check_shape(const Rank1Problem& p) {
  if (p.rhs.size() == 0 || p.coef.rows() != p.rhs.size() ||
      p.coef.cols() != p.rhs.size()) {
    throw DimensionError("rank1 problem: coef must be n x n matching rhs");
  }
}

}  // namespace

QopProblem to_problem(const Rank1Problem& p) {
  check_shape(p);
  return QopProblem(QuadraticOperator::diag_squares(p.n()), -p.coef, -p.rhs);
}

Rank1Certificate check_condition(const Rank1Problem& p) {
  check_shape(p);
  Rank1Certificate cert;
  cert.column_sign_ok = true;
  for (int j = 0; j < p.n(); ++j) {
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < p.n(); ++i) {
      if (p.coef(i, j) > 0.0) has_pos = true;
      if (p.coef(i, j) < 0.0) has_neg = true;
    }
    if (has_pos && has_neg) cert.column_sign_ok = false;
  }
  cert.m = 0.0;
  for (int j = 0; j < p.n(); ++j) {
    double col_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.n(); ++i) {
      col_min = std::min(col_min, std::abs(p.coef(i, j)));
    }
    cert.m += col_min;
  }
  cert.beta = p.rhs.minCoeff();
  cert.condition_value = cert.m * cert.m + 4.0 * cert.beta;
  cert.holds = cert.column_sign_ok && cert.condition_value > 0.0;
  return cert;
}

SignNormalized sign_normalize(const Rank1Problem& p) {
  check_shape(p);
  SignNormalized out;
  out.signs = vector_t::Ones(p.n());
  for (int j = 0; j < p.n(); ++j) {
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < p.n(); ++i) {
      if (p.coef(i, j) > 0.0) has_pos = true;
      if (p.coef(i, j) < 0.0) has_neg = true;
    }
    if (has_pos && has_neg) {
      throw MixedSignColumn("sign_normalize: column carries both signs");
    }
    // Zero columns keep +1 by convention.
    out.signs[j] = has_neg ? -1.0 : 1.0;
  }
  out.problem.coef = p.coef * out.signs.asDiagonal();
  out.problem.rhs = p.rhs;
  return out;
}

StartPoint guaranteed_start(const Rank1Problem& p) {
  check_shape(p);
  if ((p.coef.array() < 0.0).any()) {
    throw NotNormalized("guaranteed_start: coefficients must be nonnegative");
  }
  StartPoint sp;
  sp.M = p.coef.rowwise().sum().maxCoeff();
  sp.b_max = p.rhs.maxCoeff();
  const double disc = sp.M * sp.M + 4.0 * sp.b_max;
  const double base = disc >= 0.0 ? (sp.M + std::sqrt(disc)) / 2.0 : sp.M;
  sp.alpha = base * 1.001;
  if (sp.alpha == 0.0) sp.alpha = 1e-3;
  return sp;
}

Root solve_sup(const Rank1Problem& p, const NkOptions& nk) {
  const Rank1Certificate cert = check_condition(p);
  if (!cert.holds) {
    throw ConditionNotMet("solve_sup: solvability certificate does not hold");
  }
  const SignNormalized sn = sign_normalize(p);
  const StartPoint sp = guaranteed_start(sn.problem);
  const QopProblem normalized = to_problem(sn.problem);
  const vector_t x0 = vector_t::Constant(p.n(), sp.alpha);
  const NkTrace trace = nk_iterate(normalized, x0, nk);
  if (trace.outcome != NkOutcome::Converged) {
    throw TheoremViolation(
        "solve_sup: certified start failed to converge (outcome " +
        to_string(trace.outcome) + ")");
  }
  // Map back: x_original = signs .* x_normalized.  Residuals and stability
  // are invariant under the sign flip, so certify in original coordinates.
  const vector_t x = sn.signs.asDiagonal() * trace.final_x();
  return certify_stability(to_problem(p), x, nk);
}

Rank1Report solve_rank1(const Rank1Problem& p, const EnumerateOptions& opts) {
  Rank1Report out;
  out.certificate = check_condition(p);
  if (out.certificate.holds) {
    try {
      out.sup_root = solve_sup(p, opts.nk);
    } catch (const TheoremViolation&) {
      out.theorem_violation = true;
    }
  }
  out.report = enumerate_stable(to_problem(p), opts);
  if (out.sup_root) {
    // Make sure the certified supremum root is present even if the
    // multistart missed it.
    bool found = false;
    for (const auto& r : out.report.roots) {
      if ((r.x - out.sup_root->x).norm() <=
          opts.dedup_tol * (1.0 + r.x.norm())) {
        found = true;
        break;
      }
    }
    if (!found) {
      out.report.roots.push_back(*out.sup_root);
      std::sort(out.report.roots.begin(), out.report.roots.end(),
                [](const Root& a, const Root& b) {
                  for (Eigen::Index i = 0; i < a.x.size(); ++i) {
                    if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
                  }
                  return false;
                });
      out.report.even_count_ok = out.report.stable_count() % 2 == 0;
    }
  }
  if (out.certificate.holds) {
    if (out.report.stable_count() < 2) out.theorem_violation = true;
    if (out.sup_root) {
      // Dominance in normalized coordinates: the sup root must majorize
      // every enumerated root.
      const SignNormalized sn = sign_normalize(p);
      const vector_t ys = sn.signs.asDiagonal() * out.sup_root->x;
      for (const auto& r : out.report.roots) {
        const vector_t yr = sn.signs.asDiagonal() * r.x;
        if (((ys - yr).array() < -1e-8).any()) out.theorem_violation = true;
      }
    }
  }
  return out;
}

bool sup_lattice_check(const Rank1Problem& p, const vector_t& x,
                       const vector_t& y) {
  check_shape(p);
  if ((p.coef.array() < 0.0).any()) {
    throw NotNormalized("sup_lattice_check: problem must be sign-normalized");
  }
  if (x.size() != p.n() || y.size() != p.n()) {
    throw DimensionError("sup_lattice_check: point dimension");
  }
  const double slack =
      1e-12 * std::max(1.0, std::max(p.coef.cwiseAbs().maxCoeff(),
                                     p.rhs.cwiseAbs().maxCoeff()));
  auto in_enclosure = [&](const vector_t& z) {
    const vector_t bound = p.coef * z + p.rhs;
    return ((z.array().square() - bound.array()) <= slack).all();
  };
  if (!in_enclosure(x) || !in_enclosure(y)) {
    throw PreconditionViolated("sup_lattice_check: points must lie in E");
  }
  return in_enclosure(x.cwiseMax(y));
}

}  // namespace eqo
