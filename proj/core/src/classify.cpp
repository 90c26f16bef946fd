#include "eqo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace eqo {

namespace {

// Smallest eigenvalue and its eigenvector of a symmetric matrix.
std::pair<double, vector_t> min_eig_pair(const matrix_t& m) {
  Eigen::SelfAdjointEigenSolver<matrix_t> es(m);
  return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

double min_eig_value(const matrix_t& m) {
  Eigen::SelfAdjointEigenSolver<matrix_t> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

bool lex_less(const vector_t& a, const vector_t& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

vector_t random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  vector_t v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

// Subgradient of mu -> min_eig(sum mu_k A_k) at mu: entries v^T A_k v for the
// bottom eigenvector v.
vector_t subgradient(const QuadraticOperator& q, const vector_t& v) {
  vector_t g(q.n());
  for (int k = 0; k < q.n(); ++k) g[k] = v.dot(q.mat(k) * v);
  return g;
}

struct AscentResult {
  vector_t mu;
  double value;
};

// One projected subgradient ascent pass with the diminishing 1/(1+k) step.
AscentResult ascend(const QuadraticOperator& q, vector_t mu, int iterations) {
  vector_t best_mu = mu;
  double best_val = min_eig_value(q.weighted(mu));
  for (int k = 0; k < iterations; ++k) {
    auto [val, v] = min_eig_pair(q.weighted(mu));
    if (val > best_val || (val == best_val && lex_less(mu, best_mu))) {
      best_val = val;
      best_mu = mu;
    }
    vector_t g = subgradient(q, v);
    double gn = g.norm();
    if (gn < 1e-15) break;
    mu = (mu + (1.0 / (1.0 + k)) * g / gn).normalized();
  }
  double final_val = min_eig_value(q.weighted(mu));
  if (final_val > best_val) {
    best_val = final_val;
    best_mu = mu;
  }
  return {best_mu, best_val};
}

// Geometric step-decay refinement.  Sharp maxima (the generic case at cone
// boundaries) contract linearly under a halving step schedule, which is what
// lets the search separate a zero maximum from a strictly negative one at the
// 1e-8 scale; the plain 1/(1+k) schedule stalls near 1e-4.
AscentResult polish(const QuadraticOperator& q, AscentResult start) {
  vector_t mu = start.mu;
  vector_t best_mu = start.mu;
  double best_val = start.value;
  double rho = 0.25;
  for (int block = 0; block < 46; ++block, rho *= 0.5) {
    mu = best_mu;
    for (int it = 0; it < 30; ++it) {
      auto [val, v] = min_eig_pair(q.weighted(mu));
      if (val > best_val || (val == best_val && lex_less(mu, best_mu))) {
        best_val = val;
        best_mu = mu;
      }
      vector_t g = subgradient(q, v);
      double gn = g.norm();
      if (gn < 1e-15) break;
      mu = (mu + rho * g / gn).normalized();
    }
  }
  return {best_mu, best_val};
}

}  // namespace

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Elliptic: return "elliptic";
    case Kind::Parabolic: return "parabolic";
    case Kind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

double min_eig_weighted(const QuadraticOperator& q, const vector_t& f) {
  if (f.size() != q.n()) throw DimensionError("min_eig_weighted: size mismatch");
  if (f.norm() == 0.0) throw ZeroFunctional("min_eig_weighted: zero functional");
  return min_eig_value(q.weighted(f));
}

bool is_in_cone(const QuadraticOperator& q, const vector_t& f, double eps_pd,
                double* margin_out) {
  if (f.size() != q.n()) throw DimensionError("is_in_cone: size mismatch");
  double nf = f.norm();
  if (nf == 0.0) throw ZeroFunctional("is_in_cone: zero functional");
  const double margin = min_eig_value(q.weighted(f / nf));
  if (margin_out != nullptr) *margin_out = margin;
  return margin > eps_pd;
}

Classification classify(const QuadraticOperator& q, const ClassifyOptions& opts) {
  // Work on coefficients scaled to unit max-abs entry so that eps_pd is an
  // absolute threshold independent of the caller's units.  Margins are
  // reported in this scaled convention.
  const double scale = q.max_abs_entry();
  QuadraticOperator qs = q;
  if (scale > 0.0 && scale != 1.0) {
    std::vector<matrix_t> mats;
    mats.reserve(static_cast<size_t>(q.n()));
    for (const auto& m : q.mats()) mats.push_back(m / scale);
    qs = QuadraticOperator(std::move(mats));
  }

  std::mt19937_64 rng(opts.seed);
  AscentResult best{vector_t::Zero(q.n()), -std::numeric_limits<double>::infinity()};
  int restarts_used = 0;
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    ++restarts_used;
    AscentResult res = ascend(qs, random_unit(rng, q.n()), opts.iterations);
    if (res.value > best.value ||
        (res.value == best.value && lex_less(res.mu, best.mu))) {
      best = res;
    }
    if (opts.early_accept_margin > 0.0 && best.value > opts.early_accept_margin) {
      break;
    }
  }

  const bool early = opts.early_accept_margin > 0.0 &&
                     best.value > opts.early_accept_margin;
  if (opts.polish && !early) best = polish(qs, best);

  // Re-verify the certificate with one final eigensolve at the witness.
  Classification out;
  out.restarts_used = restarts_used;
  out.margin = min_eig_value(qs.weighted(best.mu));
  if (out.margin > opts.eps_pd) {
    out.kind = Kind::Elliptic;
    out.witness = Functional{best.mu};
  } else if (out.margin >= -opts.eps_pd) {
    // Parabolic verdict: cross-check that the witness matrix really is
    // PSD-singular (trace characterization of the degenerate direction).
    matrix_t m = qs.weighted(best.mu);
    Eigen::SelfAdjointEigenSolver<matrix_t> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()[0];
    const double hi = es.eigenvalues()[q.n() - 1];
    if (lo < -10.0 * opts.eps_pd || std::abs(lo) > 10.0 * opts.eps_pd ||
        hi < -opts.eps_pd) {
      // Should not happen given the margin bracket; keep the verdict but
      // mark it heuristic.
      out.heuristic = true;
    }
    out.kind = Kind::Parabolic;
    out.witness = Functional{best.mu};
  } else {
    // No PSD combination found.  This is evidence, not proof, of
    // hyperbolicity: the search is a heuristic on this side.
    out.kind = Kind::Hyperbolic;
    out.heuristic = true;
    out.witness.reset();
  }
  return out;
}

Classification2d classify_2d(const QuadraticOperator& q,
                             const ClassifyOptions& opts) {
  if (q.n() != 2) throw DimensionError("classify_2d requires n = 2");
  const double a1 = q.mat(0)(0, 0), b1 = q.mat(0)(0, 1), c1 = q.mat(0)(1, 1);
  const double a2 = q.mat(1)(0, 0), b2 = q.mat(1)(0, 1), c2 = q.mat(1)(1, 1);
  const double s = std::max({std::abs(a1), std::abs(b1), std::abs(c1),
                             std::abs(a2), std::abs(b2), std::abs(c2), 0.0});
  const double cross_ab = a1 * b2 - a2 * b1;
  const double cross_ac = a1 * c2 - a2 * c1;
  const double cross_bc = b1 * c2 - b2 * c1;
  const double prop_tol = 1e-12 * std::max(1.0, s * s);
  if (std::abs(cross_ab) <= prop_tol && std::abs(cross_ac) <= prop_tol &&
      std::abs(cross_bc) <= prop_tol) {
    throw DegenerateProportional(
        "classify_2d: proportional coefficient rows are outside the "
        "discriminant classification");
  }

  Classification2d out;
  out.delta = cross_ac * cross_ac - 4.0 * cross_ab * cross_bc;
  out.classification = classify(q, opts);

  const double delta_tol = opts.eps_pd * std::max(1.0, s * s * s * s);
  Kind kind = Kind::Parabolic;
  if (out.delta > delta_tol) kind = Kind::Elliptic;
  else if (out.delta < -delta_tol) kind = Kind::Hyperbolic;
  // The discriminant is exact algebra; it wins when the two disagree (which
  // only happens within the eps guard band around the frontier).
  out.classification.kind = kind;
  if (kind == Kind::Hyperbolic) out.classification.witness.reset();
  out.classification.heuristic = (kind == Kind::Hyperbolic);
  return out;
}

int rank_at(const QuadraticOperator& q, const vector_t& f, double rank_tol) {
  if (f.size() != q.n()) throw DimensionError("rank_at: size mismatch");
  if (f.norm() == 0.0) throw ZeroFunctional("rank_at: zero functional");
  Eigen::SelfAdjointEigenSolver<matrix_t> es(q.weighted(f), Eigen::EigenvaluesOnly);
  const vector_t ev = es.eigenvalues();
  const double max_abs = ev.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > rank_tol * max_abs) ++r;
  }
  return r;
}

namespace {

// Boundary point of the certifying cone on the segment from an interior unit
// functional toward g, by bisection on the weighted min eigenvalue.
vector_t bisect_boundary_sphere(const QuadraticOperator& q, const vector_t& mu,
                                vector_t g, int steps = 60) {
  if (min_eig_value(q.weighted(g)) > 0.0) g = -g;
  double lo = 0.0, hi = 1.0;
  auto point = [&](double t) {
    vector_t p = (1.0 - t) * mu + t * g;
    double n = p.norm();
    if (n < 1e-12) p = (mu + 1e-6 * g).normalized();
    else p /= n;
    return p;
  };
  for (int i = 0; i < steps; ++i) {
    double mid = 0.5 * (lo + hi);
    if (min_eig_value(q.weighted(point(mid))) > 0.0) lo = mid;
    else hi = mid;
  }
  return point(lo);
}

// Move y back onto the cone boundary along direction g (the inward normal of
// the active constraint): find s with min_eig(M(y + s g)) = 0 by bracketing
// and bisection.  Returns false when no sign change is found within a few
// doublings of the initial step, which happens when the step left the cone
// past a different face (the caller rejects the step).
bool correct_to_boundary(const QuadraticOperator& q, vector_t& y,
                         const vector_t& g, double step) {
  const double phi0 = min_eig_value(q.weighted(y));
  if (phi0 == 0.0) return true;
  // phi grows along +g, so a negative phi needs s > 0 and vice versa.
  double s = (phi0 < 0.0 ? 1.0 : -1.0) * std::max(step, 1e-18);
  double lo = 0.0, hi = s;
  bool bracketed = false;
  for (int d = 0; d < 10; ++d) {
    if (min_eig_value(q.weighted(y + hi * g)) * phi0 < 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed) return false;
  for (int i = 0; i < 52; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig_value(q.weighted(y + mid * g)) * phi0 < 0.0) hi = mid;
    else lo = mid;
  }
  y += 0.5 * (lo + hi) * g;
  return true;
}

}  // namespace

int estimate_rg(const QuadraticOperator& q, ConeSample* sample_out,
                const RankEstimateOptions& opts) {
  Classification cls = classify(q, opts.classify_opts);
  if (cls.kind != Kind::Elliptic) {
    throw NotElliptic("estimate_rg requires an elliptic operator");
  }
  const vector_t mu = cls.witness->lambda;
  const int n = q.n();

  // Slice normal: the trace vector pairs positively with every functional in
  // the closed cone (it is the sphere average of Q), so <c, f> = 1 cuts a
  // compact cross-section.  Fall back to the witness direction if degenerate.
  vector_t c(n);
  for (int k = 0; k < n; ++k) c[k] = q.mat(k).trace();
  if (c.norm() < 1e-12 || c.dot(mu) <= 1e-12) c = mu;
  c.normalize();

  std::mt19937_64 rng(opts.seed);
  ConeSample sample;
  int best_rank = 0;
  for (int s = 0; s < opts.samples; ++s) {
    vector_t g = random_unit(rng, n);
    vector_t f_b = bisect_boundary_sphere(q, mu, g);

    // Drive the boundary sample toward an extremal ray: maximize a random
    // linear objective over the compact slice of the cone by walking the
    // boundary manifold.  Each step moves in the objective direction
    // projected off the active constraint normal (the outer-product
    // subgradient of the zero eigenvalue) and is corrected back onto the
    // boundary along that normal.  Linear maxima over a compact convex body
    // sit at extreme points; overshoot past a vertex fails the correction
    // and the halving step schedule takes over, so iterates converge to an
    // extremal ray at far better than rank_tol resolution.
    vector_t w = random_unit(rng, n);
    vector_t f = f_b;
    const double denom = c.dot(f_b);
    if (denom > 1e-12) {
      f = f_b / denom;
      vector_t best_f = f;
      double best_obj = w.dot(f);
      double rho = 0.5 * f.norm();
      for (int block = 0; block < 40; ++block, rho *= 0.5) {
        f = best_f;
        for (int it = 0; it < 10; ++it) {
          auto [lv, v] = min_eig_pair(q.weighted(f));
          vector_t g_in = subgradient(q, v);
          g_in -= g_in.dot(c) * c;  // stay on the slice <c,f> = 1
          if (g_in.norm() < 1e-12) break;
          g_in.normalize();
          vector_t d = w - w.dot(c) * c;
          d -= d.dot(g_in) * g_in;
          if (d.norm() < 1e-13) break;  // w points along the normal: optimal
          vector_t y = f + rho * d.normalized();
          if (!correct_to_boundary(q, y, g_in, 0.25 * rho)) break;
          const double obj = w.dot(y);
          if (obj <= best_obj) break;
          best_obj = obj;
          best_f = y;
          f = y;
        }
      }
      f = best_f;
    }
    vector_t f_u = f.normalized();

    double margin = min_eig_value(q.weighted(f_u));
    int r = rank_at(q, f_u, opts.rank_tol);
    best_rank = std::max(best_rank, r);
    sample.functionals.push_back(f_u);
    sample.margins.push_back(margin);
    sample.boundary_flags.push_back(std::abs(margin) <=
                                    opts.classify_opts.eps_pd);
    sample.ranks.push_back(r);
  }
  if (sample_out) *sample_out = std::move(sample);
  return best_rank;
}

QuadraticOperator diag_eqo_for_cone(const matrix_t& basis) {
  const int n = static_cast<int>(basis.rows());
  if (basis.cols() != n || n == 0) {
    throw DimensionError("diag_eqo_for_cone: basis must be square");
  }
  Eigen::JacobiSVD<matrix_t> svd(basis);
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[n - 1];
  if (!(smin > 0.0) || smax / smin >= 1e8) {
    throw SingularBasis("diag_eqo_for_cone: basis condition number >= 1e8");
  }
  const matrix_t w = basis.inverse();
  std::vector<matrix_t> mats(static_cast<size_t>(n), matrix_t::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const vector_t psi = w.row(i).transpose();
      mats[static_cast<size_t>(k)] += w(i, k) * (psi * psi.transpose());
    }
  }
  return QuadraticOperator(std::move(mats));
}

}  // namespace eqo
