#include "eqo/solve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <thread>

namespace eqo {

namespace {

double min_eig_value(const matrix_t& m) {
  Eigen::SelfAdjointEigenSolver<matrix_t> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

bool lex_less_vec(const vector_t& a, const vector_t& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// ---- scrambled Halton sequence -------------------------------------------

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  int candidate = 2;
  while (static_cast<int>(primes.size()) < count) {
    bool is_prime = true;
    for (int p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        is_prime = false;
        break;
      }
    }
    if (is_prime) primes.push_back(candidate);
    ++candidate;
  }
  return primes;
}

double scrambled_radical_inverse(std::uint64_t i, int base,
                                 const std::vector<int>& perm) {
  double inv_base = 1.0 / base;
  double inv = inv_base;
  double value = 0.0;
  while (i > 0) {
    value += perm[i % static_cast<std::uint64_t>(base)] * inv;
    i /= static_cast<std::uint64_t>(base);
    inv *= inv_base;
  }
  return value;
}

std::vector<vector_t> halton_points(int count, int dim, const BoxSpec& box,
                                    std::uint64_t seed) {
  const std::vector<int> primes = first_primes(dim);
  std::vector<std::vector<int>> perms(static_cast<size_t>(dim));
  for (int d = 0; d < dim; ++d) {
    std::vector<int>& perm = perms[static_cast<size_t>(d)];
    perm.resize(static_cast<size_t>(primes[static_cast<size_t>(d)]));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (d + 1)));
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  std::vector<vector_t> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 1; i <= count; ++i) {
    vector_t x(dim);
    for (int d = 0; d < dim; ++d) {
      double u = scrambled_radical_inverse(static_cast<std::uint64_t>(i),
                                           primes[static_cast<size_t>(d)],
                                           perms[static_cast<size_t>(d)]);
      x[d] = box.center[d] + box.radius * (2.0 * u - 1.0);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

}  // namespace

std::string to_string(NkOutcome o) {
  switch (o) {
    case NkOutcome::Converged: return "converged";
    case NkOutcome::SingularJacobian: return "singular-jacobian";
    case NkOutcome::MaxIterations: return "max-iterations";
    case NkOutcome::Diverged: return "diverged";
  }
  return "unknown";
}

int SolveReport::stable_count() const {
  int c = 0;
  for (const auto& r : roots) c += r.stable ? 1 : 0;
  return c;
}

NkTrace nk_iterate(const QopProblem& p, const vector_t& x0,
                   const NkOptions& opts) {
  if (x0.size() != p.n()) throw DimensionError("nk_iterate: start dimension");
  NkTrace trace;
  vector_t x = x0;
  vector_t r = p.eval(x);
  trace.iterates.push_back(x);
  trace.residual_norms.push_back(r.norm());

  for (int step = 0; step < opts.max_iter; ++step) {
    if (trace.residual_norms.back() <= opts.tol_res) {
      trace.outcome = NkOutcome::Converged;
      return trace;
    }
    const matrix_t j = p.jacobian(x);
    Eigen::JacobiSVD<matrix_t> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()[0];
    const double smin = svd.singularValues()[p.n() - 1];
    if (!(smin > 0.0) || smax / smin > opts.jac_cond_limit) {
      trace.outcome = NkOutcome::SingularJacobian;
      return trace;
    }
    vector_t dx;
    if (opts.damping) {
      // Tikhonov-regularized step (exploration aid, never used by the
      // certified paths): (J^T J + mu I) dx = -J^T r.
      const double mu = 1e-8 * smax * smax;
      matrix_t lhs = j.transpose() * j + mu * matrix_t::Identity(p.n(), p.n());
      dx = -lhs.ldlt().solve(j.transpose() * r);
    } else {
      dx = -svd.solve(r);
    }
    x += dx;
    r = p.eval(x);
    trace.iterates.push_back(x);
    trace.residual_norms.push_back(r.norm());
    if (x.norm() > opts.diverge_norm) {
      trace.outcome = NkOutcome::Diverged;
      return trace;
    }
    if (dx.norm() <= opts.tol_step) break;
  }
  trace.outcome = trace.residual_norms.back() <= opts.tol_res
                      ? NkOutcome::Converged
                      : NkOutcome::MaxIterations;
  return trace;
}

Root certify_stability(const QopProblem& p, const vector_t& x,
                       const NkOptions& opts) {
  if (x.size() != p.n()) throw DimensionError("certify_stability: dimension");
  Root root;
  root.x = x;
  root.residual = p.eval(x).norm();
  if (root.residual > opts.tol_res) {
    throw NotARoot("certify_stability: residual exceeds tolerance");
  }
  Eigen::JacobiSVD<matrix_t> svd(p.jacobian(x));
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[p.n() - 1];
  root.jac_min_sv = smin;
  root.stable = smin > static_cast<double>(p.n()) * 1e-8 * smax;
  return root;
}

double ellipsoid_bound(const QopProblem& p, const vector_t& f, double eps_pd) {
  if (f.size() != p.n()) throw DimensionError("ellipsoid_bound: size mismatch");
  const double nf = f.norm();
  if (nf == 0.0) throw ZeroFunctional("ellipsoid_bound: zero functional");
  const double alpha = min_eig_value(p.q.weighted(f / nf));
  if (alpha <= eps_pd) {
    throw NotInCone("ellipsoid_bound: functional does not certify ellipticity");
  }
  const double na = spectral_norm(p.lin);
  const double nb = p.offset.norm();
  return (na + std::sqrt(na * na + 4.0 * alpha * nb)) / (2.0 * alpha);
}

std::vector<vector_t> sample_interior_functionals(const QuadraticOperator& q,
                                                  int count,
                                                  std::uint64_t seed,
                                                  double eps_pd) {
  Classification cls = classify(q);
  if (cls.kind != Kind::Elliptic) {
    throw NotElliptic("sample_interior_functionals: operator not elliptic");
  }
  const vector_t mu = cls.witness->lambda;
  const int n = q.n();
  std::vector<vector_t> fs;
  fs.push_back(mu);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.15, 0.85);
  int attempts = 0;
  while (static_cast<int>(fs.size()) < count && attempts < 100 * count) {
    ++attempts;
    vector_t g(n);
    for (int i = 0; i < n; ++i) g[i] = gauss(rng);
    if (g.norm() < 1e-12) continue;
    g.normalize();
    const double u = unif(rng);

    auto point = [&](double t) {
      vector_t pnt = (1.0 - t) * mu + t * g;
      double nn = pnt.norm();
      return nn < 1e-12 ? mu : vector_t(pnt / nn);
    };
    double margin_g = min_eig_value(q.weighted(g));
    vector_t f;
    if (margin_g > 10.0 * eps_pd) {
      f = g;
    } else {
      // Bisect from the witness toward g for the cone boundary, then back
      // off into the interior by the random fraction u.
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if (min_eig_value(q.weighted(point(mid))) > 0.0) lo = mid;
        else hi = mid;
      }
      double t = u * lo;
      f = point(t);
      int halvings = 0;
      while (min_eig_value(q.weighted(f)) <= eps_pd && halvings < 60) {
        t *= 0.5;
        f = point(t);
        ++halvings;
      }
    }
    if (min_eig_value(q.weighted(f)) > eps_pd) fs.push_back(f);
  }
  return fs;
}

bool en_membership(const QopProblem& p, const vector_t& x, int cone_samples,
                   std::uint64_t seed) {
  if (x.size() != p.n()) throw DimensionError("en_membership: dimension");
  const auto fs = sample_interior_functionals(p.q, cone_samples, seed);
  const vector_t px = p.eval(x);
  for (const auto& f : fs) {
    if (f.dot(px) > 1e-10) return false;
  }
  return true;
}

BoxSpec default_box(const QopProblem& p, int cone_samples, std::uint64_t seed) {
  BoxSpec box;
  box.center = vector_t::Zero(p.n());
  Classification cls = classify(p.q);
  if (cls.kind == Kind::Elliptic) {
    double worst = 0.0;
    for (const auto& f : sample_interior_functionals(p.q, cone_samples, seed)) {
      worst = std::max(worst, ellipsoid_bound(p, f));
    }
    box.radius = std::max(2.0 * worst, 1e-3);
  } else {
    // No enclosure certificate; fall back to a coefficient-scale heuristic.
    box.radius = 10.0 * (1.0 + p.offset.norm() + spectral_norm(p.lin));
  }
  return box;
}

namespace {

struct MergeSlot {
  vector_t x;
  double residual;
};

void merge_candidate(std::vector<MergeSlot>& kept, const vector_t& x,
                     double residual, double tol) {
  for (auto& k : kept) {
    if ((x - k.x).norm() <= tol * (1.0 + k.x.norm())) {
      if (residual < k.residual) {
        k.x = x;
        k.residual = residual;
      }
      return;
    }
  }
  kept.push_back({x, residual});
}

SolveReport finish_report(const QopProblem& p,
                          const std::vector<MergeSlot>& kept, int starts_run,
                          const NkOptions& nk) {
  SolveReport report;
  report.starts_run = starts_run;
  for (const auto& k : kept) {
    report.roots.push_back(certify_stability(p, k.x, nk));
  }
  std::sort(report.roots.begin(), report.roots.end(),
            [](const Root& a, const Root& b) { return lex_less_vec(a.x, b.x); });
  report.even_count_ok = report.stable_count() % 2 == 0;
  return report;
}

}  // namespace

SolveReport enumerate_stable(const QopProblem& p, const EnumerateOptions& opts) {
  if (opts.starts < 1) {
    throw PreconditionViolated("enumerate_stable: starts must be at least 1");
  }
  const int n = p.n();
  const BoxSpec box =
      opts.box ? *opts.box : default_box(p, opts.cone_samples, opts.seed);
  if (box.center.size() != n) throw DimensionError("enumerate_stable: box");
  const int starts = opts.starts;
  const auto pts = halton_points(starts, n, box, opts.seed);

  std::vector<NkTrace> traces(static_cast<size_t>(starts));
  const int threads = std::clamp(opts.threads, 1, 64);
  if (threads <= 1 || starts < 2) {
    for (int i = 0; i < starts; ++i) {
      traces[static_cast<size_t>(i)] = nk_iterate(p, pts[static_cast<size_t>(i)], opts.nk);
    }
  } else {
    // Fan the independent NK runs out; results land in preallocated slots so
    // the merge below is oblivious to scheduling.
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < starts; i = next.fetch_add(1)) {
          traces[static_cast<size_t>(i)] =
              nk_iterate(p, pts[static_cast<size_t>(i)], opts.nk);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<MergeSlot> kept;
  for (int i = 0; i < starts; ++i) {
    const NkTrace& tr = traces[static_cast<size_t>(i)];
    if (tr.outcome != NkOutcome::Converged) continue;
    merge_candidate(kept, tr.final_x(), tr.final_residual(), opts.dedup_tol);
  }
  return finish_report(p, kept, starts, opts.nk);
}

std::vector<Root> solve_1d(double a, double b, double c) {
  if (a == 0.0) throw ZeroLeadingCoefficient("solve_1d: leading coefficient");
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  QuadraticOperator q({matrix_t::Constant(1, 1, a / scale)});
  QopProblem problem(std::move(q), matrix_t::Constant(1, 1, b / scale),
                     vector_t::Constant(1, c / scale));

  const double bm = b / a;
  const double cm = c / a;
  const double disc = bm * bm - 4.0 * cm;
  std::vector<double> xs;
  if (std::abs(disc) <= 1e-12) {
    xs.push_back(-bm / 2.0);
  } else if (disc > 0.0) {
    const double r = std::sqrt(disc);
    // Numerically stable quadratic formula.
    const double qv = -(bm + (bm >= 0.0 ? r : -r)) / 2.0;
    double x1 = qv;
    double x2 = qv != 0.0 ? cm / qv : 0.0;
    if (x1 > x2) std::swap(x1, x2);
    xs = {x1, x2};
  }
  std::vector<Root> roots;
  for (double x : xs) {
    roots.push_back(certify_stability(problem, vector_t::Constant(1, x)));
  }
  return roots;
}

// ---- 2-D resultant sweep ---------------------------------------------------

namespace {

// Dense univariate polynomial, coefficients from degree 0 upward.
struct Poly {
  std::vector<double> c;

  static Poly zero() { return Poly{{0.0}}; }
  double max_abs() const {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
  }
  double eval(double x) const {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
};

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) out.c[i] -= b.c[i];
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  out.c.resize(a.c.size() + b.c.size() - 1, 0.0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  }
  return out;
}

Poly scale_poly(const Poly& a, double s) {
  Poly out = a;
  for (double& v : out.c) v *= s;
  return out;
}

// Real roots via the companion matrix; eigenvalues with small imaginary part
// count as real.
std::vector<double> real_roots(Poly p, double zero_tol) {
  // Trim negligible leading coefficients.
  const double m = p.max_abs();
  size_t deg = p.c.size();
  while (deg > 1 && std::abs(p.c[deg - 1]) <= std::max(zero_tol, 1e-12 * m)) {
    --deg;
  }
  p.c.resize(deg);
  const int d = static_cast<int>(deg) - 1;
  std::vector<double> roots;
  if (d <= 0) return roots;
  if (d == 1) {
    roots.push_back(-p.c[0] / p.c[1]);
    return roots;
  }
  matrix_t companion = matrix_t::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) {
    companion(i, d - 1) = -p.c[static_cast<size_t>(i)] / p.c[static_cast<size_t>(d)];
  }
  // The companion matrix above is for column convention; transpose is fine
  // either way since eigenvalues agree.
  Eigen::EigenSolver<matrix_t> es(companion);
  for (int i = 0; i < d; ++i) {
    const std::complex<double> z = es.eigenvalues()[i];
    if (std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z.real()))) {
      roots.push_back(z.real());
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Coefficient view of P_k as a polynomial in x2:
//   P_k = alpha x2^2 + beta(x1) x2 + gamma(x1).
struct Slice {
  double alpha = 0.0;
  Poly beta;   // degree <= 1 in x1
  Poly gamma;  // degree <= 2 in x1
  int deg = 0;
};

Slice make_slice(const QopProblem& p, int k, double ztol) {
  const matrix_t& a = p.q.mat(k);
  Slice s;
  s.alpha = a(1, 1);
  s.beta = Poly{{p.lin(k, 1), 2.0 * a(0, 1)}};
  s.gamma = Poly{{p.offset[k], p.lin(k, 0), a(0, 0)}};
  if (std::abs(s.alpha) > ztol) s.deg = 2;
  else if (s.beta.max_abs() > ztol) s.deg = 1;
  else s.deg = 0;
  if (s.deg < 2) s.alpha = 0.0;
  return s;
}

// Real roots of P_k(x1*, .) as a univariate polynomial in x2.
std::vector<double> roots_in_x2(const Slice& s, double x1, double ztol) {
  Poly uni{{s.gamma.eval(x1), s.beta.eval(x1), s.alpha}};
  return real_roots(uni, ztol);
}

}  // namespace

SolveReport solve_2d(const QopProblem& p, const EnumerateOptions& opts) {
  if (p.n() != 2) throw DimensionError("solve_2d requires n = 2");
  double scale = std::max(1.0, p.q.max_abs_entry());
  scale = std::max(scale, p.lin.cwiseAbs().maxCoeff());
  scale = std::max(scale, p.offset.cwiseAbs().maxCoeff());
  const double ztol = 1e-13 * scale;

  Slice s1 = make_slice(p, 0, ztol);
  Slice s2 = make_slice(p, 1, ztol);
  if (s1.deg < s2.deg) std::swap(s1, s2);

  std::vector<std::pair<double, double>> candidates;
  auto add_candidates_for_x1 = [&](double x1) {
    std::vector<double> x2s = roots_in_x2(s1, x1, ztol);
    const std::vector<double> extra = roots_in_x2(s2, x1, ztol);
    x2s.insert(x2s.end(), extra.begin(), extra.end());
    for (double x2 : x2s) {
      if (std::abs(x1) < 1e10 && std::abs(x2) < 1e10) {
        candidates.emplace_back(x1, x2);
      }
    }
  };

  if (s2.deg == 0) {
    // The second equation does not involve x2 at all.
    if (s2.gamma.max_abs() <= ztol) {
      throw DegenerateResultant("solve_2d: one equation vanishes identically");
    }
    for (double x1 : real_roots(s2.gamma, ztol)) {
      if (s1.deg == 0) {
        if (std::abs(s1.gamma.eval(x1)) <= 1e-8 * std::max(1.0, scale)) {
          throw DegenerateResultant(
              "solve_2d: neither equation constrains x2 at a shared x1 root");
        }
        continue;
      }
      add_candidates_for_x1(x1);
    }
  } else {
    Poly res;
    if (s1.deg == 2 && s2.deg == 2) {
      const Poly a1g2_a2g1 =
          scale_poly(s2.gamma, s1.alpha) - scale_poly(s1.gamma, s2.alpha);
      const Poly a1b2_a2b1 =
          scale_poly(s2.beta, s1.alpha) - scale_poly(s1.beta, s2.alpha);
      const Poly b1g2_b2g1 = s1.beta * s2.gamma - s2.beta * s1.gamma;
      res = a1g2_a2g1 * a1g2_a2g1 - a1b2_a2b1 * b1g2_b2g1;
    } else if (s1.deg == 2 && s2.deg == 1) {
      res = scale_poly(s2.gamma * s2.gamma, s1.alpha) -
            s1.beta * s2.beta * s2.gamma + s1.gamma * (s2.beta * s2.beta);
    } else {  // (1,1)
      res = s1.beta * s2.gamma - s2.beta * s1.gamma;
    }
    const double res_scale = std::max(1.0, scale * scale * scale * scale);
    if (res.max_abs() <= 1e-12 * res_scale) {
      throw DegenerateResultant(
          "solve_2d: resultant vanishes identically (shared component)");
    }
    for (double x1 : real_roots(res, 1e-12 * res_scale)) {
      add_candidates_for_x1(x1);
    }
  }

  // Polish every candidate; keep converged endpoints, or the raw point when
  // it already meets the residual tolerance (tangential intersections).
  std::vector<MergeSlot> kept;
  for (const auto& [x1, x2] : candidates) {
    vector_t x(2);
    x << x1, x2;
    const NkTrace tr = nk_iterate(p, x, opts.nk);
    if (tr.outcome == NkOutcome::Converged) {
      merge_candidate(kept, tr.final_x(), tr.final_residual(), opts.dedup_tol);
    } else if (p.eval(x).norm() <= opts.nk.tol_res) {
      merge_candidate(kept, x, p.eval(x).norm(), opts.dedup_tol);
    }
  }

  // Dense multistart pass merged on top: the sweep is algebraically complete,
  // the multistart is the safety net that ties it back to enumerate_stable.
  EnumerateOptions dense = opts;
  dense.starts = std::max(2 * opts.starts, 32);
  SolveReport multistart = enumerate_stable(p, dense);
  for (const auto& r : multistart.roots) {
    merge_candidate(kept, r.x, r.residual, opts.dedup_tol);
  }

  SolveReport report = finish_report(p, kept, multistart.starts_run, opts.nk);
  return report;
}

}  // namespace eqo
