#include "eqo/hammerstein.hpp"

#include <algorithm>
#include <cmath>

namespace eqo {

namespace {

void validate(const GoursatSpec& spec) {
  const auto n = spec.grid.size();
  if (n < 2) throw GridTooCoarse("goursat spec: need at least two grid points");
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(spec.grid[i + 1] > spec.grid[i])) {
      throw NonIncreasingGrid("goursat spec: grid must strictly increase");
    }
  }
  if (spec.n_basis < 1) throw DimensionError("goursat spec: n_basis must be >= 1");
  auto check_family = [&](const std::vector<vector_t>& fam, const char* name) {
    if (static_cast<int>(fam.size()) != spec.n_basis) {
      throw DimensionError(std::string("goursat spec: family ") + name +
                           " must have n_basis entries");
    }
    for (const auto& g : fam) {
      if (g.size() != n) {
        throw DimensionError(std::string("goursat spec: samples of ") + name +
                             " must match the grid");
      }
    }
  };
  check_family(spec.a, "a");
  check_family(spec.b, "b");
  check_family(spec.c, "c");
  check_family(spec.d, "d");
  check_family(spec.e, "e");
  if (spec.f.size() != n) {
    throw DimensionError("goursat spec: free term must match the grid");
  }
}

vector_t family_sum(const std::vector<vector_t>& fam, Eigen::Index n) {
  vector_t s = vector_t::Zero(n);
  for (const auto& g : fam) s += g;
  return s;
}

// Gauss-Legendre nodes/weights on [-1, 1] via the Golub-Welsch tridiagonal
// eigenproblem.
void gauss_legendre(int k, vector_t& nodes, vector_t& weights) {
  matrix_t jac = matrix_t::Zero(k, k);
  for (int i = 1; i < k; ++i) {
    const double bi = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = bi;
    jac(i - 1, i) = bi;
  }
  Eigen::SelfAdjointEigenSolver<matrix_t> es(jac);
  nodes = es.eigenvalues();
  weights.resize(k);
  for (int i = 0; i < k; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v0 * v0;
  }
}

// Barycentric Lagrange interpolation of grid samples at the point x.
// Weights are passed pre-normalized; exact grid hits short-circuit.
double barycentric_eval(const vector_t& grid, const vector_t& bary,
                        const vector_t& samples, double x) {
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double dx = x - grid[i];
    if (dx == 0.0) return samples[i];
    const double t = bary[i] / dx;
    num += t * samples[i];
    den += t;
  }
  return num / den;
}

vector_t barycentric_weights(const vector_t& grid) {
  const Eigen::Index n = grid.size();
  // Work in log space to keep long products representable, then normalize;
  // the barycentric formula is invariant under a common scale.
  vector_t logw(n);
  std::vector<int> sign(static_cast<size_t>(n), 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    int s = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = grid[i] - grid[j];
      acc += std::log(std::abs(d));
      if (d < 0.0) s = -s;
    }
    logw[i] = -acc;
    sign[static_cast<size_t>(i)] = s;
  }
  const double shift = logw.maxCoeff();
  vector_t w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = sign[static_cast<size_t>(i)] * std::exp(logw[i] - shift);
  }
  return w;
}

}  // namespace

double inner_product(const vector_t& grid, const vector_t& u, const vector_t& v,
                     const Quadrature& quad) {
  const Eigen::Index n = grid.size();
  if (n < 2) throw GridTooCoarse("inner_product: need at least two grid points");
  if (u.size() != n || v.size() != n) {
    throw DimensionError("inner_product: samples must match the grid");
  }
  if (quad.kind == Quadrature::Kind::Trapezoid) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const double h = grid[i + 1] - grid[i];
      acc += 0.5 * h * (u[i] * v[i] + u[i + 1] * v[i + 1]);
    }
    return acc;
  }
  const int k = quad.gauss_order;
  if (k < 1 || k > 64) {
    throw OutOfRange("inner_product: gauss order must be in 1..64");
  }
  vector_t nodes, weights;
  gauss_legendre(k, nodes, weights);
  const double lo = grid[0], hi = grid[n - 1];
  const vector_t bary = barycentric_weights(grid);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[i];
    const double w = 0.5 * (hi - lo) * weights[i];
    acc += w * barycentric_eval(grid, bary, u, x) *
           barycentric_eval(grid, bary, v, x);
  }
  return acc;
}

ReducedProblem reduce(const GoursatSpec& spec, const Quadrature& quad) {
  validate(spec);
  const int n = spec.n_basis;
  const int dim = 3 * n;
  const Eigen::Index g = spec.grid.size();

  const vector_t c_sum = family_sum(spec.c, g);
  const vector_t e_sum = family_sum(spec.e, g);

  ReducedProblem out;
  out.n_basis = n;
  out.gamma.resize(dim);
  out.eta.resize(dim);
  out.phi.resize(dim);
  for (int r = 0; r < dim; ++r) {
    const vector_t& w = r < n           ? spec.a[static_cast<size_t>(r)]
                        : r < 2 * n     ? spec.b[static_cast<size_t>(r - n)]
                                        : spec.d[static_cast<size_t>(r - 2 * n)];
    out.gamma[r] = inner_product(spec.grid, w, c_sum, quad);
    out.eta[r] = inner_product(spec.grid, w, e_sum, quad);
    out.phi[r] = inner_product(spec.grid, w, spec.f, quad);
  }

  // Row r of the quadratic part is gamma_r * U * V with U, V the sums of the
  // first and second blocks: the coefficient matrix is gamma_r times the
  // symmetrized block indicator.
  std::vector<matrix_t> mats(static_cast<size_t>(dim), matrix_t::Zero(dim, dim));
  for (int r = 0; r < dim; ++r) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        mats[static_cast<size_t>(r)](i, n + j) = 0.5 * out.gamma[r];
        mats[static_cast<size_t>(r)](n + j, i) = 0.5 * out.gamma[r];
      }
    }
  }
  matrix_t lin = -matrix_t::Identity(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int i = 0; i < n; ++i) lin(r, 2 * n + i) += out.eta[r];
  }
  out.problem = QopProblem(QuadraticOperator(std::move(mats)), std::move(lin),
                           out.phi);
  return out;
}

vector_t reconstruct(const GoursatSpec& spec, const vector_t& root) {
  validate(spec);
  const int n = spec.n_basis;
  if (root.size() != 3 * n) {
    throw DimensionError("reconstruct: root must have dimension 3 n_basis");
  }
  const double u = root.segment(0, n).sum();
  const double v = root.segment(n, n).sum();
  const double w = root.segment(2 * n, n).sum();
  const Eigen::Index g = spec.grid.size();
  return u * v * family_sum(spec.c, g) + w * family_sum(spec.e, g) + spec.f;
}

HammersteinReport solve_hammerstein(const GoursatSpec& spec,
                                    const Quadrature& quad,
                                    const EnumerateOptions& opts) {
  HammersteinReport out;
  out.reduced = reduce(spec, quad);
  // The reduced operator concentrates all curvature in one rank-2 block, so
  // it is never elliptic; the verdict is reported for diagnostics only.
  out.reduced_classification = classify(out.reduced.problem.q);

  EnumerateOptions run = opts;
  if (!run.box) {
    BoxSpec box;
    box.center = vector_t::Zero(out.reduced.problem.n());
    box.radius = 10.0 * (1.0 + out.reduced.problem.offset.norm() +
                         spectral_norm(out.reduced.problem.lin));
    run.box = box;
  }
  out.report = enumerate_stable(out.reduced.problem, run);
  for (const auto& root : out.report.roots) {
    out.reconstructions.push_back(reconstruct(spec, root.x));
  }
  return out;
}

}  // namespace eqo
