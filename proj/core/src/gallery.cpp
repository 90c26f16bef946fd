#include "eqo/gallery.hpp"

#include <cmath>
#include <random>

#include "eqo/errors.hpp"

namespace eqo {

namespace {

matrix_t zero_mat(int n) { return matrix_t::Zero(n, n); }

// Symmetric matrix with 1 at (i,j) and (j,i); 1 on the diagonal when i==j.
// xT M x then contributes x_i^2 (i==j) or 2*x_i*x_j, so cross terms like
// 2*x_1*x_3 are encoded with unit(i,j) directly.
matrix_t unit(int n, int i, int j) {
  matrix_t m = zero_mat(n);
  m(i, j) += 1.0;
  m(j, i) += 1.0;
  if (i == j) m(i, i) = 1.0;
  return m;
}

QopProblem homogeneous(std::vector<matrix_t> mats) {
  const int n = static_cast<int>(mats.size());
  return QopProblem{QuadraticOperator(std::move(mats)), matrix_t::Zero(n, n),
                    vector_t::Zero(n)};
}

vector_t vec2(double a, double b) {
  vector_t v(2);
  v << a, b;
  return v;
}

GalleryEntry make_discriminant(int which) {
  GalleryEntry e;
  // Shared first matrix x_1^2; the family differs in the remaining data.
  switch (which) {
    case 0: {
      e.id = "discriminant-elliptic";
      e.title = "Plane operator (x1^2, x2^2)";
      e.problem = homogeneous({unit(2, 0, 0), unit(2, 1, 1)});
      e.expected_kind = Kind::Elliptic;
      e.expected_delta = 1.0;
      e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
      e.notes = "Discriminant value 1; certifying cone is the open positive quadrant.";
      break;
    }
    case 1: {
      e.id = "discriminant-parabolic";
      e.title = "Plane operator (x1^2, x1*x2)";
      matrix_t a2 = zero_mat(2);
      a2(0, 1) = a2(1, 0) = 0.5;
      e.problem = homogeneous({unit(2, 0, 0), a2});
      e.expected_kind = Kind::Parabolic;
      e.expected_delta = 0.0;
      e.notes = "Discriminant value 0; best functional reaches a positive semidefinite "
                "singular combination.";
      break;
    }
    default: {
      e.id = "discriminant-hyperbolic";
      e.title = "Plane operator (x1^2 - x2^2, x1*x2)";
      matrix_t a1 = zero_mat(2);
      a1(0, 0) = 1.0;
      a1(1, 1) = -1.0;
      matrix_t a2 = zero_mat(2);
      a2(0, 1) = a2(1, 0) = 0.5;
      e.problem = homogeneous({a1, a2});
      e.expected_kind = Kind::Hyperbolic;
      e.expected_delta = -1.0;
      e.notes = "Discriminant value -1; every weighted combination is indefinite.";
      break;
    }
  }
  e.provenance = "classical two-dimensional discriminant family";
  return e;
}

std::vector<GalleryEntry> build_catalog() {
  std::vector<GalleryEntry> out;

  out.push_back(make_discriminant(0));
  out.push_back(make_discriminant(1));
  out.push_back(make_discriminant(2));

  {
    GalleryEntry e;
    e.id = "stein-ulam";
    e.title = "Stein-Ulam quadratic map";
    e.provenance = "Stein-Ulam operator on R^3";
    matrix_t a1 = unit(3, 0, 0);
    a1(0, 1) = a1(1, 0) = 1.0;  // x1^2 + 2*x1*x2
    matrix_t a2 = unit(3, 1, 1);
    a2(1, 2) = a2(2, 1) = 1.0;  // x2^2 + 2*x2*x3
    matrix_t a3 = unit(3, 2, 2);
    a3(0, 2) = a3(2, 0) = 1.0;  // x3^2 + 2*x1*x3
    e.problem = homogeneous({a1, a2, a3});
    e.expected_kind = Kind::Parabolic;
    vector_t w(3);
    w << 1.0, 1.0, 1.0;
    e.expected_witness = w / w.norm();
    e.notes = "No functional yields a positive definite combination, but the uniform "
              "weights give the rank-one form (x1+x2+x3)^2.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-on-r3";
    e.title = "Coupled-squares operator on R^3";
    e.provenance = "three-dimensional member of a coupled-squares family";
    matrix_t a3 = zero_mat(3);
    a3(0, 2) = a3(2, 0) = 1.0;
    a3(1, 2) = a3(2, 1) = 1.0;  // 2*x3*(x1+x2)
    matrix_t a1 = zero_mat(3);
    a1(0, 0) = a1(2, 2) = 1.0;  // x1^2 + x3^2
    matrix_t a2 = zero_mat(3);
    a2(1, 1) = a2(2, 2) = 1.0;  // x2^2 + x3^2
    e.problem = homogeneous({a1, a2, a3});
    e.expected_kind = Kind::Elliptic;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(1) > 0 && f(2) * f(2) < f(0) * f(1);
    };
    e.notes = "Certifying cone has the closed form l1>0, l2>0, l3^2 < l1*l2; the "
              "uniform direction (1,1,1) sits exactly on the boundary.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-a";
    e.title = "Decoupled system x1^2 = x1, x2^2 = x2";
    e.provenance = "unit-square vertex system";
    e.problem = QopProblem{QuadraticOperator::diag_squares(2),
                           -matrix_t::Identity(2, 2), vector_t::Zero(2)};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(0, 0), vec2(0, 1), vec2(1, 0), vec2(1, 1)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "The solution enclosure is the unit square; its four vertices are "
              "exactly the stable solutions.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-b";
    e.title = "Swap system x1^2 = x2, x2^2 = x1";
    e.provenance = "two-dimensional swap system";
    matrix_t lin = zero_mat(2);
    lin(0, 1) = -1.0;
    lin(1, 0) = -1.0;
    e.problem =
        QopProblem{QuadraticOperator::diag_squares(2), lin, vector_t::Zero(2)};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(0, 0), vec2(1, 1)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "The enclosure is the lens between the two parabolas; only its two "
              "corner points solve the system.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-15-unsolvable";
    e.title = "Triangular system without real solutions";
    e.provenance = "triangular three-variable system";
    matrix_t lin = zero_mat(3);
    lin(0, 1) = -1.0;  // x1^2 - x2 = 0
    lin(2, 1) = 1.0;   // x3^2 + x2 - 1 = 0
    vector_t off(3);
    off << 0.0, -2.0, -1.0;  // x2^2 - 2 = 0
    e.problem = QopProblem{QuadraticOperator::diag_squares(3), lin, off};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;  // expectation: no stable roots at all
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(1) > 0 && f(2) > 0;
    };
    e.notes = "x2 must be +-sqrt(2); the branch +sqrt(2) kills x3^2 = 1-x2 and the "
              "branch -sqrt(2) kills x1^2 = x2, so the system has no real solution "
              "even though the origin passes every sampled enclosure test.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-i";
    e.title = "Independent equations x1^2 = 1, x2^2 = 1";
    e.provenance = "decoupled basin example";
    vector_t off(2);
    off << -1.0, -1.0;
    e.problem = QopProblem{QuadraticOperator::diag_squares(2), zero_mat(2), off};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(-1, -1), vec2(-1, 1), vec2(1, -1), vec2(1, 1)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "Newton basins are the four open quadrants.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-ii";
    e.title = "Swap system revisited: basin geometry";
    e.provenance = "two-dimensional swap system, iteration basins";
    matrix_t lin = zero_mat(2);
    lin(0, 1) = -1.0;
    lin(1, 0) = -1.0;
    e.problem =
        QopProblem{QuadraticOperator::diag_squares(2), lin, vector_t::Zero(2)};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(0, 0), vec2(1, 1)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "Starts above the line x1+x2 = -1 and outside the unit box converge "
              "to (1,1); starts near the origin converge to (0,0).";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-iii";
    e.title = "System x1^2 = x2, x2^2 = 4*x2 - 3";
    e.provenance = "two-parabola system with four stable roots";
    matrix_t lin = zero_mat(2);
    lin(0, 1) = -1.0;
    lin(1, 1) = -4.0;
    vector_t off(2);
    off << 0.0, 3.0;
    e.problem = QopProblem{QuadraticOperator::diag_squares(2), lin, off};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(-std::sqrt(3.0), 3), vec2(-1, 1), vec2(1, 1),
                         vec2(std::sqrt(3.0), 3)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "The second equation factors as (x2-1)(x2-3); both branches lift to "
              "real values of x1.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "example-iv";
    e.title = "System x1^2 = x2, x2^2 = 1";
    e.provenance = "mixed system with one dead branch";
    matrix_t lin = zero_mat(2);
    lin(0, 1) = -1.0;
    vector_t off(2);
    off << 0.0, -1.0;
    e.problem = QopProblem{QuadraticOperator::diag_squares(2), lin, off};
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    e.expected_stable = {vec2(-1, 1), vec2(1, 1)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.notes = "The branch x2 = -1 has no real preimage under x1^2 = x2.";
    out.push_back(std::move(e));
  }

  for (int k = 1; k <= 3; ++k) {
    GalleryEntry e;
    e.id = "projector-k" + std::to_string(k);
    e.title = "Idempotency equation X^2 = X, " + std::to_string(k) + "x" +
              std::to_string(k) + " symmetric matrices";
    e.provenance = "matrix projector equation";
    e.problem = projector_problem(k);
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    const int dim = k * (k + 1) / 2;
    vector_t theta = vector_t::Zero(dim);
    vector_t eye = vector_t::Zero(dim);
    for (int i = 0; i < k; ++i) eye(i) = 1.0;
    e.expected_stable = {theta, eye};
    e.notes = "Stable solutions are exactly the zero matrix and the identity; all "
              "intermediate-rank projectors sit on positive-dimensional solution "
              "manifolds with singular derivative.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "rank2-homogeneous";
    e.title = "Homogeneous rank-two operator on R^3";
    e.provenance = "rank-two operator, homogeneous case";
    matrix_t a1 = zero_mat(3);
    a1(0, 0) = a1(1, 1) = 1.0;  // x1^2 + x2^2
    matrix_t a2 = zero_mat(3);
    a2(1, 1) = a2(2, 2) = 1.0;  // x2^2 + x3^2
    matrix_t a3 = zero_mat(3);
    a3(0, 2) = a3(2, 0) = 1.0;  // 2*x1*x3
    e.problem = homogeneous({a1, a2, a3});
    e.expected_kind = Kind::Elliptic;
    e.expected_rank = 2;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(1) > 0 && f(2) * f(2) < f(0) * f(1);
    };
    e.notes = "Every extremal boundary functional produces a rank-two form.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "rank2-nonhomogeneous";
    e.title = "Non-homogeneous rank-two operator on R^3";
    e.provenance = "rank-two operator, non-homogeneous case";
    matrix_t a1 = zero_mat(3);
    a1(0, 0) = a1(1, 1) = 1.0;  // x1^2 + x2^2
    matrix_t a2 = zero_mat(3);
    a2(1, 1) = a2(2, 2) = 1.0;  // x2^2 + x3^2
    matrix_t a3 = zero_mat(3);
    a3(0, 1) = a3(1, 0) = 1.0;  // 2*x1*x2
    e.problem = homogeneous({a1, a2, a3});
    e.expected_kind = Kind::Elliptic;
    e.expected_rank = 2;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(1) > 0 && f(2) * f(2) < f(0) * (f(0) + f(1));
    };
    e.notes = "The boundary functional (1,0,1) gives the rank-one form "
              "(x1+x2)^2 while generic boundary functionals give rank two.";
    out.push_back(std::move(e));
  }

  for (int n : {3, 4}) {
    GalleryEntry e;
    e.id = "rank-nminus1-n" + std::to_string(n);
    e.title = "Sphere-plus-couplings operator on R^" + std::to_string(n);
    e.provenance = "rank n-1 family";
    std::vector<matrix_t> mats;
    matrix_t a1 = matrix_t::Identity(n, n);  // x1^2 + ... + xn^2
    mats.push_back(a1);
    for (int j = 1; j < n; ++j) {
      matrix_t aj = zero_mat(n);
      aj(0, j) = aj(j, 0) = 1.0;  // 2*x1*xj
      mats.push_back(aj);
    }
    e.problem = homogeneous(std::move(mats));
    e.expected_kind = Kind::Elliptic;
    e.expected_rank = n - 1;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(0) * f(0) > f.tail(f.size() - 1).squaredNorm();
    };
    e.notes = "The certifying cone is a spherical cone; every boundary "
              "functional drops exactly one eigenvalue to zero.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "cone-spherical-plus-ray";
    e.title = "Operator on R^4 whose cone splits as sphere cone + ray";
    e.provenance = "four-dimensional cone-structure example";
    matrix_t a1 = zero_mat(4);
    a1(0, 0) = a1(1, 1) = 1.0;  // x1^2 + x2^2
    matrix_t a2 = zero_mat(4);
    a2(0, 2) = a2(2, 0) = 1.0;  // 2*x1*x3
    matrix_t a3 = zero_mat(4);
    a3(1, 1) = a3(2, 2) = 1.0;  // x2^2 + x3^2
    matrix_t a4 = zero_mat(4);
    a4(1, 1) = a4(3, 3) = 1.0;  // x2^2 + x4^2
    e.problem = homogeneous({a1, a2, a3, a4});
    e.expected_kind = Kind::Elliptic;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(2) > 0 && f(3) > 0 && f(1) * f(1) < f(0) * f(2);
    };
    e.notes = "Closure of the certifying cone is the direct sum of a "
              "three-dimensional spherical cone and a one-dimensional ray.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "cone-wedge-intersection";
    e.title = "Operator on R^4 whose cone is an intersection of two wedges";
    e.provenance = "four-dimensional cone-structure example";
    matrix_t a1 = zero_mat(4);
    a1(0, 0) = a1(1, 1) = a1(2, 2) = 1.0;  // x1^2 + x2^2 + x3^2
    matrix_t a2 = zero_mat(4);
    a2(1, 1) = a2(2, 2) = a2(3, 3) = 1.0;  // x2^2 + x3^2 + x4^2
    matrix_t a3 = zero_mat(4);
    a3(0, 2) = a3(2, 0) = 1.0;  // 2*x1*x3
    matrix_t a4 = zero_mat(4);
    a4(1, 3) = a4(3, 1) = 1.0;  // 2*x2*x4
    e.problem = homogeneous({a1, a2, a3, a4});
    e.expected_kind = Kind::Elliptic;
    e.cone_predicate = [](const vector_t& f) {
      return f(0) > 0 && f(1) > 0 && f(2) * f(2) < f(0) * (f(0) + f(1)) &&
             f(3) * f(3) < f(1) * (f(0) + f(1));
    };
    e.notes = "Membership needs two simultaneous wedge inequalities; the closure "
              "is the intersection of two wedge-shaped cones.";
    out.push_back(std::move(e));
  }

  {
    GalleryEntry e;
    e.id = "rank1-certified";
    e.title = "Certified rank-one instance, all-ones coefficients";
    e.provenance = "rank-one solvability family";
    Rank1Problem r;
    r.coef = matrix_t::Ones(2, 2);
    vector_t rhs(2);
    rhs << 0.5, 0.5;
    r.rhs = rhs;
    e.rank1_form = r;
    e.problem = to_problem(r);
    e.expected_kind = Kind::Elliptic;
    e.solve_expected = true;
    const double s15 = std::sqrt(1.5);
    const double s05 = std::sqrt(0.5);
    e.expected_stable = {vec2(-s05, s05), vec2(1 - s15, 1 - s15),
                         vec2(s05, -s05), vec2(1 + s15, 1 + s15)};
    e.cone_predicate = [](const vector_t& f) { return f(0) > 0 && f(1) > 0; };
    e.expected_rank = 1;
    e.notes = "Column sums minus certificate: m = 2, beta = 1/2, m^2 + 4*beta = 6 > 0; "
              "the dominant root (1+sqrt(3/2))*(1,1) is the componentwise maximum.";
    out.push_back(std::move(e));
  }

  return out;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> catalog = build_catalog();
  return catalog;
}

const GalleryEntry& gallery_entry(const std::string& id) {
  for (const GalleryEntry& e : gallery()) {
    if (e.id == id) return e;
  }
  throw UnknownId("unknown gallery id: " + id);
}

int sym_index(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= k) throw OutOfRange("symmetric index out of range");
  if (i == j) return i;
  // Diagonal block first (k slots), then strict upper triangle row-major.
  const int row_start = i * k - i - i * (i - 1) / 2;
  return k + row_start + (j - i - 1);
}

vector_t sym_to_vector(const matrix_t& x) {
  const int k = static_cast<int>(x.rows());
  if (x.cols() != k) throw DimensionError("sym_to_vector needs a square matrix");
  vector_t v(k * (k + 1) / 2);
  for (int i = 0; i < k; ++i) v(i) = x(i, i);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) v(sym_index(k, i, j)) = 0.5 * (x(i, j) + x(j, i));
  return v;
}

matrix_t sym_from_vector(int k, const vector_t& v) {
  if (v.size() != k * (k + 1) / 2)
    throw DimensionError("coordinate vector has wrong length");
  matrix_t x(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = v(sym_index(k, i, j));
  return x;
}

QopProblem projector_problem(int k) {
  if (k < 1 || k > 8) throw OutOfRange("projector dimension must be in [1,8]");
  const int dim = k * (k + 1) / 2;
  std::vector<matrix_t> mats(dim, matrix_t::Zero(dim, dim));
  // (X^2)_{pq} = sum_m X_{pm} X_{mq}, written in packed coordinates.
  for (int p = 0; p < k; ++p) {
    for (int q = p; q < k; ++q) {
      matrix_t& a = mats[sym_index(k, p, q)];
      for (int m = 0; m < k; ++m) {
        const int c1 = sym_index(k, p, m);
        const int c2 = sym_index(k, m, q);
        a(c1, c2) += 0.5;
        a(c2, c1) += 0.5;
      }
    }
  }
  return QopProblem{QuadraticOperator(std::move(mats)),
                    -matrix_t::Identity(dim, dim), vector_t::Zero(dim)};
}

Rank1Problem make_random_rank1(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("instance dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.2, 1.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Rank1Problem p;
  p.coef = matrix_t(n, n);
  vector_t col_sign(n);
  for (int j = 0; j < n; ++j) col_sign(j) = unit(rng) < 0.5 ? -1.0 : 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.coef(i, j) = col_sign(j) * mag(rng);

  // Column minima of |coef| bound the certificate value from below:
  // with every |a_ij| >= 0.2 we get m >= 0.2*n, and drawing rhs above
  // -m^2/8 keeps m^2 + 4*min(rhs) >= m^2/2 strictly positive.
  double m = 0.0;
  for (int j = 0; j < n; ++j) m += p.coef.col(j).cwiseAbs().minCoeff();
  std::uniform_real_distribution<double> rhs_draw(-m * m / 8.0, 1.5);
  p.rhs = vector_t(n);
  for (int i = 0; i < n; ++i) p.rhs(i) = rhs_draw(rng);
  return p;
}

}  // namespace eqo
