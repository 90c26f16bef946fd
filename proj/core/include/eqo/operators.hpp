#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "eqo/errors.hpp"

namespace eqo {

using matrix_t = Eigen::MatrixXd;
using vector_t = Eigen::VectorXd;

/// Default seed for every deterministic sampling routine in the library.
/// The CLI allows overriding it through the EQO_SEED environment variable.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// A quadratic operator Q : R^n -> R^n with components Q(x)_k = x^T A_k x.
/// The coefficient matrices are symmetrized on construction, so callers may
/// pass any square matrices with the understanding that only the symmetric
/// part enters the quadratic form.
class QuadraticOperator {
 public:
  QuadraticOperator() = default;

  /// Builds the operator from n coefficient matrices of size n x n.
  /// Throws DimensionError unless every matrix is n x n with n = mats.size().
  explicit QuadraticOperator(std::vector<matrix_t> mats);

  /// Convenience factory for Q(x) = (x_1^2, ..., x_n^2).
  static QuadraticOperator diag_squares(int n);

  int n() const { return static_cast<int>(mats_.size()); }
  const matrix_t& mat(int k) const { return mats_[static_cast<size_t>(k)]; }
  const std::vector<matrix_t>& mats() const { return mats_; }

  /// Q(x); throws DimensionError on size mismatch.
  vector_t eval(const vector_t& x) const;

  /// The symmetric bilinear map B(x,y)_k = x^T A_k y, so that B(x,x) = Q(x).
  vector_t bilinear(const vector_t& x, const vector_t& y) const;

  /// Weighted coefficient matrix sum_k f_k A_k.
  matrix_t weighted(const vector_t& f) const;

  /// Largest absolute entry across all coefficient matrices.
  double max_abs_entry() const;

 private:
  std::vector<matrix_t> mats_;
};

/// A linear functional on R^n represented by its coefficient vector, so that
/// f(y) = lambda . y.
struct Functional {
  vector_t lambda;

  double operator()(const vector_t& y) const {
    if (y.size() != lambda.size()) {
      throw DimensionError("functional applied to vector of wrong dimension");
    }
    return lambda.dot(y);
  }
};

/// The affine-quadratic equation P(x) = Q(x) + A x + b = 0.
struct QopProblem {
  QuadraticOperator q;
  matrix_t lin;     // A, n x n
  vector_t offset;  // b, n

  QopProblem() = default;
  QopProblem(QuadraticOperator q_, matrix_t lin_, vector_t offset_);

  int n() const { return q.n(); }

  /// P(x) = Q(x) + A x + b.
  vector_t eval(const vector_t& x) const;

  /// Frechet derivative P'(x) with rows 2 (A_k x)^T + A_k-th row; equals
  /// the Jacobian of eval at x.
  matrix_t jacobian(const vector_t& x) const;
};

/// Spectral norm of a general rectangular matrix.
double spectral_norm(const matrix_t& m);

/// Sampling-plus-ascent estimate of ||Q|| = sup_{|x|=1} |Q(x)|.  The estimate
/// is a lower bound of the true norm that is tight in practice; `restarts`
/// sphere ascents are run from deterministic starts.
double opnorm_estimate(const QuadraticOperator& q, int restarts = 64,
                       std::uint64_t seed = kDefaultSeed);

/// Push-forward S . Q(T x), useful for change-of-basis experiments.  S and T
/// must be n x n; the result has coefficient matrices T^T (sum_j S_kj A_j) T.
QuadraticOperator transform(const QuadraticOperator& q, const matrix_t& s,
                            const matrix_t& t);

/// Same change of basis applied to a full problem: the transformed problem
/// has P'(x) = S P(T x), so root sets map through T^{-1}.
QopProblem transform(const QopProblem& p, const matrix_t& s, const matrix_t& t);

}  // namespace eqo
