#include "eqo/operators.hpp"

#include <cmath>
#include <random>

namespace eqo {

QuadraticOperator::QuadraticOperator(std::vector<matrix_t> mats)
    : mats_(std::move(mats)) {
  const auto n = static_cast<Eigen::Index>(mats_.size());
  if (n == 0) throw DimensionError("quadratic operator needs at least one matrix");
  for (auto& m : mats_) {
    if (m.rows() != n || m.cols() != n) {
      throw DimensionError("coefficient matrix has wrong shape");
    }
    m = ((m + m.transpose()) / 2.0).eval();
  }
}

QuadraticOperator QuadraticOperator::diag_squares(int n) {
  std::vector<matrix_t> mats(static_cast<size_t>(n), matrix_t::Zero(n, n));
  for (int k = 0; k < n; ++k) mats[static_cast<size_t>(k)](k, k) = 1.0;
  return QuadraticOperator(std::move(mats));
}

vector_t QuadraticOperator::eval(const vector_t& x) const {
  if (x.size() != n()) throw DimensionError("eval_q: dimension mismatch");
  vector_t out(n());
  for (int k = 0; k < n(); ++k) out[k] = x.dot(mats_[static_cast<size_t>(k)] * x);
  return out;
}

vector_t QuadraticOperator::bilinear(const vector_t& x, const vector_t& y) const {
  if (x.size() != n() || y.size() != n()) {
    throw DimensionError("bilinear: dimension mismatch");
  }
  vector_t out(n());
  for (int k = 0; k < n(); ++k) out[k] = x.dot(mats_[static_cast<size_t>(k)] * y);
  return out;
}

matrix_t QuadraticOperator::weighted(const vector_t& f) const {
  if (f.size() != n()) throw DimensionError("weighted: functional dimension mismatch");
  matrix_t m = matrix_t::Zero(n(), n());
  for (int k = 0; k < n(); ++k) m += f[k] * mats_[static_cast<size_t>(k)];
  return m;
}

double QuadraticOperator::max_abs_entry() const {
  double s = 0.0;
  for (const auto& m : mats_) s = std::max(s, m.cwiseAbs().maxCoeff());
  return s;
}

QopProblem::QopProblem(QuadraticOperator q_, matrix_t lin_, vector_t offset_)
    : q(std::move(q_)), lin(std::move(lin_)), offset(std::move(offset_)) {
  if (lin.rows() != q.n() || lin.cols() != q.n() || offset.size() != q.n()) {
    throw DimensionError("problem pieces disagree on dimension");
  }
}

vector_t QopProblem::eval(const vector_t& x) const {
  return q.eval(x) + lin * x + offset;
}

matrix_t QopProblem::jacobian(const vector_t& x) const {
  if (x.size() != n()) throw DimensionError("jacobian: dimension mismatch");
  matrix_t j = lin;
  for (int k = 0; k < n(); ++k) {
    j.row(k) += 2.0 * (q.mat(k) * x).transpose();
  }
  return j;
}

double spectral_norm(const matrix_t& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<matrix_t> es(m.transpose() * m,
                                             Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double opnorm_estimate(const QuadraticOperator& q, int restarts,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = q.n();
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    vector_t x(n);
    for (int i = 0; i < n; ++i) x[i] = gauss(rng);
    if (x.norm() == 0.0) continue;
    x.normalize();
    // Ascend g(x) = |Q(x)|^2 on the sphere; grad = 4 sum_k Q_k(x) A_k x.
    double val = q.eval(x).squaredNorm();
    for (int it = 0; it < 200; ++it) {
      vector_t qx = q.eval(x);
      vector_t grad = vector_t::Zero(n);
      for (int k = 0; k < n; ++k) grad += 4.0 * qx[k] * (q.mat(k) * x);
      grad -= grad.dot(x) * x;  // tangent component
      double gn = grad.norm();
      if (gn < 1e-14 * (1.0 + val)) break;
      double step = 0.5;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls) {
        vector_t y = (x + step * grad / gn).normalized();
        double vy = q.eval(y).squaredNorm();
        if (vy > val) {
          x = y;
          val = vy;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best = std::max(best, std::sqrt(val));
  }
  return best;
}

QuadraticOperator transform(const QuadraticOperator& q, const matrix_t& s,
                            const matrix_t& t) {
  const int n = q.n();
  if (s.rows() != n || s.cols() != n || t.rows() != n || t.cols() != n) {
    throw DimensionError("transform: matrices must be n x n");
  }
  std::vector<matrix_t> mats;
  mats.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    matrix_t acc = matrix_t::Zero(n, n);
    for (int j = 0; j < n; ++j) acc += s(k, j) * q.mat(j);
    mats.push_back(t.transpose() * acc * t);
  }
  return QuadraticOperator(std::move(mats));
}

QopProblem transform(const QopProblem& p, const matrix_t& s, const matrix_t& t) {
  QuadraticOperator q2 = transform(p.q, s, t);
  return QopProblem(std::move(q2), s * p.lin * t, s * p.offset);
}

}  // namespace eqo
