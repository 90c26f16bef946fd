#pragma once

#include <vector>

#include "eqo/solve.hpp"

namespace eqo {

/// Degenerate (Goursat) kernel data, everything sampled on a shared grid:
///   K1(t,s,u) = sum_{i,j,k} a_i(s) b_j(u) c_k(t),
///   K2(t,s)   = sum_{i,j} d_i(s) e_j(t),
/// for the integral equation x(t) = int int K1 x(s) x(u) ds du
///                                 + int K2 x(s) ds + f(t).
struct GoursatSpec {
  int n_basis = 0;
  vector_t grid;                // strictly increasing, >= 2 points
  std::vector<vector_t> a, b, c, d, e;  // n_basis sampled functions each
  vector_t f;                   // sampled free term
};

/// Quadrature rule for all inner products of the reduction.
struct Quadrature {
  enum class Kind { Trapezoid, Gauss };
  Kind kind = Kind::Trapezoid;
  int gauss_order = 0;  // nodes for Kind::Gauss, 1..64

  static Quadrature trapezoid() { return {}; }
  static Quadrature gauss(int k) { return {Kind::Gauss, k}; }
};

/// Weighted inner product int u v dt of two sampled functions under the
/// rule.  Gauss rules evaluate the samples at the Gauss nodes through
/// barycentric polynomial interpolation, so they are intended for smooth or
/// polynomial data on modest grids.
double inner_product(const vector_t& grid, const vector_t& u, const vector_t& v,
                     const Quadrature& quad);

/// The moment system over R^{3n}: with U = sum of the first n unknowns,
/// V the next n, W the last n, row r reads
///   gamma_r U V + eta_r W - x_r + phi_r = 0,
/// where gamma/eta/phi are quadrature inner products of the row's weight
/// function (a_r, b_{r-n}, or d_{r-2n}) against sum_k c_k, sum_j e_j, and f.
struct ReducedProblem {
  QopProblem problem;  // dimension 3 n_basis
  int n_basis = 0;
  vector_t gamma, eta, phi;  // the 3n reduced coefficients
};

/// Builds the reduced quadratic system.  Throws NonIncreasingGrid /
/// GridTooCoarse / DimensionError on malformed specs.
ReducedProblem reduce(const GoursatSpec& spec,
                      const Quadrature& quad = Quadrature::trapezoid());

/// Reconstructs the sampled solution x(t) = U V sum_k c_k(t)
/// + W sum_j e_j(t) + f(t) from a root of the reduced system.
vector_t reconstruct(const GoursatSpec& spec, const vector_t& root);

struct HammersteinReport {
  ReducedProblem reduced;
  Classification reduced_classification;  // usually not elliptic; informative
  SolveReport report;
  std::vector<vector_t> reconstructions;  // one sampled function per root
};

/// reduce + classify + multistart enumeration + reconstruction.
HammersteinReport solve_hammerstein(const GoursatSpec& spec,
                                    const Quadrature& quad = Quadrature::trapezoid(),
                                    const EnumerateOptions& opts = {});

}  // namespace eqo
