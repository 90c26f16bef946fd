#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eqo/rank1.hpp"
#include "eqo/solve.hpp"

namespace eqo {

/// A curated worked example with machine-checkable expectations.
struct GalleryEntry {
  std::string id;
  std::string title;
  std::string provenance;  // short origin note
  QopProblem problem;

  Kind expected_kind = Kind::Elliptic;
  bool solve_expected = false;              // stable-root list applies
  std::vector<vector_t> expected_stable;    // sorted lexicographically
  std::function<bool(const vector_t&)> cone_predicate;  // closed-form K'_Q
  std::optional<double> expected_delta;     // 2-D discriminant value
  std::optional<int> expected_rank;         // estimate_rg target
  std::optional<vector_t> expected_witness; // known maximizing functional
  std::optional<Rank1Problem> rank1_form;
  std::string notes;
};

/// The full catalog, in a stable order.
const std::vector<GalleryEntry>& gallery();

/// Lookup by id; throws UnknownId.
const GalleryEntry& gallery_entry(const std::string& id);

/// Index of a symmetric k x k matrix entry (i,j) in the coordinate vector:
/// diagonal entries first, then the strict upper triangle row-major.
int sym_index(int k, int i, int j);

/// Coordinate vector of a symmetric matrix under the same encoding.
vector_t sym_to_vector(const matrix_t& x);

/// Inverse of sym_to_vector.
matrix_t sym_from_vector(int k, const vector_t& v);

/// The idempotency equation X^2 = X over symmetric k x k matrices, written
/// as a quadratic problem on R^{k(k+1)/2} in plain matrix coordinates.
/// Throws OutOfRange unless 1 <= k <= 8.
QopProblem projector_problem(int k);

/// Deterministic generator for certified rank-one instances: uniform column
/// signs and a strictly positive certificate value by construction.
Rank1Problem make_random_rank1(int n, std::uint64_t seed);

}  // namespace eqo
