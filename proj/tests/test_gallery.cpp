#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <eqo/gallery.hpp>
#include <random>
#include <set>

#include "oracles.hpp"

using namespace eqo;

namespace {

std::vector<vector_t> stable_roots(const SolveReport& report) {
  std::vector<vector_t> out;
  for (const auto& r : report.roots) {
    if (r.stable) out.push_back(r.x);
  }
  return out;
}

}  // namespace

TEST_CASE("catalog is complete and addressable") {
  const auto& entries = gallery();
  CHECK(entries.size() == 22);

  std::set<std::string> ids;
  for (const auto& e : entries) {
    CHECK(ids.insert(e.id).second);  // unique
    CHECK(!e.title.empty());
    CHECK(!e.provenance.empty());
    CHECK(e.problem.n() == e.problem.lin.rows());
    CHECK(e.problem.n() == e.problem.offset.size());
    // Lookup returns the same entry.
    CHECK(gallery_entry(e.id).id == e.id);
  }
  for (const char* required :
       {"discriminant-elliptic", "discriminant-parabolic",
        "discriminant-hyperbolic", "stein-ulam", "example-15-unsolvable",
        "example-a", "example-b", "projector-k2", "rank2-homogeneous",
        "rank1-certified"}) {
    CHECK(ids.count(required) == 1);
  }
  CHECK_THROWS_AS(gallery_entry("no-such-entry"), UnknownId);
}

TEST_CASE("every expected kind holds under default classification") {
  for (const auto& e : gallery()) {
    CAPTURE(e.id);
    const Classification c = classify(e.problem.q);
    CHECK(c.kind == e.expected_kind);
    if (e.expected_kind != Kind::Hyperbolic) {
      REQUIRE(c.witness.has_value());
    }
  }
}

TEST_CASE("2-D entries agree with the discriminant classification") {
  for (const auto& e : gallery()) {
    if (e.problem.n() != 2) continue;
    CAPTURE(e.id);
    Classification2d two;
    try {
      two = classify_2d(e.problem.q);
    } catch (const DegenerateProportional&) {
      continue;  // the closed form excludes proportional coefficient rows
    }
    CHECK(two.classification.kind == e.expected_kind);
    if (e.expected_delta.has_value()) {
      CHECK(two.delta == doctest::Approx(*e.expected_delta).epsilon(1e-12));
    }
  }
}

TEST_CASE("recorded witnesses are boundary maximizers") {
  for (const auto& e : gallery()) {
    if (!e.expected_witness.has_value()) continue;
    CAPTURE(e.id);
    CHECK(std::abs(min_eig_weighted(e.problem.q, *e.expected_witness)) <=
          1e-8);
  }
}

TEST_CASE("every stable-root expectation holds under default enumeration") {
  for (const auto& e : gallery()) {
    if (!e.solve_expected) continue;
    CAPTURE(e.id);
    const SolveReport report = enumerate_stable(e.problem);
    CHECK(oracle::root_sets_match(stable_roots(report), e.expected_stable,
                                  1e-8));
    CHECK(report.even_count_ok);
    // Expected lists are themselves sorted lexicographically.
    for (size_t i = 0; i + 1 < e.expected_stable.size(); ++i) {
      const vector_t& a = e.expected_stable[i];
      const vector_t& b = e.expected_stable[i + 1];
      bool le = true;
      for (int c = 0; c < a.size(); ++c) {
        if (a[c] < b[c]) break;
        if (a[c] > b[c]) {
          le = false;
          break;
        }
      }
      CHECK(le);
    }
  }
}

TEST_CASE("rank estimates match the recorded values") {
  for (const auto& e : gallery()) {
    if (!e.expected_rank.has_value()) continue;
    CAPTURE(e.id);
    CHECK(estimate_rg(e.problem.q) == *e.expected_rank);
  }
}

TEST_CASE("cone predicates agree with the numeric membership test") {
  std::mt19937_64 rng(211);
  std::normal_distribution<double> g;
  for (const auto& e : gallery()) {
    if (!e.cone_predicate) continue;
    CAPTURE(e.id);
    const int n = e.problem.n();
    int checked = 0;
    for (int rep = 0; rep < 500; ++rep) {
      vector_t f(n);
      for (int i = 0; i < n; ++i) f[i] = g(rng);
      if (f.norm() == 0.0) continue;
      f.normalize();
      double margin = 0.0;
      const bool numeric = is_in_cone(e.problem.q, f, 1e-8, &margin);
      if (std::abs(margin) <= 1e-7) continue;  // frontier guard band
      CHECK(numeric == e.cone_predicate(f));
      ++checked;
    }
    CHECK(checked >= 450);  // the guard band discards almost nothing
  }
}

TEST_CASE("symmetric matrix packing") {
  // Diagonal first, then strict upper triangle row-major.
  CHECK(sym_index(3, 0, 0) == 0);
  CHECK(sym_index(3, 1, 1) == 1);
  CHECK(sym_index(3, 2, 2) == 2);
  CHECK(sym_index(3, 0, 1) == 3);
  CHECK(sym_index(3, 0, 2) == 4);
  CHECK(sym_index(3, 1, 2) == 5);
  CHECK(sym_index(3, 1, 0) == 3);  // symmetric access

  std::mt19937_64 rng(223);
  for (int k = 1; k <= 8; ++k) {
    const matrix_t x = oracle::random_symmetric(k, rng);
    const vector_t v = sym_to_vector(x);
    REQUIRE(v.size() == k * (k + 1) / 2);
    CHECK((sym_from_vector(k, v) - x).norm() <= 1e-14);
  }
}

TEST_CASE("projector problem encodes X^2 = X exactly") {
  CHECK_THROWS_AS(projector_problem(0), OutOfRange);
  CHECK_THROWS_AS(projector_problem(9), OutOfRange);

  // k = 1 is the scalar equation x^2 = x.
  const QopProblem k1 = projector_problem(1);
  vector_t x1(1);
  x1 << 0.3;
  CHECK(k1.eval(x1)[0] == doctest::Approx(0.3 * 0.3 - 0.3));

  // Random symmetric X: residual in coordinates equals coords(X^2 - X).
  std::mt19937_64 rng(227);
  for (int k = 2; k <= 4; ++k) {
    const QopProblem p = projector_problem(k);
    const matrix_t x = oracle::random_symmetric(k, rng);
    const vector_t via_p = p.eval(sym_to_vector(x));
    const vector_t direct = sym_to_vector((x * x - x).eval());
    CHECK((via_p - direct).norm() <= 1e-12);
  }
}

TEST_CASE("projector stable roots decode to the two trivial projectors") {
  for (int k : {2, 3}) {
    CAPTURE(k);
    const GalleryEntry& e =
        gallery_entry(k == 2 ? "projector-k2" : "projector-k3");
    const SolveReport report = enumerate_stable(e.problem);
    const auto stable = stable_roots(report);
    REQUIRE(stable.size() == 2);
    for (const auto& root : stable) {
      const matrix_t x = sym_from_vector(k, root);
      CHECK((x * x - x).norm() <= 1e-9);
      // Eigenvalues of a decoded root sit on {0, 1}.
      const Eigen::SelfAdjointEigenSolver<matrix_t> es(x);
      for (int i = 0; i < k; ++i) {
        const double ev = es.eigenvalues()[i];
        CHECK(std::min(std::abs(ev), std::abs(ev - 1.0)) <= 1e-8);
      }
      // The two stable roots are theta and the identity.
      const bool is_theta = x.norm() <= 1e-8;
      const bool is_id = (x - matrix_t::Identity(k, k)).norm() <= 1e-8;
      CHECK((is_theta || is_id));
    }
  }
}

TEST_CASE("rank-1 projector curve solves the equation but is never stable") {
  const QopProblem p = gallery_entry("projector-k2").problem;
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    for (double sign : {1.0, -1.0}) {
      vector_t coords(3);
      coords << alpha, 1.0 - alpha, sign * std::sqrt(alpha * (1.0 - alpha));
      CHECK(p.eval(coords).norm() <= 1e-9);
      const Root root = certify_stability(p, coords);
      CHECK_FALSE(root.stable);
    }
  }
}

TEST_CASE("the unsolvable system keeps the origin inside every sampled ellipsoid") {
  const GalleryEntry& e = gallery_entry("example-15-unsolvable");
  CHECK(en_membership(e.problem, vector_t::Zero(3)));
  CHECK(enumerate_stable(e.problem).roots.empty());
  // The recorded analysis names the failing branch on each side.
  CHECK(e.notes.find("sqrt(2)") != std::string::npos);
}

TEST_CASE("random rank-1 instances are certified by construction") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const Rank1Problem p = make_random_rank1(n, seed);
    CAPTURE(seed);
    CHECK(p.n() == n);
    CHECK(check_condition(p).holds);
  }
  // Deterministic in the seed.
  const Rank1Problem a = make_random_rank1(4, 99);
  const Rank1Problem b = make_random_rank1(4, 99);
  CHECK((a.coef - b.coef).norm() == 0.0);
  CHECK((a.rhs - b.rhs).norm() == 0.0);
  const Rank1Problem c = make_random_rank1(4, 100);
  CHECK((a.coef - c.coef).norm() > 0.0);
}
