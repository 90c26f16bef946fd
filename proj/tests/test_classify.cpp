#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <eqo/classify.hpp>
#include <eqo/gallery.hpp>
#include <random>

#include "oracles.hpp"

using namespace eqo;

namespace {

vector_t vec3(double a, double b, double c) {
  vector_t v(3);
  v << a, b, c;
  return v;
}

const QuadraticOperator& r3_example() {
  // Q = (x1^2 + x3^2, x2^2 + x3^2, 2 x3 (x1 + x2)); certifying cone
  // {l1 > 0, l2 > 0, l3^2 < l1 l2}.
  return gallery_entry("example-on-r3").problem.q;
}

const QuadraticOperator& stein_ulam_q() {
  return gallery_entry("stein-ulam").problem.q;
}

}  // namespace

TEST_CASE("min_eig_weighted golden values") {
  CHECK(min_eig_weighted(QuadraticOperator::diag_squares(2),
                         vector_t::Ones(2)) == doctest::Approx(1.0));

  CHECK(std::abs(min_eig_weighted(r3_example(), vector_t::Ones(3))) <= 1e-12);

  // f = (1,1,0.5) gives the matrix [[1,0,.5],[0,1,.5],[.5,.5,2]] whose
  // characteristic polynomial factors as (1-l)(l^2-3l+3/2); the smallest
  // eigenvalue is (3-sqrt(3))/2.
  const double expect = (3.0 - std::sqrt(3.0)) / 2.0;
  CHECK(min_eig_weighted(r3_example(), vec3(1, 1, 0.5)) ==
        doctest::Approx(expect).epsilon(1e-12));

  CHECK_THROWS_AS(min_eig_weighted(r3_example(), vector_t::Zero(3)),
                  ZeroFunctional);
  CHECK_THROWS_AS(min_eig_weighted(r3_example(), vector_t::Ones(2)),
                  DimensionError);
}

TEST_CASE("is_in_cone matches the displayed R^3 inequality") {
  double margin = 0.0;
  CHECK(is_in_cone(r3_example(), vec3(1, 1, 0.5), 1e-8, &margin));
  CHECK(margin > 0.0);

  CHECK_FALSE(is_in_cone(r3_example(), vec3(1, 1, 1), 1e-8, &margin));
  CHECK(std::abs(margin) <= 1e-12);

  CHECK_FALSE(is_in_cone(r3_example(), vec3(1, 1, 1.1)));
  CHECK_THROWS_AS(is_in_cone(r3_example(), vector_t::Zero(3)), ZeroFunctional);

  // Positive scaling never changes membership (the test normalizes).
  CHECK(is_in_cone(r3_example(), 7.25 * vec3(1, 1, 0.5)));
  CHECK_FALSE(is_in_cone(r3_example(), 0.03 * vec3(1, 1, 1.1)));
}

TEST_CASE("classification golden set") {
  const auto check = [](const char* id, Kind kind) {
    const Classification c = classify(gallery_entry(id).problem.q);
    CHECK(c.kind == kind);
    return c;
  };
  check("discriminant-elliptic", Kind::Elliptic);
  check("discriminant-parabolic", Kind::Parabolic);
  check("discriminant-hyperbolic", Kind::Hyperbolic);

  const Classification su = check("stein-ulam", Kind::Parabolic);
  REQUIRE(su.witness.has_value());
  // The maximizing direction is (1,1,1)/sqrt(3) and the achieved margin
  // vanishes there.
  const vector_t expect = vector_t::Ones(3) / std::sqrt(3.0);
  CHECK((su.witness->lambda.cwiseAbs() - expect).norm() <= 1e-4);
  CHECK(std::abs(su.margin) <= 1e-8);
  CHECK(std::abs(min_eig_weighted(stein_ulam_q(), expect)) <= 1e-12);
}

TEST_CASE("classification invariants on elliptic verdicts") {
  const QuadraticOperator q = r3_example();
  const Classification c = classify(q);
  CHECK(c.kind == Kind::Elliptic);
  REQUIRE(c.witness.has_value());
  CHECK(c.margin > 1e-8);
  CHECK_FALSE(c.heuristic);
  // The witness re-verifies: smallest eigenvalue of the weighted matrix is
  // the reported margin (coefficients here already have unit max-abs entry).
  CHECK(min_eig_weighted(q, c.witness->lambda) >= c.margin - 1e-12);
  // rank_at of an elliptic witness is full.
  CHECK(rank_at(q, c.witness->lambda) == 3);
}

TEST_CASE("hyperbolic verdicts are heuristic and carry no witness") {
  const Classification c =
      classify(gallery_entry("discriminant-hyperbolic").problem.q);
  CHECK(c.kind == Kind::Hyperbolic);
  CHECK(c.heuristic);
  CHECK(c.margin < -1e-8);
  CHECK_FALSE(c.witness.has_value());
}

TEST_CASE("classify_2d discriminant values") {
  const auto trio = [](const char* id) {
    return classify_2d(gallery_entry(id).problem.q);
  };
  const Classification2d e = trio("discriminant-elliptic");
  CHECK(e.delta == doctest::Approx(1.0));
  CHECK(e.classification.kind == Kind::Elliptic);

  const Classification2d p = trio("discriminant-parabolic");
  CHECK(p.delta == doctest::Approx(0.0));
  CHECK(p.classification.kind == Kind::Parabolic);

  const Classification2d h = trio("discriminant-hyperbolic");
  CHECK(h.delta == doctest::Approx(-1.0));
  CHECK(h.classification.kind == Kind::Hyperbolic);

  CHECK_THROWS_AS(classify_2d(r3_example()), DimensionError);

  // Proportional coefficient rows are the excluded degenerate family.
  matrix_t a(2, 2), b(2, 2);
  a << 1, 0, 0, 1;
  b = 2.0 * a;
  CHECK_THROWS_AS(classify_2d(QuadraticOperator(std::vector<matrix_t>{a, b})),
                  DegenerateProportional);
}

TEST_CASE("classify_2d agrees with classify on random operators") {
  std::mt19937_64 rng(101);
  int tested = 0;
  while (tested < 200) {
    const QuadraticOperator q = oracle::random_operator(2, rng);
    Classification2d two;
    try {
      two = classify_2d(q);
    } catch (const DegenerateProportional&) {
      continue;
    }
    if (std::abs(two.delta) < 1e-6) continue;  // frontier excluded
    const Classification full = classify(q);
    CHECK(full.kind == two.classification.kind);
    ++tested;
  }
}

TEST_CASE("concavity of the weighted smallest eigenvalue") {
  std::mt19937_64 rng(103);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const QuadraticOperator q = oracle::random_operator(n, rng);
    vector_t f(n), h(n);
    for (int i = 0; i < n; ++i) {
      f[i] = g(rng);
      h[i] = g(rng);
    }
    if (f.norm() == 0.0 || h.norm() == 0.0) continue;
    f.normalize();
    h.normalize();
    const double mf = min_eig_weighted(q, f);
    const double mh = min_eig_weighted(q, h);
    for (double t : {0.25, 0.5, 0.75}) {
      const vector_t mix = t * f + (1.0 - t) * h;
      if (mix.norm() < 1e-8) continue;
      CHECK(min_eig_weighted(q, mix) >= t * mf + (1.0 - t) * mh - 1e-10);
    }
  }
}

TEST_CASE("cone convexity and scaling on a random elliptic operator") {
  std::mt19937_64 rng(107);
  int found = 0;
  while (found < 5) {
    QuadraticOperator q = oracle::random_operator(3, rng);
    const Classification c = classify(q);
    if (c.kind != Kind::Elliptic || c.margin < 1e-3) continue;
    ++found;
    const vector_t w = c.witness->lambda;
    // Perturb the witness to get a second in-cone functional; the step stays
    // well below margin / Lipschitz so membership is guaranteed.
    double lip = 0.0;
    for (int k = 0; k < 3; ++k) lip += spectral_norm(q.mat(k));
    std::normal_distribution<double> g;
    vector_t noise(3);
    for (int i = 0; i < 3; ++i) noise[i] = g(rng);
    noise *= 0.2 * c.margin / (lip * noise.norm());
    const vector_t f2 = (w + noise).normalized();
    REQUIRE(is_in_cone(q, f2));
    for (int ti = 1; ti <= 9; ++ti) {
      const double t = 0.1 * ti;
      CHECK(is_in_cone(q, t * w + (1.0 - t) * f2));
    }
    // Scaling leaves membership unchanged.
    CHECK(is_in_cone(q, 42.0 * w));
    CHECK(is_in_cone(q, 1e-3 * w));
  }
}

TEST_CASE("classification kind is invariant under well-conditioned basis changes") {
  std::mt19937_64 rng(109);
  const std::vector<std::string> ids = {
      "discriminant-elliptic", "discriminant-hyperbolic", "stein-ulam",
      "example-on-r3"};
  for (const auto& id : ids) {
    const QuadraticOperator& q = gallery_entry(id).problem.q;
    const Kind base = classify(q).kind;
    const int n = q.n();
    for (int rep = 0; rep < 3; ++rep) {
      const matrix_t s = oracle::random_conditioned(n, rng, 100.0);
      const matrix_t t = oracle::random_conditioned(n, rng, 100.0);
      const Classification ct = classify(transform(q, s, t));
      if (std::abs(ct.margin) <= 10.0 * 1e-8) {
        // Frontier band: parabolic originals may drift inside the guard.
        CHECK(base == Kind::Parabolic);
      } else {
        CHECK(ct.kind == base);
      }
    }
  }
}

TEST_CASE("rank_at golden values") {
  const QuadraticOperator& homog = gallery_entry("rank2-homogeneous").problem.q;
  CHECK(rank_at(homog, vector_t::Ones(3)) == 2);

  const QuadraticOperator& nonh =
      gallery_entry("rank2-nonhomogeneous").problem.q;
  CHECK(rank_at(nonh, vec3(1, 0, 1)) == 1);

  CHECK_THROWS_AS(rank_at(homog, vector_t::Zero(3)), ZeroFunctional);

  // A nonzero functional can still weight the matrices to zero; that counts
  // as rank 0.
  matrix_t a(2, 2);
  a << 1, 0, 0, -1;
  const QuadraticOperator dependent(std::vector<matrix_t>{a, -a});
  CHECK(rank_at(dependent, vector_t::Ones(2)) == 0);
}

TEST_CASE("estimate_rg golden values") {
  CHECK(estimate_rg(QuadraticOperator::diag_squares(3)) == 1);
  CHECK(estimate_rg(gallery_entry("rank2-homogeneous").problem.q) == 2);
  CHECK(estimate_rg(gallery_entry("rank2-nonhomogeneous").problem.q) == 2);
  CHECK(estimate_rg(gallery_entry("rank-nminus1-n3").problem.q) == 2);
  CHECK(estimate_rg(gallery_entry("rank-nminus1-n4").problem.q) == 3);

  CHECK_THROWS_AS(estimate_rg(gallery_entry("stein-ulam").problem.q),
                  NotElliptic);
}

TEST_CASE("estimate_rg cone samples carry consistent margins") {
  ConeSample sample;
  const int rg = estimate_rg(QuadraticOperator::diag_squares(3), &sample);
  CHECK(rg == 1);
  REQUIRE(sample.functionals.size() == sample.margins.size());
  REQUIRE(sample.functionals.size() == sample.ranks.size());
  CHECK(!sample.functionals.empty());
  const QuadraticOperator q = QuadraticOperator::diag_squares(3);
  for (size_t i = 0; i < sample.functionals.size(); ++i) {
    CHECK(std::abs(sample.functionals[i].norm() - 1.0) <= 1e-9);
    CHECK(std::abs(min_eig_weighted(q, sample.functionals[i]) -
                   sample.margins[i]) <= 1e-10);
    CHECK(sample.ranks[i] >= 1);
  }
}

TEST_CASE("diag_eqo_for_cone") {
  // Standard basis reproduces the diag-squares operator.
  const QuadraticOperator std_q = diag_eqo_for_cone(matrix_t::Identity(3, 3));
  std::mt19937_64 rng(113);
  std::normal_distribution<double> g;
  const QuadraticOperator expect = QuadraticOperator::diag_squares(3);
  for (int rep = 0; rep < 5; ++rep) {
    vector_t x(3);
    for (int i = 0; i < 3; ++i) x[i] = g(rng);
    CHECK((std_q.eval(x) - expect.eval(x)).norm() <= 1e-12);
  }

  // Any invertible basis yields an elliptic operator whose cone boundary
  // passes through every basis functional.
  const matrix_t basis = oracle::random_conditioned(3, rng, 50.0);
  const QuadraticOperator q = diag_eqo_for_cone(basis);
  CHECK(classify(q).kind == Kind::Elliptic);
  for (int i = 0; i < 3; ++i) {
    const vector_t f = basis.col(i).normalized();
    CHECK(std::abs(min_eig_weighted(q, f)) <= 1e-8);
  }

  // Rank-deficient basis (two equal columns) is rejected.
  matrix_t bad = matrix_t::Identity(3, 3);
  bad.col(2) = bad.col(1);
  CHECK_THROWS_AS(diag_eqo_for_cone(bad), SingularBasis);
}
