#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <eqo/gallery.hpp>
#include <eqo/rank1.hpp>

#include "oracles.hpp"

using namespace eqo;

namespace {

Rank1Problem ones_instance() {
  Rank1Problem p;
  p.coef = matrix_t::Ones(2, 2);
  p.rhs = vector_t::Constant(2, 0.5);
  return p;
}

Rank1Problem make(std::initializer_list<double> coef_rm,
                  std::initializer_list<double> rhs) {
  Rank1Problem p;
  const int n = static_cast<int>(rhs.size());
  p.coef = matrix_t(n, n);
  int i = 0;
  for (double v : coef_rm) {
    p.coef(i / n, i % n) = v;
    ++i;
  }
  p.rhs = vector_t(n);
  i = 0;
  for (double v : rhs) p.rhs[i++] = v;
  return p;
}

}  // namespace

TEST_CASE("to_problem encodes x_k^2 = (coef x + rhs)_k") {
  const Rank1Problem p = make({1, 2, 3, 4}, {5, 6});
  const QopProblem full = to_problem(p);
  vector_t x(2);
  x << 2.0, -1.0;
  const vector_t r = full.eval(x);
  // x1^2 - (1*2 + 2*(-1)) - 5 = 4 - 0 - 5 = -1
  CHECK(r[0] == doctest::Approx(-1.0));
  // x2^2 - (3*2 + 4*(-1)) - 6 = 1 - 2 - 6 = -7
  CHECK(r[1] == doctest::Approx(-7.0));
}

TEST_CASE("certificate on the ones instance") {
  const Rank1Certificate cert = check_condition(ones_instance());
  CHECK(cert.column_sign_ok);
  CHECK(cert.m == doctest::Approx(2.0));
  CHECK(cert.beta == doctest::Approx(0.5));
  CHECK(cert.condition_value == doctest::Approx(6.0));
  CHECK(cert.holds);
}

TEST_CASE("certificate failure modes") {
  // Mixed-sign column defeats the certificate.
  const Rank1Certificate mixed =
      check_condition(make({1, -1, 1, 1}, {0.5, 0.5}));
  CHECK_FALSE(mixed.column_sign_ok);
  CHECK_FALSE(mixed.holds);

  // Uniform columns but a too-negative right-hand side: m = 2, beta = -2,
  // m^2 + 4 beta = -4.
  const Rank1Certificate weak = check_condition(make({1, 1, 1, 1}, {-2, 3}));
  CHECK(weak.column_sign_ok);
  CHECK(weak.condition_value == doctest::Approx(-4.0));
  CHECK_FALSE(weak.holds);
}

TEST_CASE("sign_normalize flips uniformly negative columns") {
  const Rank1Problem p = make({1, -2, 3, -4}, {0.5, 0.25});
  const SignNormalized sn = sign_normalize(p);
  CHECK(sn.signs[0] == doctest::Approx(1.0));
  CHECK(sn.signs[1] == doctest::Approx(-1.0));
  CHECK(sn.problem.coef(0, 0) == doctest::Approx(1.0));
  CHECK(sn.problem.coef(0, 1) == doctest::Approx(2.0));
  CHECK(sn.problem.coef(1, 0) == doctest::Approx(3.0));
  CHECK(sn.problem.coef(1, 1) == doctest::Approx(4.0));
  // Roots map through the sign vector: y solves the normalized system iff
  // signs .* y solves the original.
  const SolveReport orig = enumerate_stable(to_problem(p));
  const SolveReport norm = enumerate_stable(to_problem(sn.problem));
  REQUIRE(orig.roots.size() == norm.roots.size());
  std::vector<vector_t> mapped;
  for (const auto& r : norm.roots)
    mapped.push_back(sn.signs.asDiagonal() * r.x);
  std::vector<vector_t> expect;
  for (const auto& r : orig.roots) expect.push_back(r.x);
  CHECK(oracle::root_sets_match(mapped, expect, 1e-7));

  CHECK_THROWS_AS(sign_normalize(make({1, -1, 1, 1}, {0, 0})),
                  MixedSignColumn);
}

TEST_CASE("guaranteed_start") {
  const StartPoint sp = guaranteed_start(ones_instance());
  CHECK(sp.M == doctest::Approx(2.0));
  CHECK(sp.b_max == doctest::Approx(0.5));
  const double base = (2.0 + std::sqrt(4.0 + 2.0)) / 2.0;
  CHECK(sp.alpha == doctest::Approx(base * 1.001));

  CHECK_THROWS_AS(guaranteed_start(make({1, -2, 3, -4}, {0, 0})),
                  NotNormalized);
}

TEST_CASE("solve_sup converges monotonically to the componentwise supremum") {
  const Rank1Problem p = ones_instance();
  const Root sup = solve_sup(p);
  const double expect = 1.0 + std::sqrt(1.5);
  CHECK(std::abs(sup.x[0] - expect) <= 1e-10);
  CHECK(std::abs(sup.x[1] - expect) <= 1e-10);
  CHECK(sup.stable);

  // Re-run the underlying iteration to inspect monotonicity: from the
  // guaranteed start the iterates decrease componentwise and never undershoot
  // the limit by more than 1e-8.
  const StartPoint sp = guaranteed_start(p);
  const NkTrace trace = nk_iterate(
      to_problem(p), vector_t::Constant(2, sp.alpha));
  REQUIRE(trace.outcome == NkOutcome::Converged);
  const vector_t limit = trace.final_x();
  for (size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
    CHECK(((trace.iterates[k + 1].array() - trace.iterates[k].array()) <=
           1e-12)
              .all());
    CHECK((trace.iterates[k].array() >= limit.array() - 1e-8).all());
  }

  CHECK_THROWS_AS(solve_sup(make({1, 1, 1, 1}, {-2, 3})), ConditionNotMet);
}

TEST_CASE("solve_rank1 full pipeline on the ones instance") {
  const Rank1Report report = solve_rank1(ones_instance());
  CHECK(report.certificate.holds);
  CHECK_FALSE(report.theorem_violation);
  REQUIRE(report.sup_root.has_value());

  const double c_hi = 1.0 + std::sqrt(1.5);
  const double c_lo = 1.0 - std::sqrt(1.5);
  const double s = std::sqrt(0.5);
  std::vector<vector_t> expect;
  vector_t v(2);
  v << c_hi, c_hi;
  expect.push_back(v);
  v << c_lo, c_lo;
  expect.push_back(v);
  v << s, -s;
  expect.push_back(v);
  v << -s, s;
  expect.push_back(v);

  std::vector<vector_t> got;
  for (const auto& r : report.report.roots) got.push_back(r.x);
  CHECK(oracle::root_sets_match(got, expect, 1e-8));
  CHECK(report.report.stable_count() >= 2);
  // The sup root majorizes every other root.
  for (const auto& r : report.report.roots) {
    CHECK((report.sup_root->x.array() >= r.x.array() - 1e-8).all());
  }
}

TEST_CASE("solve_rank1 random certified instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const Rank1Problem p = make_random_rank1(n, seed);
    CAPTURE(seed);
    const Rank1Certificate cert = check_condition(p);
    REQUIRE(cert.holds);
    const Rank1Report report = solve_rank1(p);
    CHECK_FALSE(report.theorem_violation);
    CHECK(report.report.stable_count() >= 2);
    REQUIRE(report.sup_root.has_value());
    // Dominance in normalized coordinates.
    const SignNormalized sn = sign_normalize(p);
    const vector_t ys = sn.signs.asDiagonal() * report.sup_root->x;
    for (const auto& r : report.report.roots) {
      const vector_t yr = sn.signs.asDiagonal() * r.x;
      CHECK((ys.array() >= yr.array() - 1e-8).all());
    }
  }
}

TEST_CASE("solve_rank1 falls back to generic enumeration without a certificate") {
  const Rank1Problem p = make({1, -1, 1, 1}, {0.5, 0.5});
  const Rank1Report report = solve_rank1(p);
  CHECK_FALSE(report.certificate.holds);
  CHECK_FALSE(report.sup_root.has_value());
  CHECK_FALSE(report.theorem_violation);
  // The generic multistart still enumerates whatever roots exist.
  for (const auto& r : report.report.roots) {
    CHECK(to_problem(p).eval(r.x).norm() <= 1e-10);
  }
}

TEST_CASE("sup_lattice_check") {
  const Rank1Problem p = ones_instance();
  vector_t x(2), y(2);
  x << 0.0, 1.0;
  y << 1.0, 0.0;
  CHECK(sup_lattice_check(p, x, y));

  vector_t outside(2);
  outside << 10.0, 0.0;
  CHECK_THROWS_AS(sup_lattice_check(p, outside, y), PreconditionViolated);

  CHECK_THROWS_AS(sup_lattice_check(make({1, -2, 3, -4}, {0, 0}), x, y),
                  NotNormalized);
}

TEST_CASE("n=1 instance matches solve_1d") {
  // x^2 = 2x + 3.
  const Rank1Problem p = make({2}, {3});
  const Rank1Report report = solve_rank1(p);
  const auto direct = solve_1d(1, -2, -3);
  REQUIRE(report.report.roots.size() == direct.size());
  for (size_t i = 0; i < direct.size(); ++i) {
    CHECK(std::abs(report.report.roots[i].x[0] - direct[i].x[0]) <= 1e-9);
    CHECK(report.report.roots[i].stable == direct[i].stable);
  }
  REQUIRE(report.sup_root.has_value());
  CHECK(report.sup_root->x[0] == doctest::Approx(3.0));
}

TEST_CASE("certificate is sufficient but not necessary") {
  // Example-a data: coef = I, rhs = 0.  Column minima vanish, so the
  // certificate fails -- yet the unit square's four vertices are all stable.
  const Rank1Problem p = make({1, 0, 0, 1}, {0, 0});
  const Rank1Certificate cert = check_condition(p);
  CHECK(cert.column_sign_ok);
  CHECK(cert.m == doctest::Approx(0.0));
  CHECK(cert.beta == doctest::Approx(0.0));
  CHECK(cert.condition_value == doctest::Approx(0.0));
  CHECK_FALSE(cert.holds);

  const Rank1Report report = solve_rank1(p);
  CHECK(report.report.stable_count() == 4);
  CHECK_FALSE(report.theorem_violation);
}

TEST_CASE("n=1 certificate equals the quadratic discriminant") {
  // x^2 = a x + b has real roots iff a^2 + 4b >= 0.
  CHECK(check_condition(make({2}, {3})).condition_value ==
        doctest::Approx(16.0));
  CHECK(check_condition(make({1}, {-1})).condition_value ==
        doctest::Approx(-3.0));
  CHECK_FALSE(check_condition(make({1}, {-1})).holds);
}

TEST_CASE("solve_sup closed forms") {
  // Decoupled: x_k^2 = x_k + 0.25 has sup root (1+sqrt(2))/2 per coordinate.
  const Root diag = solve_sup(make({1, 0, 0, 1}, {0.25, 0.25}));
  const double expect = (1.0 + std::sqrt(2.0)) / 2.0;
  CHECK(std::abs(diag.x[0] - expect) <= 1e-10);
  CHECK(std::abs(diag.x[1] - expect) <= 1e-10);

  // Scalar: x^2 = 1, sup root 1.
  const Root scalar = solve_sup(make({0}, {1}));
  CHECK(std::abs(scalar.x[0] - 1.0) <= 1e-10);
}

TEST_CASE("solve_rank1 scalar instance") {
  // x^2 = x + 1: the golden-ratio pair (1 +- sqrt(5))/2, both stable.
  const Rank1Report report = solve_rank1(make({1}, {1}));
  REQUIRE(report.report.roots.size() == 2);
  const double s5 = std::sqrt(5.0);
  CHECK(std::abs(report.report.roots[0].x[0] - (1.0 - s5) / 2.0) <= 1e-10);
  CHECK(std::abs(report.report.roots[1].x[0] - (1.0 + s5) / 2.0) <= 1e-10);
  CHECK(report.report.roots[0].stable);
  CHECK(report.report.roots[1].stable);
}

TEST_CASE("sign_normalize mirrors the displayed example") {
  const SignNormalized sn = sign_normalize(make({-1, 0, -2, 0}, {1, 1}));
  CHECK(sn.signs[0] == doctest::Approx(-1.0));
  CHECK(sn.signs[1] == doctest::Approx(1.0));  // all-zero column keeps +1
  CHECK(sn.problem.coef(0, 0) == doctest::Approx(1.0));
  CHECK(sn.problem.coef(1, 0) == doctest::Approx(2.0));
  CHECK(sn.problem.coef(0, 1) == doctest::Approx(0.0));

  // Already-nonnegative input is a no-op.
  const SignNormalized id = sign_normalize(ones_instance());
  CHECK((id.signs.array() == 1.0).all());
}

TEST_CASE("guaranteed_start degenerate edges") {
  // All-zero data: alpha collapses to a tiny positive start near the origin.
  const StartPoint zero = guaranteed_start(make({0, 0, 0, 0}, {0, 0}));
  CHECK(zero.alpha > 0.0);
  CHECK(zero.alpha <= 1e-3);

  // Negative discriminant M^2 + 4 b_max < 0 cannot occur under a holding
  // certificate; the guard drops the square root.
  const StartPoint guard = guaranteed_start(make({1, 0, 0, 1}, {-5, -5}));
  CHECK(guard.M == doctest::Approx(1.0));
  CHECK(guard.b_max == doctest::Approx(-5.0));
  CHECK(guard.alpha == doctest::Approx(1.001));
}

TEST_CASE("simplex minimum of sum c_i / l_i matches the analytic value") {
  // The minimum of sum c_i / l_i over the simplex {l > 0, sum l = 1} is
  // (sqrt(c_1) + ... + sqrt(c_n))^2, attained at l_i proportional to
  // sqrt(c_i).  The numeric side is a nested golden-section search, written
  // here as a test-only oracle.
  const auto golden_min = [](auto&& objective, double lo, double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = objective(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = objective(x2);
      }
    }
    return objective(0.5 * (a + b));
  };

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    // n = 2.
    {
      const double c1 = u(rng), c2 = u(rng);
      const double analytic = std::pow(std::sqrt(c1) + std::sqrt(c2), 2);
      const double numeric = golden_min(
          [&](double l1) { return c1 / l1 + c2 / (1.0 - l1); }, 1e-6,
          1.0 - 1e-6);
      CHECK(std::abs(numeric - analytic) <= 1e-6 * analytic);
    }
    // n = 3 via nesting.
    {
      const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
      const double analytic =
          std::pow(std::sqrt(c1) + std::sqrt(c2) + std::sqrt(c3), 2);
      const double numeric = golden_min(
          [&](double l1) {
            return golden_min(
                [&](double l2) {
                  return c1 / l1 + c2 / l2 + c3 / (1.0 - l1 - l2);
                },
                1e-6, 1.0 - l1 - 1e-6);
          },
          1e-6, 1.0 - 2e-6);
      CHECK(std::abs(numeric - analytic) <= 1e-6 * analytic);
    }
  }
}

TEST_CASE("componentwise min can leave the enclosure") {
  // Witness for the non-lattice remark: E = {x1^2 <= x2 + 1, x2^2 <= x1 + 1}
  // contains (-1, 0) and (0, -1), but their componentwise min (-1, -1)
  // violates the first inequality: 1 > 0.
  const Rank1Problem p = make({0, 1, 1, 0}, {1, 1});
  const auto in_e = [&](const vector_t& x) {
    for (int k = 0; k < 2; ++k) {
      const double rhs = p.coef.row(k).dot(x) + p.rhs[k];
      if (x[k] * x[k] > rhs + 1e-12) return false;
    }
    return true;
  };
  vector_t x(2), y(2);
  x << -1.0, 0.0;
  y << 0.0, -1.0;
  REQUIRE(in_e(x));
  REQUIRE(in_e(y));
  const vector_t lo = x.cwiseMin(y);
  CHECK_FALSE(in_e(lo));
  // The max stays inside, consistent with the lattice step the proof uses.
  CHECK(in_e(x.cwiseMax(y)));
  CHECK(sup_lattice_check(p, x, y));
}

TEST_CASE("gallery rank1 entry exposes the shorthand form") {
  const GalleryEntry& entry = gallery_entry("rank1-certified");
  REQUIRE(entry.rank1_form.has_value());
  const Rank1Certificate cert = check_condition(*entry.rank1_form);
  CHECK(cert.holds);
  const QopProblem via_form = to_problem(*entry.rank1_form);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 5; ++rep) {
    vector_t x(2);
    x << g(rng), g(rng);
    CHECK((via_form.eval(x) - entry.problem.eval(x)).norm() <= 1e-12);
  }
}
