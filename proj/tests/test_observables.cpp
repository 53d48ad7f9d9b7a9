#include <doctest.h>

#include <cmath>

#include "hardlattice/geometry.hpp"
#include "hardlattice/observables.hpp"
#include "hardlattice/stats.hpp"
#include "support.hpp"

using namespace hardlattice;
using testing_support::jittered;
using testing_support::mcmc_samples;

namespace {

// l x + amplitude * N * g(x / N) with a smooth N-periodic g, the same pattern at every N.
Configuration smooth_pattern(int n, double l, double amplitude) {
  std::vector<Point2> pos(static_cast<std::size_t>(n * n));
  const Vec2 origin_shift = amplitude * n * Vec2(0.0, 1.0);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const LatticeIndex x = site_from_index(i, n);
    const double s = kTwoPi * x.u / n, t = kTwoPi * x.v / n;
    const Vec2 g(std::sin(s) + 0.5 * std::sin(t), std::cos(s + t));
    pos[i] = l * embed(x) + amplitude * n * g - origin_shift;
  }
  pos[0] = Point2(0, 0);
  return Configuration(n, l, 0.5, pos);
}

}  // namespace

TEST_CASE("order parameter") {
  const double l = 1.05;
  const Configuration cfg = standard_config(3, l, 0.1);
  for (const TriangleRef& t : triangles(3)) {
    CHECK(order_parameter(cfg, t, l * Mat2::Identity()) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(order_parameter(cfg, t, Mat2::Identity()) == doctest::Approx(2 * (l - 1) * (l - 1)).epsilon(1e-12));
  }
  // Triangle inequality with |Id| = sqrt(2) on sampled states.
  const double c3 = std::sqrt(2.0);
  for (const auto& s : mcmc_samples(4, l, 0.1, 50, 8)) {
    for (const TriangleRef& t : triangles(4)) {
      const double to_id = order_parameter(s, t, Mat2::Identity());
      const double to_lid = order_parameter(s, t, l * Mat2::Identity());
      const double bound = to_lid + c3 * c3 * (l - 1) * (l - 1) + 2 * c3 * (l - 1) * std::sqrt(to_lid);
      CHECK(to_id <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("bond vectors") {
  const double l = 1.05, eps = 0.1;
  const Configuration cfg = standard_config(4, l, eps);
  CHECK(bond_vector(cfg, {0, 0}, {1, 0}).isApprox(Vec2(l, 0)));
  for (LatticeIndex z : kNeighborOffsets) {
    CHECK((bond_vector(cfg, {3, 2}, z) - l * embed(z)).norm() < 1e-14);
  }
  CHECK_THROWS_AS(bond_vector(cfg, {0, 0}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(bond_vector(cfg, {0, 0}, {2, 0}), std::invalid_argument);
  for (const auto& s : mcmc_samples(4, l, eps, 30, 4)) {
    for (std::size_t i = 0; i < s.num_sites(); ++i) {
      for (LatticeIndex z : kNeighborOffsets) {
        const double len = bond_vector(s, site_from_index(i, 4), z).norm();
        CHECK(len > 1.0);
        CHECK(len < 1.0 + eps);
      }
    }
  }
}

TEST_CASE("side deviation sum") {
  const double l = 1.05, eps = 0.1;
  for (int n : {2, 4}) {
    CHECK(side_deviation_sum(standard_config(n, l, eps)) ==
          doctest::Approx(3 * n * n * (l - 1) * (l - 1)).epsilon(1e-12));
    for (const auto& s : mcmc_samples(n, l, eps, 20, 6)) {
      const double v = side_deviation_sum(s);
      CHECK(v > 0.0);
      CHECK(v <= 3 * n * n * eps * eps);
    }
  }
}

TEST_CASE("area difference sum") {
  for (int n : {2, 3, 4}) {
    for (double l : {1.01, 1.05}) {
      const double closed = area_difference_closed_form(n, l);
      CHECK(closed == doctest::Approx(2 * n * n * kSqrt3 / 4 * (l * l - 1)));
      CHECK(area_difference_sum(standard_config(n, l, 0.1)) == doctest::Approx(closed).epsilon(1e-12));
      for (const auto& s : mcmc_samples(n, l, 0.1, 20, 10 + n)) {
        CHECK(std::abs(area_difference_sum(s) - closed) <= 1e-9 * closed);
      }
    }
  }
  CHECK(area_difference_closed_form(4, 1.0) == 0.0);
}

TEST_CASE("mean gradient") {
  const double l = 1.05;
  CHECK((mean_gradient(standard_config(4, l, 0.1)) - l * Mat2::Identity()).norm() < 1e-15);
  for (const auto& s : mcmc_samples(4, l, 0.1, 20, 2)) {
    CHECK((mean_gradient(s) - l * Mat2::Identity()).norm() < 1e-10);
  }
  // The identity needs only the periodic boundary condition.
  const Configuration wild = jittered(4, l, 0.1, 0.4, 3);
  REQUIRE_FALSE(is_admissible(wild).admissible());
  CHECK((mean_gradient(wild) - l * Mat2::Identity()).norm() < 1e-10);
}

TEST_CASE("L2 deviations and Pythagoras") {
  const double l = 1.05;
  const int n = 4;
  const Configuration std_cfg = standard_config(n, l, 0.1);
  CHECK(l2_gradient_deviation(std_cfg, l * Mat2::Identity()) == doctest::Approx(0.0).epsilon(1e-14));
  const double t_area = 2 * n * n * kUnitTriangleArea;
  for (const auto& s : mcmc_samples(n, l, 0.1, 30, 12)) {
    // Per-triangle mean times |T_N| lambda.
    double sum = 0.0;
    for (const TriangleRef& t : triangles(n)) sum += order_parameter(s, t, l * Mat2::Identity());
    CHECK(l2_gradient_deviation(s, l * Mat2::Identity()) == doctest::Approx(t_area * sum / (2 * n * n)).epsilon(1e-12));
    const Mat2 r = rotation(polar_rotation(mean_gradient(s)));
    const double lhs = l2_gradient_deviation(s, r);
    const double rhs = l2_gradient_deviation(s, l * Mat2::Identity()) + t_area * (l * Mat2::Identity() - r).squaredNorm();
    CHECK(std::abs(lhs - rhs) <= 1e-9 * lhs);
    CHECK(check_identities(s).ok());
  }
  const auto report = check_identities(std_cfg);
  CHECK(report.ok());
}

TEST_CASE("rigidity ratio") {
  const double l = 1.05;
  const int n = 4;
  const auto est = best_rotation_and_ratio(standard_config(n, l, 0.1));
  const double expected = std::sqrt(2 * n * n * kUnitTriangleArea) * std::sqrt(2.0) * (l - 1);
  CHECK(std::abs(est.angle) < 1e-15);
  CHECK(est.denominator == doctest::Approx(expected).epsilon(1e-10));
  CHECK(est.numerator == doctest::Approx(expected).epsilon(1e-10));
  REQUIRE(est.ratio.has_value());
  CHECK(*est.ratio == doctest::Approx(1.0).epsilon(1e-10));

  for (int seed = 0; seed < 20; ++seed) {
    const auto r = best_rotation_and_ratio(jittered(n, l, 0.1, 0.01, 200 + seed));
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio >= 1.0 - 1e-12);
  }
}

TEST_CASE("rigidity ratio is scale invariant for a smooth pattern") {
  const double l = 1.02;
  const auto coarse = best_rotation_and_ratio(smooth_pattern(16, l, 0.004));
  const auto fine = best_rotation_and_ratio(smooth_pattern(32, l, 0.004));
  REQUIRE(coarse.ratio.has_value());
  REQUIRE(fine.ratio.has_value());
  CHECK(std::abs(*coarse.ratio / *fine.ratio - 1.0) < 0.1);
}

TEST_CASE("observation records") {
  const auto samples = mcmc_samples(3, 1.05, 0.1, 5, 1);
  const ObservationRecord rec = observe(samples.back());
  CHECK(rec.op_id.size() == 18);
  CHECK(rec.op_lid.size() == 18);
  CHECK(rec.bond_vectors.size() == 27);
  for (double v : rec.op_id) CHECK(std::isfinite(v));
  CHECK(rec.side_deviation_sum == doctest::Approx(side_deviation_sum(samples.back())));
  CHECK(rec.area_difference_sum == doctest::Approx(area_difference_sum(samples.back())));
  CHECK(rec.rigidity_ratio.has_value());
}

TEST_CASE("triangle classes are exchangeable") {
  // Per-triangle order parameters from one chain, thinned to roughly
  // independent draws, compared class against class.
  SamplerParams p;
  p.proposal_radius = 0.02;
  p.burn_in = 500;
  p.seed = 44;
  const int n = 2;
  p.sweeps = 2000;
  std::vector<double> pilot;
  run_chain(p, n, 1.05, 0.1, [&](const Configuration& c, std::int64_t) {
    pilot.push_back(order_parameter(c, triangles(n)[0], Mat2::Identity()));
  });
  const double tau = integrated_autocorrelation_time(pilot);
  p.thin = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 * tau)));
  p.sweeps = 10000 * p.thin;
  const auto tris = triangles(n);
  std::vector<std::vector<double>> series(tris.size());
  run_chain(p, n, 1.05, 0.1, [&](const Configuration& c, std::int64_t) {
    for (std::size_t k = 0; k < tris.size(); ++k) series[k].push_back(order_parameter(c, tris[k], Mat2::Identity()));
  });
  REQUIRE(series[0].size() == 10000);
  for (std::size_t a = 0; a < tris.size(); ++a) {
    for (std::size_t b = a + 1; b < tris.size(); ++b) {
      CHECK(ks_two_sample(series[a], series[b]).p_value > 1e-3);
    }
  }
}
