#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwppt/empirical.hpp"
#include "rwppt/error.hpp"
#include "rwppt/theory.hpp"

using namespace rwppt;

namespace {

TargetModel gaussian(std::size_t d, double h = 12.0) {
  return instantiate(std::vector<RegionTemplate>{{0.0, h, 1.0, MarginalFamily::exp_power(2, 1.0)}}, d);
}

std::vector<RegionTemplate> two_region_templates() {
  return {{0.0, 12.0, 0.4, MarginalFamily::exp_power(2, 1.0)},
          {40.0, 12.0, 0.6, MarginalFamily::exp_power(2, 1.0)}};
}

}  // namespace

TEST_CASE("moment accumulator merges exactly") {
  Rng rng(1);
  MomentAccumulator all, a, b;
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) {
    const double x = std::exp(rng.normal());
    xs.push_back(x);
    all.add(x);
    (i < 1700 ? a : b).add(x);
  }
  a.merge(b);
  CHECK(a.count() == all.count());
  CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-13));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  CHECK(a.variance_stderr() == doctest::Approx(all.variance_stderr()).epsilon(1e-10));
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  CHECK(all.variance() == doctest::Approx(ss / (xs.size() - 1)).epsilon(1e-12));
  CHECK(all.mean_stderr() == doctest::Approx(std::sqrt(ss / (xs.size() - 1) / xs.size())));
}

TEST_CASE("estimate_acceptance preconditions and trivial cases") {
  const TargetModel m = gaussian(16);
  CHECK_THROWS_AS(estimate_acceptance(m, 0.5, 2.5, 10000, Seed(1)), ArgumentError);
  CHECK_THROWS_AS(estimate_acceptance(m, 0.5, 1.0, 999, Seed(1)), ArgumentError);
  const auto zero = estimate_acceptance(m, 0.5, 0.0, 5000, Seed(1));
  CHECK(zero.mean == 1.0);
  CHECK(zero.std_error == 0.0);
  CHECK(zero.n == 5000);
  const auto edge = estimate_acceptance(m, 0.5, 2.0, 2000, Seed(1));  // beta' = 1 exactly
  CHECK(edge.mean >= 0.0);
  CHECK(edge.mean <= 1.0);
}

TEST_CASE("d = 1 estimate matches two-dimensional quadrature") {
  const TargetModel m = gaussian(1, 8.0);
  const auto e = estimate_acceptance(m, 0.5, 0.4, 400000, Seed(31));
  CHECK(std::abs(e.mean - 0.815538350362) < 3 * e.std_error);
}

TEST_CASE("finite-d estimate matches the exact chi-square value") {
  // untruncated Gaussian regions: a(l, d) reduces to a one-dimensional chi-square integral
  const TargetModel m = gaussian(256);
  const auto e = estimate_acceptance(m, 0.5, 1.1906012483427703, 100000, Seed(77));
  CHECK(std::abs(e.mean - 0.267692810318) < 3 * e.std_error);
  const TargetModel m16 = instantiate(two_region_templates(), 16);
  const auto e16 = estimate_acceptance(m16, 0.5, 1.1906012483427703, 100000, Seed(78));
  CHECK(std::abs(e16.mean - 0.359882636949) < 3 * e16.std_error);
}

TEST_CASE("reproducible and independent of the thread count") {
  const TargetModel m = instantiate(two_region_templates(), 8);
  EstimatorOptions one{1, 1000}, four{4, 1000};
  const auto a = estimate_acceptance(m, 0.4, 1.0, 20000, Seed(5), one);
  const auto b = estimate_acceptance(m, 0.4, 1.0, 20000, Seed(5), four);
  const auto c = estimate_acceptance(m, 0.4, 1.0, 20000, Seed(5), one);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  const auto other = estimate_acceptance(m, 0.4, 1.0, 20000, Seed(6), one);
  CHECK(other.mean != a.mean);
}

TEST_CASE("standard error follows the square-root law") {
  const TargetModel m = gaussian(32);
  const auto a = estimate_acceptance(m, 0.3, 1.0, 50000, Seed(2));
  const auto b = estimate_acceptance(m, 0.3, 1.0, 200000, Seed(3));
  CHECK(a.std_error / b.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("ESJD is the scaled acceptance on the same stream") {
  const TargetModel m = gaussian(64);
  const double ell = 1.2;
  const auto acc = estimate_acceptance(m, 0.5, ell, 30000, Seed(12));
  const auto es = estimate_esjd(m, 0.5, ell, 30000, Seed(12));
  CHECK(es.esjd.mean == ell * ell / 64 * acc.mean);
  CHECK(es.d_esjd.mean == ell * ell * acc.mean);
  CHECK(es.d_esjd.std_error == ell * ell * acc.std_error);
  CHECK(estimate_esjd(m, 0.5, 0.0, 2000, Seed(1)).d_esjd.mean == 0.0);
}

TEST_CASE("conditional moments of B") {
  const TargetModel m = instantiate(two_region_templates(), 64);
  const double beta = 0.5, ell = 1.0;
  const auto bins = b_conditional_moments(m, beta, ell, 60000, Seed(40));
  REQUIRE(bins.size() == 4);
  const auto mirrored = b_conditional_moments(m, beta, ell, 60000, Seed(40), {}, true);
  // exact finite-d moments for Gaussian regions
  const double bp = beta + ell / 8.0;
  const double mean = -ell * ell / (2 * beta * bp);
  const double var = ell * ell * (1 / (2 * beta * beta) + 1 / (2 * bp * bp));
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(i);
    REQUIRE(bins[i].reported);
    CHECK(bins[i].j == i / 2);
    CHECK(bins[i].m == i % 2);
    CHECK(std::abs(bins[i].mean - mean) < 3.5 * bins[i].mean_stderr);
    CHECK(std::abs(bins[i].variance - var) < 3.5 * bins[i].variance_stderr);
    const std::size_t t = (i % 2) * 2 + i / 2;  // bin (m, j)
    CHECK(mirrored[t].mean == doctest::Approx(-bins[i].mean).epsilon(1e-12));
    CHECK(mirrored[t].n == bins[i].n);
  }
  CHECK(bins[0].n + bins[1].n + bins[2].n + bins[3].n == 60000);

  const TargetModel skew = instantiate(
      std::vector<RegionTemplate>{{0.0, 12.0, 0.99, MarginalFamily::exp_power(2, 1.0)},
                                  {40.0, 12.0, 0.01, MarginalFamily::exp_power(2, 1.0)}}, 4);
  const auto sparse = b_conditional_moments(skew, 0.5, 1.0, 2000, Seed(1));
  CHECK_FALSE(sparse[3].reported);  // about 0.2 expected draws
}

TEST_CASE("convergence study rows") {
  const auto ts = two_region_templates();
  const std::size_t ds[] = {16, 64};
  const auto rows = convergence_study(ts, 0.5, 0.0, ds, 2000, Seed(3));
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.gap == 0.0);
    CHECK(r.a_emp == 1.0);
  }
  const auto rows2 = convergence_study(ts, 0.5, 1.0, ds, 5000, Seed(3));
  for (const auto& r : rows2) {
    CHECK(r.a_emp >= 0.0);
    CHECK(r.a_emp <= 1.0);
    CHECK(r.gap == doctest::Approx(std::abs(r.a_emp - r.a_limit)));
    CHECK(r.a_limit == doctest::Approx(limiting_acceptance(instantiate(ts, 1), 0.5, 1.0)));
  }
  const std::size_t bad[] = {1};
  CHECK_THROWS_AS(convergence_study(ts, 0.5, 1.0, bad, 5000, Seed(3)), ArgumentError);
}
