#include <doctest.h>

#include <cmath>
#include <random>

#include "ttm/error.hpp"
#include "ttm/mixture.hpp"

using namespace ttm;

namespace {

std::vector<double> clusters(std::mt19937_64& rng, const std::vector<double>& means, double sigma, int per_cluster) {
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> xs;
  for (int i = 0; i < per_cluster; ++i) {
    for (double m : means) xs.push_back(m + noise(rng));
  }
  return xs;
}

// Trapezoid rule on [lo, hi] with the given step.
double trapezoid(const GaussianMixture& m, double lo, double hi, double step) {
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  const double h = (hi - lo) / static_cast<double>(n);
  double s = 0.5 * (m.density(lo) + m.density(hi));
  for (long i = 1; i < n; ++i) s += m.density(lo + static_cast<double>(i) * h);
  return s * h;
}

double weight_sum(const GaussianMixture& m) {
  double s = 0.0;
  for (const auto& c : m.components) s += c.weight;
  return s;
}

}  // namespace

TEST_CASE("identical samples give one floor-variance component") {
  const std::vector<double> xs(5, 2.0);
  const auto m = fit_em(xs, 1, 0);
  REQUIRE(m.size() == 1);
  CHECK(m.components[0].mean == doctest::Approx(2.0));
  CHECK(m.components[0].variance == EmOptions{}.variance_floor);
  CHECK(m.sample_count == 5);
  CHECK(fit_best(std::vector<double>(3, 1.5), 4).size() == 1);
}

TEST_CASE("two clusters are recovered") {
  std::mt19937_64 rng(42);
  const auto xs = clusters(rng, {-3.0, 3.0}, 0.3, 100);
  const auto m = fit_em(xs, 2, 1);
  REQUIRE(m.size() == 2);
  std::vector<double> means{m.components[0].mean, m.components[1].mean};
  std::sort(means.begin(), means.end());
  CHECK(std::abs(means[0] + 3.0) <= 0.2);
  CHECK(std::abs(means[1] - 3.0) <= 0.2);
  CHECK(weight_sum(m) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bic(m, xs) < bic(fit_em(xs, 1, 1), xs));
  CHECK(fit_best(xs, 1).size() == 2);
}

TEST_CASE("fitting is deterministic") {
  std::mt19937_64 rng(3);
  const auto xs = clusters(rng, {0.0, 1.0, 4.0}, 0.4, 30);
  CHECK(fit_em(xs, 3, 9) == fit_em(xs, 3, 9));
  CHECK(fit_best(xs, 9) == fit_best(xs, 9));
}

TEST_CASE("fit_em rejects invalid input") {
  const std::vector<double> xs{1.0, 2.0};
  CHECK_THROWS_WITH_AS(fit_em(xs, 3, 0), doctest::Contains("InvalidOrder"), Error);
  CHECK_THROWS_AS(fit_em(xs, 0, 0), Error);
  CHECK_THROWS_WITH_AS(fit_em(std::vector<double>{}, 1, 0), doctest::Contains("EmptySamples"), Error);
  CHECK_THROWS_AS(fit_em(std::vector<double>{1.0, std::nan("")}, 1, 0), Error);
  CHECK_THROWS_AS(fit_best(std::vector<double>{}, 0), Error);
}

TEST_CASE("BIC prefers the simpler model on unimodal data") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n01;
  std::vector<double> xs(500);
  for (auto& x : xs) x = n01(rng);
  CHECK(bic(fit_em(xs, 1, 2), xs) < bic(fit_em(xs, 5, 2), xs));
}

TEST_CASE("BIC of a single sample") {
  const std::vector<double> xs{0.7};
  const auto m = fit_em(xs, 1, 0);
  CHECK(bic(m, xs) == doctest::Approx(-2.0 * std::log(m.density(0.7))));
}

TEST_CASE("fit_best selects four clusters") {
  std::mt19937_64 rng(4);
  const auto xs = clusters(rng, {-6.0, -2.0, 2.0, 6.0}, 0.2, 100);
  CHECK(fit_best(xs, 0).size() == 4);
}

TEST_CASE("fit_best never exceeds the sample count and keeps weights normalized") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 1; n <= 25; ++n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = u(rng);
    const auto m = fit_best(xs, static_cast<std::uint64_t>(n));
    CHECK(m.size() >= 1);
    CHECK(m.size() <= static_cast<std::size_t>(std::min(n, kMaxComponents)));
    CHECK(weight_sum(m) == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& c : m.components) CHECK(c.variance >= EmOptions{}.variance_floor);
  }
}

TEST_CASE("selection patience only shortens the search") {
  std::mt19937_64 rng(21);
  const auto xs = clusters(rng, {-1.0, 1.5}, 0.2, 40);
  EmOptions patient;
  patient.selection_patience = 2;
  CHECK(fit_best(xs, 5, patient) == fit_best(xs, 5));
}

TEST_CASE("EM log-likelihood never decreases") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const int k = 1 + t % 4;
    std::vector<double> means;
    for (int i = 0; i < k; ++i) means.push_back(2.5 * i);
    const auto xs = clusters(rng, means, 0.3 + 0.1 * (t % 3), 15);
    std::vector<double> trace;
    const auto m = fit_em_traced(xs, 1 + t % 6, static_cast<std::uint64_t>(t), EmOptions{}, trace);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-9);
    CHECK(trace.back() == doctest::Approx(log_likelihood(m, xs)).epsilon(1e-9));
  }
}

TEST_CASE("mass examples") {
  GaussianMixture standard{{{1.0, 0.0, 1.0}}, 1};
  CHECK(mass(standard, -kInf, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mass(standard, -kInf, kInf) == doctest::Approx(1.0).epsilon(1e-12));

  GaussianMixture two{{{0.3, -2.0, 0.25}, {0.7, 3.0, 1.0}}, 10};
  CHECK(std::abs(mass(two, -kInf, 0.0) - trapezoid(two, -10.0, 0.0, 1e-4)) <= 1e-6);

  const std::vector<std::size_t> first{0};
  CHECK(mass(two, -kInf, kInf, first) == doctest::Approx(0.3));
  CHECK_THROWS_WITH_AS(mass(two, 1.0, 0.0), doctest::Contains("InvalidBounds"), Error);
  const std::vector<std::size_t> bad{2};
  CHECK_THROWS_WITH_AS(mass(two, 0.0, 1.0, bad), doctest::Contains("InvalidSubset"), Error);
}

TEST_CASE("mass is additive and agrees with quadrature") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mean(-4.0, 4.0), sd(0.1, 1.5), w(0.1, 1.0), cut(-6.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    GaussianMixture m;
    double total = 0.0;
    for (int i = 0; i < 1 + t % 3; ++i) {
      const double s = sd(rng);
      m.components.push_back({w(rng), mean(rng), s * s});
      total += m.components.back().weight;
    }
    for (auto& c : m.components) c.weight /= total;

    double a = cut(rng), b = cut(rng);
    if (a > b) std::swap(a, b);
    const double mid = 0.5 * (a + b);
    CHECK(std::abs(mass(m, a, mid) + mass(m, mid, b) - mass(m, a, b)) <= 1e-12);
    CHECK(std::abs(mass(m, a, b) - trapezoid(m, a, b, 1e-3)) <= 1e-6);
    CHECK(mass(m, -kInf, kInf) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("far tails keep their precision") {
  // 1 - cdf would round to zero here.
  GaussianMixture m{{{1.0, -5.0, 0.25}}, 1};
  const double upper = mass(m, 0.1, kInf);
  CHECK(upper == doctest::Approx(0.5 * std::erfc(5.1 / std::sqrt(0.5))).epsilon(1e-12));
  CHECK(upper > 0.0);
  CHECK(normal_cdf(kInf, 0.0, 1.0) == 1.0);
  CHECK(normal_cdf(-kInf, 0.0, 1.0) == 0.0);
}
