#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ttm {

struct GaussianComponent {
  double weight = 1.0;
  double mean = 0.0;
  double variance = 1.0;

  friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

/// One-dimensional Gaussian mixture over temporal differences (seconds).
struct GaussianMixture {
  std::vector<GaussianComponent> components;
  std::size_t sample_count = 0;

  std::size_t size() const { return components.size(); }
  double density(double x) const;

  friend bool operator==(const GaussianMixture&, const GaussianMixture&) = default;
};

struct EmOptions {
  double tol = 1e-7;              ///< stop when the log-likelihood gain drops below this
  int max_iter = 300;
  double variance_floor = 1e-4;   ///< seconds^2
  /// fit_best stops once this many consecutive component counts failed to
  /// lower the BIC. 0 tries every count.
  int selection_patience = 0;
};

inline constexpr int kMaxComponents = 10;

/// Fits an `n_components` mixture by EM with k-means++ seeding. The result
/// is a pure function of (samples in order, n_components, seed, options).
/// Throws `InvalidOrder` unless 1 <= n_components <= samples.size().
GaussianMixture fit_em(std::span<const double> samples, int n_components, std::uint64_t seed,
                       const EmOptions& options = {});

/// As `fit_em`, additionally recording the log-likelihood of the seeded
/// parameters followed by the log-likelihood after every M-step.
GaussianMixture fit_em_traced(std::span<const double> samples, int n_components,
                              std::uint64_t seed, const EmOptions& options,
                              std::vector<double>& log_likelihood_trace);

double log_likelihood(const GaussianMixture& model, std::span<const double> samples);

/// k ln(n) - 2 ln(L) with k = 3N - 1 free parameters.
double bic(const GaussianMixture& model, std::span<const double> samples);

/// Fits N = 1 .. min(10, n) and returns the BIC minimizer (ties toward
/// smaller N), or stops early per `options.selection_patience`. An empty
/// sample set is rejected with `EmptySamples`.
GaussianMixture fit_best(std::span<const double> samples, std::uint64_t seed,
                         const EmOptions& options = {});

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_cdf(double x, double mean, double variance);

/// Probability mass of the mixture on [lo, hi], restricted to the
/// components listed in `subset`.
double mass(const GaussianMixture& model, double lo, double hi, std::span<const std::size_t> subset);

/// Probability mass of the full mixture on [lo, hi].
double mass(const GaussianMixture& model, double lo, double hi);

}  // namespace ttm
