#include "ttm/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "ttm/error.hpp"

namespace ttm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2 pi)

// Components lighter than this after convergence carry no samples and are
// dropped; their contribution to the likelihood is below double resolution.
constexpr double kDeadWeight = 1e-12;

double sample_variance(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return var / static_cast<double>(x.size());
}

// k-means++ seeding of the component means.
std::vector<double> seed_means(std::span<const double> x, int n_components, std::mt19937_64& rng) {
  const std::size_t n = x.size();
  std::vector<double> centers;
  centers.reserve(static_cast<std::size_t>(n_components));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  centers.push_back(x[pick(rng)]);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = (x[i] - centers[0]) * (x[i] - centers[0]);

  while (static_cast<int>(centers.size()) < n_components) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    const double c = x[chosen];
    centers.push_back(c);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], (x[i] - c) * (x[i] - c));
  }
  return centers;
}

class EmWorkspace {
 public:
  EmWorkspace(std::span<const double> x, std::size_t k) : x_(x), k_(k), logp_(k * x.size()) {}

  // E-step: fills responsibilities and returns the log-likelihood of `model`.
  double expectation(const std::vector<GaussianComponent>& model) {
    const std::size_t n = x_.size();
    std::vector<double> log_norm(k_), inv_two_var(k_);
    for (std::size_t j = 0; j < k_; ++j) {
      const auto& c = model[j];
      log_norm[j] = (c.weight > 0.0 ? std::log(c.weight) : -kInf) - 0.5 * (kLog2Pi + std::log(c.variance));
      inv_two_var[j] = 0.5 / c.variance;
    }
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = -kInf;
      for (std::size_t j = 0; j < k_; ++j) {
        const double d = x_[i] - model[j].mean;
        const double v = log_norm[j] - d * d * inv_two_var[j];
        logp_[j * n + i] = v;
        best = std::max(best, v);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < k_; ++j) {
        const double r = std::exp(logp_[j * n + i] - best);
        logp_[j * n + i] = r;
        sum += r;
      }
      for (std::size_t j = 0; j < k_; ++j) logp_[j * n + i] /= sum;
      ll += best + std::log(sum);
    }
    return ll;
  }

  // M-step on the responsibilities from the last E-step.
  void maximization(std::vector<GaussianComponent>& model, double variance_floor) const {
    const std::size_t n = x_.size();
    for (std::size_t j = 0; j < k_; ++j) {
      const double* r = &logp_[j * n];
      double nk = 0.0, sx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nk += r[i];
        sx += r[i] * x_[i];
      }
      auto& c = model[j];
      c.weight = nk / static_cast<double>(n);
      if (nk <= 0.0) continue;
      c.mean = sx / nk;
      double sv = 0.0;
      for (std::size_t i = 0; i < n; ++i) sv += r[i] * (x_[i] - c.mean) * (x_[i] - c.mean);
      c.variance = std::max(sv / nk, variance_floor);
    }
  }

 private:
  std::span<const double> x_;
  std::size_t k_;
  std::vector<double> logp_;
};

GaussianMixture run_em(std::span<const double> samples, int n_components, std::uint64_t seed,
                       const EmOptions& options, std::vector<double>* trace) {
  if (samples.empty()) throw make_error("EmptySamples", "cannot fit a mixture to zero samples");
  if (n_components < 1 || static_cast<std::size_t>(n_components) > samples.size()) {
    throw make_error("InvalidOrder", "component count " + std::to_string(n_components) +
                                         " must lie in [1, " + std::to_string(samples.size()) + "]");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw make_error("NonFiniteSample", "samples must be finite");
  }

  const auto k = static_cast<std::size_t>(n_components);
  std::mt19937_64 rng(seed);
  const auto means = seed_means(samples, n_components, rng);
  const double var0 = std::max(sample_variance(samples), options.variance_floor);

  std::vector<GaussianComponent> model(k);
  for (std::size_t j = 0; j < k; ++j) model[j] = {1.0 / static_cast<double>(k), means[j], var0};

  EmWorkspace ws(samples, k);
  double previous = -kInf;
  for (int it = 0;; ++it) {
    const double ll = ws.expectation(model);
    if (trace) trace->push_back(ll);
    if (it >= options.max_iter || ll - previous < options.tol) break;
    previous = ll;
    ws.maximization(model, options.variance_floor);
  }

  GaussianMixture out;
  out.sample_count = samples.size();
  double total = 0.0;
  for (const auto& c : model) {
    if (c.weight > kDeadWeight) {
      out.components.push_back(c);
      total += c.weight;
    }
  }
  for (auto& c : out.components) c.weight /= total;
  return out;
}

}  // namespace

double GaussianMixture::density(double x) const {
  double p = 0.0;
  for (const auto& c : components) {
    const double d = x - c.mean;
    p += c.weight * std::exp(-0.5 * d * d / c.variance) / std::sqrt(2.0 * std::numbers::pi * c.variance);
  }
  return p;
}

GaussianMixture fit_em(std::span<const double> samples, int n_components, std::uint64_t seed,
                       const EmOptions& options) {
  return run_em(samples, n_components, seed, options, nullptr);
}

GaussianMixture fit_em_traced(std::span<const double> samples, int n_components,
                              std::uint64_t seed, const EmOptions& options,
                              std::vector<double>& log_likelihood_trace) {
  log_likelihood_trace.clear();
  return run_em(samples, n_components, seed, options, &log_likelihood_trace);
}

double log_likelihood(const GaussianMixture& model, std::span<const double> samples) {
  double ll = 0.0;
  for (double x : samples) {
    double best = -kInf;
    std::vector<double> terms;
    terms.reserve(model.size());
    for (const auto& c : model.components) {
      const double d = x - c.mean;
      const double t = std::log(c.weight) - 0.5 * (kLog2Pi + std::log(c.variance)) - 0.5 * d * d / c.variance;
      terms.push_back(t);
      best = std::max(best, t);
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - best);
    ll += best + std::log(sum);
  }
  return ll;
}

double bic(const GaussianMixture& model, std::span<const double> samples) {
  const double k = 3.0 * static_cast<double>(model.size()) - 1.0;
  const double n = static_cast<double>(samples.size());
  return k * std::log(n) - 2.0 * log_likelihood(model, samples);
}

GaussianMixture fit_best(std::span<const double> samples, std::uint64_t seed, const EmOptions& options) {
  if (samples.empty()) throw make_error("EmptySamples", "cannot fit a mixture to zero samples");
  const std::size_t distinct = std::set<double>(samples.begin(), samples.end()).size();
  const int max_n = static_cast<int>(std::min<std::size_t>(kMaxComponents, samples.size()));

  GaussianMixture best;
  double best_bic = kInf;
  int worse = 0;
  for (int n = 1; n <= max_n; ++n) {
    // More components than distinct values only duplicates existing ones,
    // which adds parameters without raising the likelihood.
    if (static_cast<std::size_t>(n) > distinct) break;
    auto model = fit_em(samples, n, seed, options);
    const double score = bic(model, samples);
    if (score < best_bic) {
      best_bic = score;
      best = std::move(model);
      worse = 0;
    } else if (options.selection_patience > 0 && ++worse >= options.selection_patience) {
      break;
    }
  }
  return best;
}

double normal_cdf(double x, double mean, double variance) {
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

namespace {

// Phi(hi) - Phi(lo) for one component, evaluated on the tail that keeps
// precision when both bounds sit far from the mean.
double component_mass(const GaussianComponent& c, double lo, double hi) {
  const double s = std::sqrt(2.0 * c.variance);
  const double zl = lo == -kInf ? -kInf : (lo - c.mean) / s;
  const double zh = hi == kInf ? kInf : (hi - c.mean) / s;
  if (zl >= 0.0) {
    const double ql = zl == kInf ? 0.0 : std::erfc(zl);
    const double qh = zh == kInf ? 0.0 : std::erfc(zh);
    return 0.5 * (ql - qh);
  }
  const double pl = zl == -kInf ? 0.0 : std::erfc(-zl);
  const double ph = zh == kInf ? 2.0 : std::erfc(-zh);
  return 0.5 * (ph - pl);
}

}  // namespace

double mass(const GaussianMixture& model, double lo, double hi, std::span<const std::size_t> subset) {
  if (lo > hi) throw make_error("InvalidBounds", "mass requires lo <= hi");
  double m = 0.0;
  for (std::size_t i : subset) {
    if (i >= model.size()) throw make_error("InvalidSubset", "component index out of range");
    m += model.components[i].weight * component_mass(model.components[i], lo, hi);
  }
  return std::clamp(m, 0.0, 1.0);
}

double mass(const GaussianMixture& model, double lo, double hi) {
  std::vector<std::size_t> all(model.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return mass(model, lo, hi, all);
}

}  // namespace ttm
