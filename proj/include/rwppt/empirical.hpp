#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwppt/random.hpp"
#include "rwppt/target.hpp"

namespace rwppt {

/// Running central moments up to order four, mergeable across batches.
class MomentAccumulator {
 public:
  void add(double x) noexcept;
  void merge(const MomentAccumulator& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance.
  double variance() const noexcept;
  double mean_stderr() const noexcept;
  /// Standard error of the sample variance from the fourth central moment.
  double variance_stderr() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::uint64_t n = 0;
};

struct EstimatorOptions {
  unsigned threads = 1;
  /// Draws per independently seeded batch; results do not depend on threads.
  std::size_t batch_size = 4096;
};

/// Monte Carlo estimate of a(l, d) = E[min(1, e^B)] for the pair
/// (beta, beta' = beta + l / sqrt(d)), d = model.dimension(), with the lower
/// state drawn exactly from pi_beta and the upper from pi_beta'.
/// ArgumentError if beta' > 1 or n_samples < 1000.
EstimateWithError estimate_acceptance(const TargetModel& model, double beta, double ell,
                                      std::uint64_t n_samples, Seed seed,
                                      const EstimatorOptions& opts = {});

struct EsjdEstimate {
  EstimateWithError esjd;    // E[(gamma - beta)^2] = (l^2 / d) a(l, d)
  EstimateWithError d_esjd;  // d * ESJD, comparable with E(l)
};

EsjdEstimate estimate_esjd(const TargetModel& model, double beta, double ell,
                           std::uint64_t n_samples, Seed seed, const EstimatorOptions& opts = {});

/// Sample moments of B conditional on (region of lower state, region of upper state).
struct BinMoments {
  std::size_t j = 0;  // region of the state at beta
  std::size_t m = 0;  // region of the state at beta'
  std::uint64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  bool reported = false;  // false when n < 30
};

/// Bins are returned in row-major (j, m) order. With swap_roles the ratio is
/// evaluated with the two states exchanged, B(y, x) = -B(x, y), and binned by
/// (region of y, region of x).
std::vector<BinMoments> b_conditional_moments(const TargetModel& model, double beta, double ell,
                                              std::uint64_t n_samples, Seed seed,
                                              const EstimatorOptions& opts = {},
                                              bool swap_roles = false);

struct ConvergenceRow {
  std::size_t d = 0;
  double a_emp = 0.0;
  double std_error = 0.0;
  double a_limit = 0.0;
  double gap = 0.0;
};

/// a(l, d) against a(l) for each d; the stream for dimension d is seed.child(d).
std::vector<ConvergenceRow> convergence_study(std::span<const RegionTemplate> templates,
                                              double beta, double ell,
                                              std::span<const std::size_t> d_list,
                                              std::uint64_t n_samples, Seed seed,
                                              const EstimatorOptions& opts = {});

}  // namespace rwppt
