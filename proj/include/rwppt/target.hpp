#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rwppt/marginals.hpp"
#include "rwppt/random.hpp"

namespace rwppt {

/// Hypercube region: every coordinate i ranges over [center_i - h, center_i + h).
struct Region {
  std::vector<double> center;
  double half_width = 1.0;
  double weight = 1.0;
  MarginalFamily family = MarginalFamily::exp_power(2, 1.0);
};

/// K disjoint hypercubes with preserved weights. Validated on construction
/// and immutable afterwards.
class TargetModel {
 public:
  TargetModel(std::size_t dimension, std::vector<Region> regions);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return regions_.size(); }
  const Region& region(std::size_t k) const { return regions_.at(k); }
  const std::vector<Region>& regions() const noexcept { return regions_; }

  /// Index of the region containing x, if any. ArgumentError on length mismatch.
  std::optional<std::size_t> region_of(std::span<const double> x) const;

 private:
  std::size_t dimension_;
  std::vector<Region> regions_;
};

/// Dimension-free description of a region: center (offset, 0, ..., 0).
struct RegionTemplate {
  double offset = 0.0;
  double half_width = 1.0;
  double weight = 1.0;
  MarginalFamily family = MarginalFamily::exp_power(2, 1.0);
};

/// Builds the d-dimensional model for a list of region templates.
TargetModel instantiate(std::span<const RegionTemplate> templates, std::size_t dimension);

std::optional<std::size_t> region_of(const TargetModel& model, std::span<const double> x);

/// The tempered target at one inverse temperature, with log C_k(beta) cached.
class TemperedLevel {
 public:
  TemperedLevel(const TargetModel& model, double beta);

  double beta() const noexcept { return beta_; }
  const TargetModel& model() const noexcept { return *model_; }
  double log_C(std::size_t k) const { return log_C_.at(k); }

  /// Normalized log density; -infinity outside every region.
  double log_density(std::span<const double> x) const;

  /// Sum over coordinates of log f_k(x_i - mu_k^i) for a point known to be in region k.
  double log_f_sum(std::size_t k, std::span<const double> x) const;

 private:
  const TargetModel* model_;
  double beta_;
  std::vector<double> log_C_;
  std::vector<double> log_w_;
};

/// log pi_beta(x) = log w_k + sum_i [beta log f_k(x_i - mu_k^i) - log C_k(beta)] on A_k.
double log_rwptt_density(const TargetModel& model, double beta, std::span<const double> x);

/// Exact draws from pi_beta: region by weight, then coordinates independently.
class StationarySampler {
 public:
  StationarySampler(const TargetModel& model, double beta);

  std::vector<double> sample(Rng& rng) const;
  /// Fills x and returns the region index.
  std::size_t sample_into(Rng& rng, std::span<double> x) const;

  double beta() const noexcept { return beta_; }

 private:
  const TargetModel* model_;
  double beta_;
  std::vector<double> cumulative_weight_;
  std::vector<TemperedSampler> samplers_;
};

std::vector<double> sample_stationary(const TargetModel& model, double beta, Rng& rng);

}  // namespace rwppt
