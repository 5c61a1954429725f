#include "rwppt/target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwppt/error.hpp"

namespace rwppt {

namespace {

void check_beta(double beta) {
  if (!(beta >= kMinBeta && beta <= 1.0)) {
    throw ArgumentError("inverse temperature must lie in [1e-6, 1], got " + std::to_string(beta));
  }
}

void check_length(const TargetModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw ArgumentError("point has length " + std::to_string(x.size()) + ", model dimension is " +
                        std::to_string(model.dimension()));
  }
}

}  // namespace

TargetModel::TargetModel(std::size_t dimension, std::vector<Region> regions)
    : dimension_(dimension), regions_(std::move(regions)) {
  if (dimension_ == 0) throw ArgumentError("TargetModel: dimension must be positive");
  if (regions_.empty()) throw ArgumentError("TargetModel: need at least one region");
  double total = 0.0;
  for (std::size_t k = 0; k < regions_.size(); ++k) {
    const Region& r = regions_[k];
    if (r.center.size() != dimension_) {
      throw ArgumentError("TargetModel: region " + std::to_string(k) + " center has wrong length");
    }
    if (!(r.half_width > 0.0) || !std::isfinite(r.half_width)) {
      throw ArgumentError("TargetModel: region half width must be positive");
    }
    const bool single = regions_.size() == 1;
    if (!(r.weight > 0.0 && (r.weight < 1.0 || (single && r.weight == 1.0)))) {
      throw ArgumentError("TargetModel: region weights must lie in (0, 1)");
    }
    if (const Tabulated* t = r.family.as_tabulated()) {
      if (std::abs(t->grid.back() - r.half_width) > 1e-12 * r.half_width) {
        throw ArgumentError("TargetModel: tabulated grid must end at the region half width");
      }
    }
    total += r.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("TargetModel: weights must sum to 1");
  for (std::size_t a = 0; a < regions_.size(); ++a) {
    for (std::size_t b = a + 1; b < regions_.size(); ++b) {
      const Region& ra = regions_[a];
      const Region& rb = regions_[b];
      bool separated = false;
      for (std::size_t i = 0; i < dimension_ && !separated; ++i) {
        separated = std::abs(ra.center[i] - rb.center[i]) >= ra.half_width + rb.half_width;
      }
      if (!separated) {
        throw ArgumentError("TargetModel: regions " + std::to_string(a) + " and " +
                            std::to_string(b) + " overlap");
      }
    }
  }
}

std::optional<std::size_t> TargetModel::region_of(std::span<const double> x) const {
  check_length(*this, x);
  for (std::size_t k = 0; k < regions_.size(); ++k) {
    const Region& r = regions_[k];
    bool inside = true;
    for (std::size_t i = 0; i < dimension_ && inside; ++i) {
      inside = x[i] >= r.center[i] - r.half_width && x[i] < r.center[i] + r.half_width;
    }
    if (inside) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> region_of(const TargetModel& model, std::span<const double> x) {
  return model.region_of(x);
}

TargetModel instantiate(std::span<const RegionTemplate> templates, std::size_t dimension) {
  std::vector<Region> regions;
  regions.reserve(templates.size());
  for (const RegionTemplate& t : templates) {
    Region r{std::vector<double>(dimension, 0.0), t.half_width, t.weight, t.family};
    if (dimension > 0) r.center[0] = t.offset;
    regions.push_back(std::move(r));
  }
  return TargetModel(dimension, std::move(regions));
}

TemperedLevel::TemperedLevel(const TargetModel& model, double beta) : model_(&model), beta_(beta) {
  check_beta(beta);
  for (const Region& r : model.regions()) {
    log_C_.push_back(cumulants(r.family, r.half_width, beta).log_C);
    log_w_.push_back(std::log(r.weight));
  }
}

double TemperedLevel::log_f_sum(std::size_t k, std::span<const double> x) const {
  const Region& r = model_->region(k);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += r.family.log_density(x[i] - r.center[i]);
  return s;
}

double TemperedLevel::log_density(std::span<const double> x) const {
  const auto k = model_->region_of(x);
  if (!k) return -std::numeric_limits<double>::infinity();
  const double d = static_cast<double>(model_->dimension());
  return log_w_[*k] + beta_ * log_f_sum(*k, x) - d * log_C_[*k];
}

double log_rwptt_density(const TargetModel& model, double beta, std::span<const double> x) {
  return TemperedLevel(model, beta).log_density(x);
}

StationarySampler::StationarySampler(const TargetModel& model, double beta)
    : model_(&model), beta_(beta) {
  check_beta(beta);
  double acc = 0.0;
  for (const Region& r : model.regions()) {
    acc += r.weight;
    cumulative_weight_.push_back(acc);
    samplers_.emplace_back(r.family, r.half_width, beta);
  }
}

std::size_t StationarySampler::sample_into(Rng& rng, std::span<double> x) const {
  const double u = rng.uniform() * cumulative_weight_.back();
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(cumulative_weight_.begin(), cumulative_weight_.end(), u) -
      cumulative_weight_.begin());
  k = std::min(k, samplers_.size() - 1);
  const Region& r = model_->region(k);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = r.center[i] + samplers_[k].sample(rng);
    // Half-open regions: the upper face belongs to no region.
    if (v >= r.center[i] + r.half_width) v = std::nextafter(r.center[i] + r.half_width, -INFINITY);
    x[i] = v;
  }
  return k;
}

std::vector<double> StationarySampler::sample(Rng& rng) const {
  std::vector<double> x(model_->dimension());
  sample_into(rng, x);
  return x;
}

std::vector<double> sample_stationary(const TargetModel& model, double beta, Rng& rng) {
  return StationarySampler(model, beta).sample(rng);
}

}  // namespace rwppt
