#include "rwppt/pt_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwppt/error.hpp"

namespace rwppt {

namespace {

double swap_half(const TemperedLevel& lo, const TemperedLevel& hi, std::span<const double> v) {
  const auto k = lo.model().region_of(v);
  if (!k) throw StateError("log_swap_ratio: point lies outside every region");
  const double d = static_cast<double>(v.size());
  return (hi.beta() - lo.beta()) * lo.log_f_sum(*k, v) - d * (hi.log_C(*k) - lo.log_C(*k));
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  if (log_ratio >= 0.0) return true;
  return std::log(rng.uniform()) < log_ratio;
}

}  // namespace

Ladder::Ladder(std::vector<double> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw ArgumentError("Ladder: need at least one level");
  if (betas_.front() != 1.0) throw ArgumentError("Ladder: beta_0 must equal 1");
  for (std::size_t i = 1; i < betas_.size(); ++i) {
    if (!(betas_[i] < betas_[i - 1])) throw ArgumentError("Ladder: betas must strictly decrease");
  }
  if (!(betas_.back() >= kMinBeta)) throw ArgumentError("Ladder: betas must be positive");
}

double log_swap_ratio(const TemperedLevel& lo, const TemperedLevel& hi, std::span<const double> x,
                      std::span<const double> y) {
  return swap_half(lo, hi, x) - swap_half(lo, hi, y);
}

double log_swap_ratio(const TargetModel& model, double beta_lo, double beta_hi,
                      std::span<const double> x, std::span<const double> y) {
  if (!(beta_lo > 0.0 && beta_lo < beta_hi && beta_hi <= 1.0)) {
    throw ArgumentError("log_swap_ratio: need 0 < beta_lo < beta_hi <= 1");
  }
  if (x.size() != model.dimension() || y.size() != model.dimension()) {
    throw ArgumentError("log_swap_ratio: point length does not match the model dimension");
  }
  const TemperedLevel lo(model, beta_lo);
  const TemperedLevel hi(model, beta_hi);
  return log_swap_ratio(lo, hi, x, y);
}

double default_step_scale(const TargetModel& model, double beta) {
  double scale = std::numeric_limits<double>::infinity();
  for (const Region& r : model.regions()) {
    double s;
    if (const ExpPower* ep = r.family.as_exp_power()) {
      s = ep->sigma * std::pow(beta, -1.0 / ep->z);
    } else {
      s = tempered_location_scale(r.family, r.half_width, beta).stddev;
    }
    // Never propose further than the region is wide.
    scale = std::min({scale, s, r.half_width});
  }
  return 2.4 * scale / std::sqrt(static_cast<double>(model.dimension()));
}

bool rwm_step(const TemperedLevel& level, std::vector<double>& x, double step_scale, Rng& rng) {
  const double current = level.log_density(x);
  std::vector<double> proposal(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) proposal[i] = x[i] + step_scale * rng.normal();
  const double candidate = level.log_density(proposal);
  if (candidate == -std::numeric_limits<double>::infinity()) return false;
  if (!metropolis_accept(candidate - current, rng)) return false;
  x = std::move(proposal);
  return true;
}

ParallelTempering::ParallelTempering(const TargetModel& model, Ladder ladder, RunOptions options,
                                     Rng& rng)
    : model_(&model), ladder_(std::move(ladder)), options_(std::move(options)) {
  const std::size_t n = ladder_.levels();
  if (options_.step_scales.empty()) {
    for (double b : ladder_.betas()) options_.step_scales.push_back(default_step_scale(model, b));
  }
  if (options_.step_scales.size() != n) {
    throw ArgumentError("RunOptions: step_scales must have one entry per level");
  }
  for (double b : ladder_.betas()) levels_.emplace_back(model, b);
  diagnostics_.pairs.resize(ladder_.pairs());
  for (std::size_t i = 0; i < ladder_.pairs(); ++i) {
    diagnostics_.pairs[i].beta_hi = ladder_[i];
    diagnostics_.pairs[i].beta_lo = ladder_[i + 1];
  }
  diagnostics_.within_proposals.assign(n, 0);
  diagnostics_.within_accepts.assign(n, 0);

  state_.xs.resize(n);
  log_density_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    StationarySampler sampler(model, ladder_[i]);
    state_.xs[i] = sampler.sample(rng);
    log_density_[i] = levels_[i].log_density(state_.xs[i]);
    if (options_.refresh_hottest && i + 1 == n) hottest_sampler_.push_back(std::move(sampler));
  }
}

void ParallelTempering::set_state(LadderState state) {
  if (state.xs.size() != ladder_.levels()) {
    throw ArgumentError("set_state: one point per level required");
  }
  for (std::size_t i = 0; i < state.xs.size(); ++i) {
    const double ld = levels_[i].log_density(state.xs[i]);
    if (ld == -std::numeric_limits<double>::infinity()) {
      throw StateError("set_state: point outside every region");
    }
    log_density_[i] = ld;
  }
  state_ = std::move(state);
}

bool ParallelTempering::swap_step(std::size_t pair, Rng& rng) {
  if (pair >= ladder_.pairs()) throw ArgumentError("swap_step: pair index out of range");
  const TemperedLevel& hi = levels_[pair];
  const TemperedLevel& lo = levels_[pair + 1];
  std::vector<double>& y = state_.xs[pair];
  std::vector<double>& x = state_.xs[pair + 1];
  const double B = log_swap_ratio(lo, hi, x, y);
  PairStats& stats = diagnostics_.pairs[pair];
  ++stats.proposals;
  if (!metropolis_accept(B, rng)) return false;
  ++stats.accepts;
  std::swap(x, y);
  log_density_[pair] = hi.log_density(state_.xs[pair]);
  log_density_[pair + 1] = lo.log_density(state_.xs[pair + 1]);
  return true;
}

bool ParallelTempering::within_step(std::size_t level, Rng& rng) {
  const TemperedLevel& lvl = levels_.at(level);
  std::vector<double>& x = state_.xs[level];
  const double scale = options_.step_scales[level];
  ++diagnostics_.within_proposals[level];
  std::vector<double> proposal(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) proposal[i] = x[i] + scale * rng.normal();
  const double candidate = lvl.log_density(proposal);
  if (candidate == -std::numeric_limits<double>::infinity()) return false;
  if (!metropolis_accept(candidate - log_density_[level], rng)) return false;
  x = std::move(proposal);
  log_density_[level] = candidate;
  ++diagnostics_.within_accepts[level];
  return true;
}

std::pair<std::size_t, bool> ParallelTempering::sweep(Rng& rng) {
  const std::size_t n = ladder_.levels();
  for (std::size_t level = 0; level < n; ++level) {
    for (std::size_t m = 0; m < options_.within_moves_per_sweep; ++m) within_step(level, rng);
  }
  if (!hottest_sampler_.empty()) {
    hottest_sampler_.front().sample_into(rng, state_.xs[n - 1]);
    log_density_[n - 1] = levels_[n - 1].log_density(state_.xs[n - 1]);
  }
  ++sweeps_done_;
  if (ladder_.pairs() == 0) return {static_cast<std::size_t>(-1), false};
  const std::size_t pair = rng.index(ladder_.pairs());
  return {pair, swap_step(pair, rng)};
}

const SwapDiagnostics& ParallelTempering::run(std::uint64_t n_sweeps, Rng& rng,
                                              const SweepObserver& observer) {
  for (std::uint64_t s = 0; s < n_sweeps; ++s) {
    const auto [pair, accepted] = sweep(rng);
    if (observer) observer(s, state_, pair, accepted);
  }
  return diagnostics_;
}

SwapDiagnostics run(const TargetModel& model, const Ladder& ladder, std::uint64_t n_sweeps,
                    std::size_t within_moves_per_sweep, Rng& rng) {
  RunOptions options;
  options.within_moves_per_sweep = within_moves_per_sweep;
  ParallelTempering pt(model, ladder, std::move(options), rng);
  return pt.run(n_sweeps, rng);
}

}  // namespace rwppt
