#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rwppt/random.hpp"
#include "rwppt/target.hpp"

namespace rwppt {

/// Inverse temperatures 1 = beta_0 > beta_1 > ... > beta_n > 0.
class Ladder {
 public:
  explicit Ladder(std::vector<double> betas);

  std::span<const double> betas() const noexcept { return betas_; }
  double operator[](std::size_t i) const { return betas_.at(i); }
  std::size_t levels() const noexcept { return betas_.size(); }
  std::size_t pairs() const noexcept { return betas_.size() - 1; }

 private:
  std::vector<double> betas_;
};

/// One point per temperature level.
struct LadderState {
  std::vector<std::vector<double>> xs;
};

struct PairStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  double beta_lo = 0.0;
  double beta_hi = 0.0;

  /// Sum over proposals of the squared jump in inverse temperature.
  double esjd_sum() const noexcept {
    const double gap = beta_hi - beta_lo;
    return static_cast<double>(accepts) * (gap * gap);
  }
  double acceptance_rate() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(accepts) / static_cast<double>(proposals);
  }
  /// Per-proposal expected squared jump distance.
  double esjd() const noexcept {
    return proposals == 0 ? 0.0 : esjd_sum() / static_cast<double>(proposals);
  }
};

struct SwapDiagnostics {
  std::vector<PairStats> pairs;              // pair i couples levels i and i + 1
  std::vector<std::uint64_t> within_proposals;  // per level
  std::vector<std::uint64_t> within_accepts;
};

/// Log acceptance ratio of swapping x (currently at lo.beta()) with y (at hi.beta()):
/// B = H(x) - H(y), H(v) = log pi_hi(v) - log pi_lo(v).
/// StateError if either point lies outside every region.
double log_swap_ratio(const TemperedLevel& lo, const TemperedLevel& hi, std::span<const double> x,
                      std::span<const double> y);

/// Convenience form that evaluates the normalizing constants on the fly.
/// ArgumentError unless 0 < beta_lo < beta_hi <= 1.
double log_swap_ratio(const TargetModel& model, double beta_lo, double beta_hi,
                      std::span<const double> x, std::span<const double> y);

/// Default random-walk scale at one level: 2.4 s / sqrt(d), where s is the
/// smallest per-region marginal scale (sigma beta^{-1/z} for exp-power,
/// tempered standard deviation for tabulated families).
double default_step_scale(const TargetModel& model, double beta);

/// Gaussian random-walk Metropolis update of x under pi_beta. Proposals that
/// leave every region are rejected. Returns whether the move was accepted.
bool rwm_step(const TemperedLevel& level, std::vector<double>& x, double step_scale, Rng& rng);

struct RunOptions {
  std::size_t within_moves_per_sweep = 1;
  /// Per-level RWM scale; empty means default_step_scale for every level.
  std::vector<double> step_scales;
  /// Replace the hottest level by an exact stationary draw once per sweep.
  /// This is a pi_{beta_n}-invariant kernel that stands in for a rapidly
  /// mixing hot chain.
  bool refresh_hottest = false;
};

/// Called after every sweep with the sweep index, the state, the pair that
/// was proposed (or SIZE_MAX for one-level ladders) and whether it was accepted.
using SweepObserver =
    std::function<void(std::uint64_t sweep, const LadderState& state, std::size_t pair, bool accepted)>;

/// The RWPPT chain. Owns its state; the model must outlive it.
class ParallelTempering {
 public:
  /// Initializes every level with an exact stationary draw.
  ParallelTempering(const TargetModel& model, Ladder ladder, RunOptions options, Rng& rng);

  const Ladder& ladder() const noexcept { return ladder_; }
  const LadderState& state() const noexcept { return state_; }
  const SwapDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  const TemperedLevel& level(std::size_t i) const { return levels_.at(i); }

  /// Replaces the state; every point must sit inside a region.
  void set_state(LadderState state);

  /// Metropolis swap between levels i and i + 1.
  bool swap_step(std::size_t pair, Rng& rng);

  /// One RWM update at the given level.
  bool within_step(std::size_t level, Rng& rng);

  /// within_moves_per_sweep RWM updates at every level, then one uniformly
  /// chosen adjacent swap. Returns the proposed pair and its outcome.
  std::pair<std::size_t, bool> sweep(Rng& rng);

  const SwapDiagnostics& run(std::uint64_t n_sweeps, Rng& rng, const SweepObserver& observer = {});

 private:
  const TargetModel* model_;
  Ladder ladder_;
  RunOptions options_;
  std::vector<TemperedLevel> levels_;
  std::vector<StationarySampler> hottest_sampler_;  // empty unless refresh_hottest
  LadderState state_;
  std::vector<double> log_density_;  // cached log pi_{beta_i}(xs[i])
  SwapDiagnostics diagnostics_;
  std::uint64_t sweeps_done_ = 0;
};

/// Runs n_sweeps of the chain from exact stationary draws and returns the diagnostics.
SwapDiagnostics run(const TargetModel& model, const Ladder& ladder, std::uint64_t n_sweeps,
                    std::size_t within_moves_per_sweep, Rng& rng);

}  // namespace rwppt
