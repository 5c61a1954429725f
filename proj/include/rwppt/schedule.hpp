#pragma once

#include <cstddef>
#include <vector>

#include "rwppt/pt_engine.hpp"
#include "rwppt/target.hpp"

namespace rwppt {

enum class Construction { geometric, optimal };

/// Pair i couples rungs i and i + 1; ell_used = (beta_i - beta_{i+1}) sqrt(d).
struct PairPlan {
  double ell_used = 0.0;
  double predicted_acceptance = 0.0;
};

struct LadderPlan {
  Ladder ladder;
  std::vector<PairPlan> pairs;
  Construction construction = Construction::optimal;
  double ratio = 0.0;          // beta_{i+1} / beta_i for geometric plans
  bool clamped_final = false;  // last rung was clamped to beta_min
};

/// Constant-ratio ladder for exp-power regions sharing one exponent z.
///
/// D = I(beta) beta^2 is read off at beta_ref = sqrt(beta_min) and must be the
/// same, within 1e-3 relative, at beta = 1, beta_ref and beta_min and across
/// regions; otherwise ModelMismatchError. The ratio is 1 / (1 + l_hat(1)/sqrt(d))
/// with l_hat(beta) = 2 m_hat beta / sqrt(2 D).
LadderPlan geometric_ladder(const TargetModel& model, double beta_min, std::size_t d);

/// Rung-by-rung optimal ladder: from beta, the next rung b solves
/// b + l_hat(b) / sqrt(d) = beta, so that each pair is spaced by the optimal l
/// of its lower level.
LadderPlan optimal_ladder(const TargetModel& model, double beta_min, std::size_t d);

/// One step of optimal_ladder. Returns beta_min when the optimal rung would fall below it.
double next_optimal_rung(const TargetModel& model, double beta, double beta_min, std::size_t d);

}  // namespace rwppt
