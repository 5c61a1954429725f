#include "rwppt/schedule.hpp"

#include <cmath>
#include <string>

#include "rwppt/error.hpp"
#include "rwppt/theory.hpp"

namespace rwppt {

namespace {

constexpr double kDTolerance = 1e-3;

void check_args(double beta_min, std::size_t d) {
  if (!(beta_min >= kMinBeta && beta_min < 1.0)) {
    throw ArgumentError("beta_min must lie in [1e-6, 1)");
  }
  if (d == 0) throw ArgumentError("dimension must be positive");
}

PairPlan plan_pair(const TargetModel& model, double beta_hi, double beta_lo, std::size_t d) {
  const double ell = (beta_hi - beta_lo) * std::sqrt(static_cast<double>(d));
  return {ell, limiting_acceptance(model, beta_lo, ell)};
}

}  // namespace

LadderPlan geometric_ladder(const TargetModel& model, double beta_min, std::size_t d) {
  check_args(beta_min, d);
  int z = 0;
  for (const Region& r : model.regions()) {
    const ExpPower* ep = r.family.as_exp_power();
    if (!ep) throw ModelMismatchError("geometric_ladder: every region needs an exp-power family");
    if (z != 0 && ep->z != z) {
      throw ModelMismatchError("geometric_ladder: regions must share the exponent z");
    }
    z = ep->z;
    if (r.half_width < 8.0 * ep->sigma * std::pow(beta_min, -1.0 / ep->z)) {
      throw ModelMismatchError(
          "geometric_ladder: support too narrow, need h >= 8 sigma beta_min^{-1/z}");
    }
  }

  const double beta_ref = std::sqrt(beta_min);
  double D = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const Region& r = model.region(k);
    const double d_ref = cumulants(r.family, r.half_width, beta_ref).I * beta_ref * beta_ref;
    if (k == 0) D = d_ref;
    for (double b : {1.0, beta_ref, beta_min}) {
      const double Db = cumulants(r.family, r.half_width, b).I * b * b;
      if (std::abs(Db - D) > kDTolerance * D) {
        throw ModelMismatchError("geometric_ladder: I(beta) beta^2 is not constant (" +
                                 std::to_string(Db) + " vs " + std::to_string(D) +
                                 "); the support truncates the tempered marginals");
      }
    }
  }

  const double ell_one = 2.0 * mhat_root().m_hat / std::sqrt(2.0 * D);
  const double ratio = 1.0 / (1.0 + ell_one / std::sqrt(static_cast<double>(d)));
  std::vector<double> betas{1.0};
  bool clamped = false;
  while (true) {
    const double next = betas.back() * ratio;
    if (next < beta_min) {
      if (betas.back() > beta_min) {
        betas.push_back(beta_min);
        clamped = true;
      }
      break;
    }
    betas.push_back(next);
  }
  LadderPlan plan{Ladder(betas), {}, Construction::geometric, ratio, clamped};
  for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
    plan.pairs.push_back(plan_pair(model, betas[i], betas[i + 1], d));
  }
  return plan;
}

double next_optimal_rung(const TargetModel& model, double beta, double beta_min, std::size_t d) {
  check_args(beta_min, d);
  const double root_d = std::sqrt(static_cast<double>(d));
  auto residual = [&](double b) { return b + optimize_ell(model, b).ell_hat / root_d - beta; };
  if (residual(beta_min) >= 0.0) return beta_min;
  double lo = beta_min, hi = beta;
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

LadderPlan optimal_ladder(const TargetModel& model, double beta_min, std::size_t d) {
  check_args(beta_min, d);
  std::vector<double> betas{1.0};
  bool clamped = false;
  while (betas.back() > beta_min) {
    const double next = next_optimal_rung(model, betas.back(), beta_min, d);
    betas.push_back(next);
    if (next == beta_min) {
      clamped = true;
      break;
    }
  }
  LadderPlan plan{Ladder(betas), {}, Construction::optimal, 0.0, clamped};
  for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
    plan.pairs.push_back(plan_pair(model, betas[i], betas[i + 1], d));
  }
  return plan;
}

}  // namespace rwppt
