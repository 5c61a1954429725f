#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rwppt/target.hpp"

namespace rwppt {

/// Region weights w_k together with I_k(beta) = Var_{f_k^beta}[log f_k(X)].
/// Every limiting quantity depends on the model only through this profile.
struct InformationProfile {
  std::vector<double> weights;
  std::vector<double> info;

  std::size_t size() const noexcept { return weights.size(); }
};

InformationProfile information_profile(const TargetModel& model, double beta);

/// sigma_{j,m}(beta) = sqrt(I_j + I_m).
double sigma_jm(const InformationProfile& profile, std::size_t j, std::size_t m);
double sigma_jm(const TargetModel& model, double beta, std::size_t j, std::size_t m);

/// a(l) = sum_{j,m} w_j w_m 2 Phi(-l sigma_{j,m} / 2).
double limiting_acceptance(const InformationProfile& profile, double ell);
/// E(l) = l^2 a(l).
double limiting_esjd(const InformationProfile& profile, double ell);
/// dE/dl.
double limiting_esjd_derivative(const InformationProfile& profile, double ell);

double limiting_acceptance(const TargetModel& model, double beta, double ell);
double limiting_esjd(const TargetModel& model, double beta, double ell);

struct OptimalSpacing {
  double ell_hat = 0.0;
  double a_hat = 0.0;
};

/// Maximizes E(l) on (0, l_max], l_max = 10 / min sigma_{j,m}: 512-point grid,
/// golden section on the bracketing cells, then bisection on dE/dl.
/// OptimizerConfigurationError if the maximum sits at l_max.
OptimalSpacing optimize_ell(const InformationProfile& profile);
OptimalSpacing optimize_ell(const TargetModel& model, double beta);

/// Root of 2 Phi(-m) = m phi(m) on [0.5, 3], and 2 Phi(-m_hat) (~0.234).
struct MhatRoot {
  double m_hat = 0.0;
  double value = 0.0;
};
MhatRoot mhat_root();

/// h(x) = -Phi^{-1}(x) phi(Phi^{-1}(x)); DomainError unless 0 < x < 1.
double h_fun(double x);

/// Points (m, 2 Phi(-m) - m phi(m)).
std::vector<std::pair<double, double>> figure_curve(std::span<const double> m_grid);

struct MixtureComponent {
  double prob = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t j = 0;
  std::size_t m = 0;
};

/// Gaussian-mixture limit of the swap log-ratio B: K^2 components with
/// probability w_j w_m, mean -l^2 (I_j + I_m) / 2 and variance l^2 (I_j + I_m).
struct MixtureLimitLaw {
  std::vector<MixtureComponent> components;

  /// E[min(1, e^B)] under the mixture, using E(1 ^ e^G) = 2 Phi(-sigma / 2).
  double acceptance() const;
};

MixtureLimitLaw limit_law(const InformationProfile& profile, double ell);
MixtureLimitLaw limit_law(const TargetModel& model, double beta, double ell);

}  // namespace rwppt
