#include "rwppt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rwppt/error.hpp"
#include "rwppt/normal.hpp"

namespace rwppt {

namespace {

constexpr std::size_t kGridPoints = 512;
constexpr double kGoldenTol = 1e-8;
constexpr double kUpperBound = 0.234;

void check_profile(const InformationProfile& p) {
  if (p.weights.empty() || p.weights.size() != p.info.size()) {
    throw ArgumentError("InformationProfile: weights and info must be non-empty and aligned");
  }
  for (double i : p.info) {
    if (!(i >= 0.0) || !std::isfinite(i)) throw ArgumentError("InformationProfile: bad I_k");
  }
}

void check_ell(double ell) {
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw ArgumentError("spacing ell must be >= 0");
}

}  // namespace

InformationProfile information_profile(const TargetModel& model, double beta) {
  InformationProfile p;
  for (const Region& r : model.regions()) {
    p.weights.push_back(r.weight);
    p.info.push_back(cumulants(r.family, r.half_width, beta).I);
  }
  return p;
}

double sigma_jm(const InformationProfile& profile, std::size_t j, std::size_t m) {
  check_profile(profile);
  if (j >= profile.size() || m >= profile.size()) throw ArgumentError("sigma_jm: index out of range");
  return std::sqrt(profile.info[j] + profile.info[m]);
}

double sigma_jm(const TargetModel& model, double beta, std::size_t j, std::size_t m) {
  if (j >= model.size() || m >= model.size()) throw ArgumentError("sigma_jm: index out of range");
  const Region& rj = model.region(j);
  const Region& rm = model.region(m);
  return std::sqrt(cumulants(rj.family, rj.half_width, beta).I +
                   cumulants(rm.family, rm.half_width, beta).I);
}

double limiting_acceptance(const InformationProfile& profile, double ell) {
  check_profile(profile);
  check_ell(ell);
  double a = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    for (std::size_t m = 0; m < profile.size(); ++m) {
      const double s = std::sqrt(profile.info[j] + profile.info[m]);
      a += profile.weights[j] * profile.weights[m] * 2.0 * normal_cdf(-0.5 * ell * s);
    }
  }
  return a;
}

double limiting_esjd(const InformationProfile& profile, double ell) {
  return ell * ell * limiting_acceptance(profile, ell);
}

double limiting_esjd_derivative(const InformationProfile& profile, double ell) {
  // d/dl [l^2 2 Phi(-l s / 2)] = 4 l Phi(-l s / 2) - l^2 s phi(l s / 2)
  double out = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    for (std::size_t m = 0; m < profile.size(); ++m) {
      const double s = std::sqrt(profile.info[j] + profile.info[m]);
      const double u = 0.5 * ell * s;
      out += profile.weights[j] * profile.weights[m] *
             (4.0 * ell * normal_cdf(-u) - ell * ell * s * normal_pdf(u));
    }
  }
  return out;
}

double limiting_acceptance(const TargetModel& model, double beta, double ell) {
  return limiting_acceptance(information_profile(model, beta), ell);
}

double limiting_esjd(const TargetModel& model, double beta, double ell) {
  return limiting_esjd(information_profile(model, beta), ell);
}

OptimalSpacing optimize_ell(const InformationProfile& profile) {
  check_profile(profile);
  double min_sigma = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < profile.size(); ++j) {
    for (std::size_t m = 0; m < profile.size(); ++m) {
      min_sigma = std::min(min_sigma, std::sqrt(profile.info[j] + profile.info[m]));
    }
  }
  if (!(min_sigma > 0.0)) {
    throw OptimizerConfigurationError(
        "optimize_ell: some sigma_{j,m} is zero, E(l) has no interior maximum");
  }
  const double ell_max = 10.0 / min_sigma;
  auto E = [&](double l) { return limiting_esjd(profile, l); };

  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 1; i <= kGridPoints; ++i) {
    const double l = ell_max * static_cast<double>(i) / kGridPoints;
    const double v = E(l);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best == kGridPoints) {
    throw OptimizerConfigurationError("optimize_ell: E(l) still increasing at l_max = " +
                                      std::to_string(ell_max));
  }
  double lo = ell_max * static_cast<double>(best - 1) / kGridPoints;
  double hi = ell_max * static_cast<double>(best + 1) / kGridPoints;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = E(c), fd = E(d);
  while (hi - lo > kGoldenTol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = E(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = E(d);
    }
  }
  double ell_hat = 0.5 * (lo + hi);

  // Polish on the stationarity condition where the bracket shows a sign change.
  double a = std::max(lo - 4 * kGoldenTol, 0.5 * lo);
  double b = hi + 4 * kGoldenTol;
  double da = limiting_esjd_derivative(profile, a);
  const double db = limiting_esjd_derivative(profile, b);
  if (da > 0.0 && db < 0.0) {
    for (int iter = 0; iter < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b;
         ++iter) {
      const double mid = 0.5 * (a + b);
      const double dm = limiting_esjd_derivative(profile, mid);
      if (dm > 0.0) {
        a = mid;
        da = dm;
      } else {
        b = mid;
      }
    }
    ell_hat = 0.5 * (a + b);
  }

  OptimalSpacing out{ell_hat, limiting_acceptance(profile, ell_hat)};
  if (!(out.a_hat > 0.0)) {
    throw std::logic_error("optimize_ell: optimal acceptance collapsed to zero");
  }
  if (out.a_hat > kUpperBound + 1e-6) {
    throw std::logic_error("optimize_ell: optimal acceptance " + std::to_string(out.a_hat) +
                           " exceeds the 0.234 bound");
  }
  return out;
}

OptimalSpacing optimize_ell(const TargetModel& model, double beta) {
  return optimize_ell(information_profile(model, beta));
}

MhatRoot mhat_root() {
  auto g = [](double m) { return 2.0 * normal_cdf(-m) - m * normal_pdf(m); };
  double lo = 0.5, hi = 3.0;
  if (!(g(lo) > 0.0 && g(hi) < 0.0)) {
    throw std::logic_error("mhat_root: no sign change on [0.5, 3]");
  }
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  const double m = 0.5 * (lo + hi);
  return {m, 2.0 * normal_cdf(-m)};
}

double h_fun(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("h_fun: x must lie strictly inside (0, 1)");
  const double q = normal_quantile(x);
  return -q * normal_pdf(q);
}

std::vector<std::pair<double, double>> figure_curve(std::span<const double> m_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(m_grid.size());
  for (double m : m_grid) {
    if (!std::isfinite(m)) throw ArgumentError("figure_curve: grid values must be finite");
    out.emplace_back(m, 2.0 * normal_cdf(-m) - m * normal_pdf(m));
  }
  return out;
}

double MixtureLimitLaw::acceptance() const {
  double a = 0.0;
  for (const MixtureComponent& c : components) {
    a += c.prob * 2.0 * normal_cdf(-0.5 * std::sqrt(c.variance));
  }
  return a;
}

MixtureLimitLaw limit_law(const InformationProfile& profile, double ell) {
  check_profile(profile);
  check_ell(ell);
  MixtureLimitLaw law;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    for (std::size_t m = 0; m < profile.size(); ++m) {
      const double s2 = profile.info[j] + profile.info[m];
      law.components.push_back(
          {profile.weights[j] * profile.weights[m], -0.5 * ell * ell * s2, ell * ell * s2, j, m});
    }
  }
  return law;
}

MixtureLimitLaw limit_law(const TargetModel& model, double beta, double ell) {
  return limit_law(information_profile(model, beta), ell);
}

}  // namespace rwppt
