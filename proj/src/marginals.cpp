#include "rwppt/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rwppt/error.hpp"

namespace rwppt {

namespace {

double int_pow(double base, int z) noexcept {
  switch (z) {
    case 1:
      return base;
    case 2:
      return base * base;
    case 3:
      return base * base * base;
    default: {
      double out = 1.0;
      for (int i = 0; i < z; ++i) out *= base;
      return out;
    }
  }
}

// Fritsch-Carlson monotone slopes for a cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  std::vector<double> m(n);
  m.front() = delta.front();
  m.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return m;
}

void check_beta(double beta) {
  if (!(beta >= kMinBeta && beta <= 1.0)) {
    throw ArgumentError("inverse temperature must lie in [1e-6, 1], got " + std::to_string(beta));
  }
}

void check_half_width(const MarginalFamily& family, double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ArgumentError("half width must be positive and finite");
  }
  if (half_width > family.max_half_width() * (1.0 + 1e-12)) {
    throw ArgumentError("half width exceeds the tabulated grid");
  }
}

std::vector<double> breakpoints(const MarginalFamily& family, double a, double b) {
  std::vector<double> out{a};
  const double h = std::max(std::abs(a), std::abs(b));
  for (double k : family.kinks(h)) {
    if (k > a && k < b) out.push_back(k);
  }
  out.push_back(b);
  return out;
}

}  // namespace

MarginalFamily MarginalFamily::exp_power(int z, double sigma) {
  if (z < 1) throw ArgumentError("exp_power: exponent z must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("exp_power: sigma must be positive");
  }
  return MarginalFamily(ExpPower{z, sigma}, 0.0);
}

MarginalFamily MarginalFamily::tabulated(std::vector<double> grid,
                                         std::vector<double> log_values) {
  if (grid.size() < 16) throw ArgumentError("tabulated: grid needs at least 16 points");
  if (grid.size() != log_values.size()) {
    throw ArgumentError("tabulated: grid and log_values differ in length");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(log_values[i])) {
      throw ArgumentError("tabulated: non-finite entry");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError("tabulated: grid must be strictly increasing");
    }
  }
  const double h = grid.back();
  if (!(h > 0.0) || std::abs(grid.front() + h) > 1e-12 * h) {
    throw ArgumentError("tabulated: grid must span a symmetric interval [-h, h]");
  }
  auto data = std::make_shared<TabulatedData>();
  data->slopes = pchip_slopes(grid, log_values);
  data->table = Tabulated{std::move(grid), std::move(log_values)};
  // The monotone interpolant never leaves the range of its data.
  const double log_max =
      *std::max_element(data->table.log_values.begin(), data->table.log_values.end());
  return MarginalFamily(std::shared_ptr<const TabulatedData>(std::move(data)), log_max);
}

const Tabulated* MarginalFamily::as_tabulated() const noexcept {
  if (const auto* p = std::get_if<std::shared_ptr<const TabulatedData>>(&kind_)) {
    return &(*p)->table;
  }
  return nullptr;
}

double MarginalFamily::log_density(double x) const noexcept {
  if (const auto* ep = std::get_if<ExpPower>(&kind_)) {
    return -int_pow(std::abs(x / ep->sigma), ep->z) / ep->z;
  }
  const TabulatedData& t = *std::get<std::shared_ptr<const TabulatedData>>(kind_);
  const auto& g = t.table.grid;
  const auto& y = t.table.log_values;
  if (x <= g.front()) return y.front();
  if (x >= g.back()) return y.back();
  const std::size_t i =
      static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
  const double h = g[i + 1] - g[i];
  const double s = (x - g[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y[i] + (s3 - 2 * s2 + s) * h * t.slopes[i] +
         (-2 * s3 + 3 * s2) * y[i + 1] + (s3 - s2) * h * t.slopes[i + 1];
}

std::vector<double> MarginalFamily::kinks(double half_width) const {
  if (std::holds_alternative<ExpPower>(kind_)) {
    return {0.0};
  }
  std::vector<double> out;
  for (double g : as_tabulated()->grid) {
    if (g > -half_width && g < half_width) out.push_back(g);
  }
  return out;
}

double MarginalFamily::max_half_width() const noexcept {
  if (std::holds_alternative<ExpPower>(kind_)) return std::numeric_limits<double>::infinity();
  return as_tabulated()->grid.back();
}

double log_density_unnorm(const MarginalFamily& family, double half_width, double x) {
  if (!(std::abs(x) <= half_width)) {
    throw DomainError("log_density_unnorm: x outside the support [-h, h]");
  }
  if (const Tabulated* t = family.as_tabulated(); t && (x < t->grid.front() || x > t->grid.back())) {
    throw DomainError("log_density_unnorm: x outside the tabulated grid");
  }
  return family.log_density(x);
}

TemperedCumulants cumulants(const MarginalFamily& family, double half_width, double beta,
                            const QuadratureOptions& opts) {
  check_beta(beta);
  check_half_width(family, half_width);
  const double shift = family.log_max();
  const auto breaks = breakpoints(family, -half_width, half_width);
  const std::span<const double> br(breaks);
  auto weight = [&](double x) { return std::exp(beta * (family.log_density(x) - shift)); };

  const QuadratureResult mass = integrate(weight, br, opts);
  const double C = mass.value;
  const QuadratureResult first =
      integrate([&](double x) { return family.log_density(x) * weight(x); }, br, opts);
  const double M = first.value / C;
  const QuadratureResult second = integrate(
      [&](double x) {
        const double c = family.log_density(x) - M;
        return c * c * weight(x);
      },
      br, opts);
  const double I = second.value / C;
  const QuadratureResult third = integrate(
      [&](double x) {
        const double c = family.log_density(x) - M;
        return c * c * c * weight(x);
      },
      br, opts);

  TemperedCumulants out;
  out.beta = beta;
  out.log_C = std::log(C) + beta * shift;
  out.M = M;
  out.I = std::max(I, 0.0);
  out.J = third.value / C;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  out.error = (second.error + I * mass.error + 8.0 * eps * second.l1) / C;
  return out;
}

LocationScale tempered_location_scale(const MarginalFamily& family, double half_width,
                                      double beta) {
  check_beta(beta);
  check_half_width(family, half_width);
  const double shift = family.log_max();
  const auto breaks = breakpoints(family, -half_width, half_width);
  const std::span<const double> br(breaks);
  auto weight = [&](double x) { return std::exp(beta * (family.log_density(x) - shift)); };
  const double C = integrate(weight, br).value;
  const double mean = integrate([&](double x) { return x * weight(x); }, br).value / C;
  const double var =
      integrate([&](double x) { return (x - mean) * (x - mean) * weight(x); }, br).value / C;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

TemperedSampler::TemperedSampler(MarginalFamily family, double half_width, double beta)
    : family_(std::move(family)), half_width_(half_width), beta_(beta),
      shift_(family_.log_max()) {
  check_beta(beta);
  check_half_width(family_, half_width);
  auto weight = [&](double x) { return std::exp(beta_ * (family_.log_density(x) - shift_)); };

  x_.resize(kCells + 1);
  for (std::size_t i = 0; i <= kCells; ++i) {
    x_[i] = -half_width + 2.0 * half_width * static_cast<double>(i) / kCells;
  }
  x_.back() = half_width;

  std::vector<double> cell_mass(kCells);
  QuadratureOptions opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  for (std::size_t i = 0; i < kCells; ++i) {
    const auto breaks = breakpoints(family_, x_[i], x_[i + 1]);
    cell_mass[i] = integrate(weight, std::span<const double>(breaks), opts).value;
  }
  cdf_.assign(kCells + 1, 0.0);
  for (std::size_t i = 0; i < kCells; ++i) cdf_[i + 1] = cdf_[i] + cell_mass[i];
  mass_ = cdf_.back();
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw NumericalError("TemperedSampler: density has no finite positive mass", mass_);
  }
  for (double& f : cdf_) f /= mass_;
  cdf_.back() = 1.0;

  alpha_.assign(kCells, 0.0);
  beta_r_.assign(kCells, 0.0);
  monotone_.assign(kCells, 0);
  const double dx = 2.0 * half_width / kCells;
  for (std::size_t i = 0; i < kCells; ++i) {
    const double dF = cdf_[i + 1] - cdf_[i];
    if (!(dF > 0.0)) continue;
    alpha_[i] = weight(x_[i]) / mass_ * dx / dF;
    beta_r_[i] = weight(x_[i + 1]) / mass_ * dx / dF;
    // Fritsch-Carlson sufficient condition for a monotone cubic.
    monotone_[i] = alpha_[i] * alpha_[i] + beta_r_[i] * beta_r_[i] <= 9.0 ? 1 : 0;
  }
  // guide_[g]: last node with cdf <= g / kCells, so lookups start one or two cells short.
  guide_.assign(kCells + 1, 0);
  std::size_t node = 0;
  for (std::size_t g = 0; g <= kCells; ++g) {
    const double level = static_cast<double>(g) / kCells;
    while (node < kCells && cdf_[node + 1] <= level) ++node;
    guide_[g] = static_cast<std::uint32_t>(node);
  }
}

std::size_t TemperedSampler::fallback_cells() const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kCells; ++i) {
    if (cdf_[i + 1] > cdf_[i] && !monotone_[i]) ++n;
  }
  return n;
}

double TemperedSampler::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("TemperedSampler::quantile: u must be in (0, 1)");
  std::size_t cell = guide_[static_cast<std::size_t>(u * kCells)];
  while (cell < kCells && cdf_[cell + 1] <= u) ++cell;
  cell = std::min<std::size_t>(cell, kCells - 1);
  // Skip empty cells left by underflow in the far tails.
  while (cell + 1 < kCells && !(cdf_[cell + 1] > cdf_[cell])) ++cell;
  const double dF = cdf_[cell + 1] - cdf_[cell];
  if (!monotone_[cell]) return exact_quantile_in_cell(cell, u);

  const double target = std::clamp((u - cdf_[cell]) / dF, 0.0, 1.0);
  const double a = alpha_[cell];
  const double b = beta_r_[cell];
  // H(t) = a(t^3 - 2t^2 + t) + (3t^2 - 2t^3) + b(t^3 - t^2), monotone on [0, 1].
  double lo = 0.0, hi = 1.0, t = target;
  for (int iter = 0; iter < 40; ++iter) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double H = a * (t3 - 2 * t2 + t) + (3 * t2 - 2 * t3) + b * (t3 - t2);
    const double r = H - target;
    if (r > 0) hi = t; else lo = t;
    const double dH = a * (3 * t2 - 4 * t + 1) + (6 * t - 6 * t2) + b * (3 * t2 - 2 * t);
    if (dH > 0 && std::abs(r) < 1e-13 * dH) {
      t = std::clamp(t - r / dH, 0.0, 1.0);
      break;
    }
    double next = dH > 0 ? t - r / dH : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return x_[cell] + t * (x_[cell + 1] - x_[cell]);
}

double TemperedSampler::exact_quantile_in_cell(std::size_t cell, double u) const {
  auto weight = [&](double x) { return std::exp(beta_ * (family_.log_density(x) - shift_)); };
  const double target = (u - cdf_[cell]) * mass_;
  double lo = x_[cell], hi = x_[cell + 1];
  for (int iter = 0; iter < 60 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const auto breaks = breakpoints(family_, x_[cell], mid);
    const double partial = integrate(weight, std::span<const double>(breaks)).value;
    if (partial < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double sample_tempered(const MarginalFamily& family, double half_width, double beta, Rng& rng) {
  return TemperedSampler(family, half_width, beta).sample(rng);
}

}  // namespace rwppt
