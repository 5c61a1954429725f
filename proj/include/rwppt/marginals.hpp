#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "rwppt/quadrature.hpp"
#include "rwppt/random.hpp"

namespace rwppt {

/// Smallest inverse temperature accepted anywhere in the library.
inline constexpr double kMinBeta = 1e-6;

/// Exponential-power base density, log f(x) = -|x/sigma|^z / z (z = 2 is the
/// standard Gaussian convention, z = 1 is Laplace).
struct ExpPower {
  int z = 2;
  double sigma = 1.0;
};

/// log f tabulated on a strictly increasing grid spanning [-h, h].
/// Evaluated by monotone (Fritsch-Carlson) cubic Hermite interpolation.
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> log_values;
};

/// A 1-D base density f_k in centered coordinates. Immutable once built.
class MarginalFamily {
 public:
  static MarginalFamily exp_power(int z, double sigma);
  static MarginalFamily tabulated(std::vector<double> grid, std::vector<double> log_values);

  const ExpPower* as_exp_power() const noexcept { return std::get_if<ExpPower>(&kind_); }
  const Tabulated* as_tabulated() const noexcept;

  /// log f(x) without a support check. Tabulated families clamp to the grid.
  double log_density(double x) const noexcept;

  /// Upper bound on log f used to scale f^beta away from overflow.
  double log_max() const noexcept { return log_max_; }

  /// Points in (-h, h) where log f is not smooth; quadrature splits there.
  std::vector<double> kinks(double half_width) const;

  /// Largest support this family can live on (infinity for ExpPower).
  double max_half_width() const noexcept;

 private:
  struct TabulatedData {
    Tabulated table;
    std::vector<double> slopes;
  };

  explicit MarginalFamily(std::variant<ExpPower, std::shared_ptr<const TabulatedData>> kind,
                          double log_max)
      : kind_(std::move(kind)), log_max_(log_max) {}

  std::variant<ExpPower, std::shared_ptr<const TabulatedData>> kind_;
  double log_max_ = 0.0;
};

/// log f(x) for x in the closed support [-h, h]; DomainError outside.
double log_density_unnorm(const MarginalFamily& family, double half_width, double x);

/// Normalizing constant and log-density cumulants of f^beta on [-h, h].
struct TemperedCumulants {
  double beta = 1.0;
  double log_C = 0.0;  // log of the integral of f^beta over the support
  double M = 0.0;      // E[log f(X)]
  double I = 0.0;      // Var[log f(X)]
  double J = 0.0;      // third central moment of log f(X)
  double error = 0.0;  // quadrature error estimate carried by I
};

/// Moments of L = log f(X) with X ~ f^beta restricted to [-h, h], by adaptive
/// quadrature. Throws ArgumentError for beta outside [kMinBeta, 1] or h <= 0,
/// NumericalError if quadrature does not converge.
TemperedCumulants cumulants(const MarginalFamily& family, double half_width, double beta,
                            const QuadratureOptions& opts = {});

/// Mean and standard deviation of X ~ f^beta on [-h, h].
struct LocationScale {
  double mean = 0.0;
  double stddev = 0.0;
};
LocationScale tempered_location_scale(const MarginalFamily& family, double half_width,
                                      double beta);

/// Inverse-CDF sampler for f^beta on [-h, h].
///
/// The CDF is tabulated on 2048 equal cells by quadrature, with the exact
/// density as node derivative, and inverted with a cubic Hermite interpolant.
/// Cells where the interpolant is not provably monotone fall back to
/// bisection on the quadrature CDF.
class TemperedSampler {
 public:
  static constexpr std::size_t kCells = 2048;

  TemperedSampler(MarginalFamily family, double half_width, double beta);

  double sample(Rng& rng) const { return quantile(rng.uniform()); }

  /// Inverse CDF for u in (0, 1).
  double quantile(double u) const;

  double half_width() const noexcept { return half_width_; }
  double beta() const noexcept { return beta_; }
  std::size_t fallback_cells() const noexcept;

 private:
  double exact_quantile_in_cell(std::size_t cell, double u) const;

  MarginalFamily family_;
  double half_width_;
  double beta_;
  double shift_;
  double mass_ = 0.0;             // integral of exp(beta*(log f - shift))
  std::vector<double> x_;         // kCells + 1 nodes
  std::vector<double> cdf_;       // normalized CDF at nodes
  std::vector<double> alpha_;     // scaled left slope per cell
  std::vector<double> beta_r_;    // scaled right slope per cell
  std::vector<unsigned char> monotone_;
  std::vector<std::uint32_t> guide_;  // first candidate cell per u bucket
};

/// Single draw; builds a sampler, so prefer TemperedSampler for many draws.
double sample_tempered(const MarginalFamily& family, double half_width, double beta, Rng& rng);

}  // namespace rwppt
