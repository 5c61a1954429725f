#pragma once

namespace rwppt {

// Standard normal density, CDF and quantile.
//
// The CDF is evaluated through erfc, so it keeps full relative accuracy in
// the lower tail; absolute error is below 1e-15 everywhere. The quantile
// starts from Acklam's rational approximation (relative error ~1.2e-9)
// and applies one Halley correction, which brings it to a few ulps.

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;

/// Inverse of normal_cdf. Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

}  // namespace rwppt
