#pragma once

namespace hq {

// Standard normal CDF, evaluated through erfc so both tails keep full
// relative precision.
double normal_cdf(double x);

double normal_pdf(double x);

// Inverse of normal_cdf on (0, 1). Acklam's rational approximation followed by
// one Halley step against erfc; absolute error is well below 1e-10 on
// [1e-12, 1 - 1e-12]. Throws std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace hq
