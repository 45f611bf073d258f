#pragma once

namespace qtdlab {

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

/// Inverse standard normal CDF (Wichura's PPND16 rational approximation,
/// accurate to ~1e-16 relative). Requires p in (0, 1).
double normal_quantile(double p);

}  // namespace qtdlab
