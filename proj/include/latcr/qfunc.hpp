#pragma once

namespace latcr {

/// Standard normal tail probability, Q(x) = P(Z > x).
double q(double x);

/// Inverse of q on (0, 1). Throws InvalidArgument outside the open interval.
double q_inv(double p);

/// Standard normal density.
double normal_pdf(double x);

}  // namespace latcr
