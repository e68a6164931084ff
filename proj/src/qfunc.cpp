#include "latcr/qfunc.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latcr/errors.hpp"

namespace latcr {

double q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// Acklam's rational approximation of the standard normal quantile, relative
// error ~1e-9. Returns z with Phi(z) = p.
double acklam_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double t = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
               ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double t = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
               ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    }
    const double u = p - 0.5;
    const double r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        fail(ErrorKind::InvalidArgument, "q_inv: probability must lie in (0, 1), got " +
                                             std::to_string(p));
    }
    if (p == 0.5) return 0.0;

    // Q(x) = p  <=>  Phi(-x) = p.
    double x = -acklam_quantile(p);

    // Halley refinement on f(x) = Q(x) - p. The residual is formed on the
    // smaller tail so it keeps full relative precision for p near 0 and 1.
    for (int i = 0; i < 3; ++i) {
        const double f = (p < 0.5) ? q(x) - p : (1.0 - p) - q(-x);
        const double step = f / -normal_pdf(x);
        // f'' / f' = -x for the normal density.
        x -= step / (1.0 + 0.5 * step * x);
    }
    return x;
}

}  // namespace latcr
