#ifndef TORICMEM_FITTING_H
#define TORICMEM_FITTING_H

#include <stdexcept>
#include <string>
#include <vector>

#include "toricmem/sample.h"

namespace toricmem {

/// Raised when a fit has fewer than three usable points.
class InsufficientData : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// One failure-rate measurement; trials sets the weight and may be fractional.
struct RatePoint {
    double p = 0.0;
    double rate = 0.0;
    double trials = 0.0;
};

struct PerKFit {
    int k = 0;
    /// Fitted exponent of p/p_c, the estimate of k^beta.
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double p_c = 0.0;
    double p_c_stderr = 0.0;
    /// Rates used satisfy f_min <= F <= f_max and F > 0.
    double f_min = 0.0;
    double f_max = 0.05;
    int points = 0;
    /// Weighted sum of squared residuals in log F.
    double residual = 0.0;
};

struct BetaFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    double intercept_stderr = 0.0;
    int points = 0;
};

/// Weighted least squares of log F = E log(p/p_c), i.e. log F = E log p - E log p_c, with
/// weights trials F/(1-F), the inverse delta-method variance of log F.
/// Throws InsufficientData for fewer than 3 points in the window.
PerKFit fit_per_k(const std::vector<RatePoint> &points, int k, double f_max = 0.05, double f_min = 0.0);
PerKFit fit_per_k(const std::vector<FailureSample> &samples, double f_max = 0.05, double f_min = 0.0);

/// Ordinary least squares of log E_k on log k. Throws InsufficientData for fewer than 3 distinct k.
BetaFit fit_beta(const std::vector<PerKFit> &per_k);

struct ScalingFit {
    /// Lower rate cut shared by every k, chosen to minimize the stderr of the slope.
    double f_min = 0.0;
    double f_max = 0.05;
    std::vector<PerKFit> per_k;
    BetaFit beta;
    int cuts_tried = 0;
};

/// Per-k fits on samples grouped by k, then fit_beta. Every observed rate below f_max (and 0)
/// is tried as the shared lower cut; cuts that leave some k with under 3 points are skipped.
ScalingFit fit_scaling(const std::vector<FailureSample> &samples, double f_max = 0.05);

/// Fit at one given lower cut.
ScalingFit fit_scaling_at(const std::vector<FailureSample> &samples, double f_min, double f_max = 0.05);

}  // namespace toricmem

#endif
