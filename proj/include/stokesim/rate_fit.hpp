#pragma once

#include <vector>

namespace stokesim {

/// Log-log least-squares fit of errors against a sweep parameter.
struct RateFit {
    std::vector<double> abscissas;
    std::vector<double> errors;
    double slope = 0.0;
    double intercept = 0.0; ///< in log space
    double residual = 0.0;  ///< RMS of log-space residuals
};

/// Ordinary least squares on (log x, log y); requires >= 2 points, all
/// positive.
RateFit fit_rate(const std::vector<double> &xs, const std::vector<double> &ys);

} // namespace stokesim
