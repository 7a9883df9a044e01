#include "stokesim/rate_fit.hpp"

#include <cmath>

#include "stokesim/errors.hpp"

namespace stokesim {

RateFit fit_rate(const std::vector<double> &xs, const std::vector<double> &ys) {
    if (xs.size() != ys.size())
        throw ValidationError("rate fit requires equal-length inputs");
    if (xs.size() < 2)
        throw ValidationError("rate fit requires at least two points");
    for (double x : xs)
        if (!(x > 0.0))
            throw ValidationError("rate fit abscissas must be positive");
    for (double y : ys)
        if (!(y > 0.0))
            throw ValidationError("rate fit values must be positive");

    RateFit fit;
    fit.abscissas = xs;
    fit.errors = ys;

    const std::size_t n = xs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw ValidationError("rate fit abscissas are degenerate");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(ys[i]) - (fit.intercept + fit.slope * std::log(xs[i]));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace stokesim
