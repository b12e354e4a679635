#include <cmath>

#include "specreg/analysis.hpp"
#include "specreg/error.hpp"

namespace specreg {

double effective_dimension(std::span<const double> mu, double lambda, double l) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::BadParams, "lambda must be positive");
    if (!(l >= 1.0)) throw Error(ErrorCode::BadParams, "l must be >= 1");
    double acc = 0.0;
    // smallest terms first
    for (auto it = mu.rbegin(); it != mu.rend(); ++it) acc += std::pow(*it / (*it + lambda), l);
    return acc;
}

EffdimBounds effective_dimension_bounds(double p, double l, double d1, double d2) {
    if (!(p > 0.0 && p < l)) throw Error(ErrorCode::BadParams, "bounds need 0 < p < l");
    const double tail = p / (l - p);
    return {std::pow(d1 / (d1 + 1.0), l) * tail, 1.0 + std::pow(d2, l) * tail};
}

double empirical_norm(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::BadParams, "empirical norm of an empty sample");
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values.size()));
}

}  // namespace specreg
