#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hyperheat {

// Invalid user input: bad dimension, negative time, malformed point.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Quadrature or extrapolation did not reach the requested accuracy.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double pi = std::numbers::pi;

struct DimensionParams {
    int n = 3;
    double mass = 0.0;

    DimensionParams() = default;
    explicit DimensionParams(int dim, double m = 0.0) : n(dim), mass(m) {
        if (dim < 2)
            throw config_error("dimension must be >= 2, got " + std::to_string(dim));
        if (!(m >= 0.0) || !std::isfinite(m))
            throw config_error("mass must be a finite non-negative number");
    }

    double rho() const { return 0.5 * (n - 1); }
    int k() const { return (n - 1) / 2; }
    bool odd() const { return n % 2 == 1; }
    double gap() const { return rho() * rho() + mass * mass; }
};

inline void require_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw config_error("diffusion time must be positive and finite");
}

inline void require_radius(double r) {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw config_error("geodesic distance must be non-negative and finite");
}

// Area of the unit sphere S^{n-1}.
inline double sphere_area(int n) {
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace hyperheat
