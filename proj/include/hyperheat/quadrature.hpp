#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dual.hpp"
#include "params.hpp"

namespace hyperheat {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;

    double relative_error() const {
        double scale = std::max(std::abs(value), l1);
        return scale > 0.0 ? error / scale : 0.0;
    }
};

inline QuadResult operator+(QuadResult a, const QuadResult& b) {
    return {a.value + b.value, a.error + b.error, a.l1 + b.l1};
}

// Adaptive Gauss-Kronrod on [a, b]; infinite limits allowed.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol = 1e-13, unsigned max_depth = 15) {
    QuadResult r;
    if (a == b) return r;
    using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (std::isfinite(a) && std::isfinite(b)) {
        // Boost's error estimate degrades on short intervals; integrate over [0, 1] instead.
        const double w = b - a;
        auto g = [&](double s) { return w * f(a + w * s); };
        r.value = rule::integrate(g, 0.0, 1.0, max_depth, tol, &r.error, &r.l1);
        return r;
    }
    r.value = rule::integrate(f, a, b, max_depth, tol, &r.error, &r.l1);
    return r;
}

// Sum of panels between consecutive break points.
// Tolerance is relative to the whole range, so negligible panels are not over-resolved.
template <class F>
QuadResult integrate_panels(F&& f, const std::vector<double>& breaks, double tol = 1e-13) {
    const std::size_t m = breaks.size() < 2 ? 0 : breaks.size() - 1;
    std::vector<QuadResult> coarse(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        coarse[i] = integrate(f, breaks[i], breaks[i + 1], tol, 0);
        scale += coarse[i].l1;
    }
    QuadResult total;
    for (std::size_t i = 0; i < m; ++i) {
        if (coarse[i].error <= tol * scale) {
            total = total + coarse[i];
            continue;
        }
        double local = coarse[i].l1 > 0.0 ? std::min(1e-3, tol * scale / coarse[i].l1) : tol;
        QuadResult r = integrate(f, breaks[i], breaks[i + 1], local);
        if (r.error > coarse[i].error) r = coarse[i];
        r.l1 = std::max(r.l1, coarse[i].l1);
        total = total + r;
    }
    return total;
}

// Double-exponential rule for integrable endpoint singularities.
template <class F>
QuadResult integrate_singular(F&& f, double a, double b, double tol = 1e-12) {
    static thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    QuadResult r;
    std::size_t levels = 0;
    r.value = rule.integrate(f, a, b, tol, &r.error, &r.l1, &levels);
    return r;
}

inline double checked(const QuadResult& r, double fail_tol, const std::string& what) {
    if (!std::isfinite(r.value) || r.relative_error() > fail_tol)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, ": quadrature error estimate %.3e exceeds %.3e", r.relative_error(), fail_tol);
        throw numeric_error(what + buf);
    }
    return r.value;
}

// Integrate the slots of a dual-valued integrand one at a time.
template <class T, class F>
T integrate_slots(F&& f, double a, double b, double tol, double fail_tol, const std::string& what) {
    T out{};
    for (int i = 0; i < dual_width<T>::value; ++i) {
        auto component = [&](double x) {
            T y = f(x);
            return slot(y, i);
        };
        slot(out, i) = checked(integrate(component, a, b, tol), fail_tol, what);
    }
    return out;
}

// Richardson extrapolation of values at h, h/2, h/4 for an h^2 error law.
struct Extrapolated {
    double value;
    double change;
};

inline Extrapolated richardson3(double f1, double f2, double f4) {
    double a = (4.0 * f2 - f1) / 3.0;
    double b = (4.0 * f4 - f2) / 3.0;
    return {(16.0 * b - a) / 15.0, std::abs(b - a)};
}

}  // namespace hyperheat
