#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dual.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace hyperheat {

// Point of the upper half-space model; the last coordinate is the height.
class HalfSpacePoint {
public:
    explicit HalfSpacePoint(std::vector<double> coords) : x_(std::move(coords)) {
        if (x_.empty()) throw config_error("half-space point needs at least one coordinate");
        for (double c : x_)
            if (!std::isfinite(c)) throw config_error("half-space point has a non-finite coordinate");
        if (!(x_.back() > 0.0)) throw config_error("half-space point must have positive last coordinate");
    }

    int dim() const { return static_cast<int>(x_.size()); }
    double operator[](int i) const { return x_[i]; }
    double height() const { return x_.back(); }
    const std::vector<double>& coords() const { return x_; }

private:
    std::vector<double> x_;
};

// Chordal distance |x - y|^2 / (2 x_n y_n); templated so derivatives can flow through it.
template <class T>
T chordal_u(const std::vector<T>& x, const std::vector<T>& y) {
    T s(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) s = s + (x[i] - y[i]) * (x[i] - y[i]);
    return s / (2.0 * x.back() * y.back());
}

inline double chordal_u(const HalfSpacePoint& x, const HalfSpacePoint& y) {
    if (x.dim() != y.dim()) throw config_error("points live in different dimensions");
    return chordal_u(x.coords(), y.coords());
}

// arccosh(1 + u) without cancellation near u = 0.
inline double distance_from_chordal(double u) { return std::log1p(u + std::sqrt(u * (u + 2.0))); }

inline double geodesic_distance(const HalfSpacePoint& x, const HalfSpacePoint& y) {
    return distance_from_chordal(chordal_u(x, y));
}

// Element of SO+(1, n) acting on the half-space model.
class MobiusElement {
public:
    MobiusElement(int n, std::vector<double> matrix) : n_(n), h_(std::move(matrix)) {
        const int m = n + 1;
        if (n < 1 || static_cast<int>(h_.size()) != m * m)
            throw config_error("Lorentz matrix must be (n+1)x(n+1)");
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int a = 0; a < m; ++a) s += (a == 0 ? 1.0 : -1.0) * at(a, i) * at(a, j);
                double target = i == j ? (i == 0 ? 1.0 : -1.0) : 0.0;
                if (std::abs(s - target) > 1e-12) throw config_error("matrix does not preserve the Minkowski form");
            }
        }
        if (std::abs(determinant() - 1.0) > 1e-12) throw config_error("Lorentz matrix must have determinant 1");
        if (!(at(0, 0) > 0.0)) throw config_error("Lorentz matrix must be orthochronous");
    }

    static MobiusElement identity(int n) {
        std::vector<double> h((n + 1) * (n + 1), 0.0);
        for (int i = 0; i <= n; ++i) h[i * (n + 1) + i] = 1.0;
        return MobiusElement(n, h);
    }

    // Boost in the (0, n) plane: dilation along the vertical geodesic.
    static MobiusElement vertical_boost(int n, double rapidity) {
        std::vector<double> h((n + 1) * (n + 1), 0.0);
        for (int i = 0; i <= n; ++i) h[i * (n + 1) + i] = 1.0;
        h[0] = h[n * (n + 1) + n] = std::cosh(rapidity);
        h[n] = h[n * (n + 1)] = std::sinh(rapidity);
        return MobiusElement(n, h);
    }

    int n() const { return n_; }
    double at(int i, int j) const { return h_[i * (n_ + 1) + j]; }

    double determinant() const {
        const int m = n_ + 1;
        std::vector<double> a = h_;
        double det = 1.0;
        for (int c = 0; c < m; ++c) {
            int piv = c;
            for (int r = c + 1; r < m; ++r)
                if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
            if (a[piv * m + c] == 0.0) return 0.0;
            if (piv != c) {
                for (int j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
                det = -det;
            }
            det *= a[c * m + c];
            for (int r = c + 1; r < m; ++r) {
                double f = a[r * m + c] / a[c * m + c];
                for (int j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
            }
        }
        return det;
    }

private:
    int n_;
    std::vector<double> h_;
};

inline HalfSpacePoint mobius_apply(const MobiusElement& h, const HalfSpacePoint& x) {
    const int n = h.n();
    if (x.dim() != n) throw config_error("point dimension does not match the group element");
    double x2 = 0.0;
    for (double c : x.coords()) x2 += c * c;
    double cross = 0.0;
    for (int k = 1; k < n; ++k) cross += (h.at(0, k) - h.at(n, k)) * x[k - 1];
    double ah = h.at(0, 0) + h.at(0, n) - h.at(n, 0) - h.at(n, n);
    double bh = h.at(0, 0) + h.at(n, n) - h.at(n, 0) - h.at(0, n);
    double den = ah * x2 + 2.0 * cross + bh;
    if (!(std::abs(den) > 1e-300) || !std::isfinite(den))
        throw numeric_error("Mobius image lies on the boundary at infinity");
    std::vector<double> y(n);
    for (int i = 1; i < n; ++i) {
        double s = 0.0;
        for (int k = 1; k < n; ++k) s += h.at(i, k) * x[k - 1];
        y[i - 1] = ((h.at(i, 0) + h.at(i, n)) * x2 + 2.0 * s + h.at(i, 0) - h.at(i, n)) / den;
    }
    y[n - 1] = 2.0 * x.height() / den;
    if (!(y[n - 1] > 0.0)) throw numeric_error("Mobius image left the upper half-space");
    return HalfSpacePoint(std::move(y));
}

inline double ball_volume(const DimensionParams& p, double r) {
    if (!(r > 0.0)) throw config_error("ball radius must be positive");
    const double omega = sphere_area(p.n);
    const double sh = std::sinh(0.5 * r);
    switch (p.n) {
        case 2:
            return omega * 2.0 * sh * sh;
        case 3: {
            // (sinh 2r - 2r) / 4
            double q;
            if (r < 0.1) {
                double x = 2.0 * r, term = x * x * x / 6.0;
                q = 0.0;
                for (int j = 1; j < 12; ++j) {
                    q += term;
                    term *= x * x / ((2 * j + 2) * (2 * j + 3));
                }
            } else {
                q = std::sinh(2.0 * r) - 2.0 * r;
            }
            return omega * 0.25 * q;
        }
        case 4: {
            double cm1 = 2.0 * sh * sh;
            return omega * cm1 * cm1 * (cm1 + 3.0) / 3.0;
        }
        default: {
            auto f = [&](double w) { return std::pow(std::sinh(w), p.n - 1); };
            return omega * checked(integrate(f, 0.0, r, 1e-12), 1e-10, "ball_volume");
        }
    }
}

// f'' + (n-1) coth(r) f'; exact derivatives when f accepts second-order duals.
template <class F>
double radial_laplacian(F&& f, const DimensionParams& p, double r) {
    if (!(r > 0.0)) throw config_error("radial Laplacian needs r > 0");
    double d1, d2;
    using D2 = Dual<Dual<double>>;
    if constexpr (std::is_invocable_v<F, D2>) {
        D2 y = f(make_variable<D2>(r));
        d1 = y.v.d;
        d2 = y.d.d;
    } else {
        double h = std::max(1e-5, 1e-5 * r);
        double fp = f(r + h), f0 = f(r), fm = f(r - h);
        d1 = (fp - fm) / (2.0 * h);
        d2 = (fp - 2.0 * f0 + fm) / (h * h);
    }
    double out = d2 + (p.n - 1) / std::tanh(r) * d1;
    if (!std::isfinite(out)) throw numeric_error("radial Laplacian is not finite");
    return out;
}

// (r / sinh r)^{n-1}
inline double van_vleck(const DimensionParams& p, double r) {
    require_radius(r);
    if (r == 0.0) return 1.0;
    return std::pow(r / std::sinh(r), p.n - 1);
}

}  // namespace hyperheat
