#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dual.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace hyperheat {

struct RadialFunction {
    enum class Decay { compact, gaussian };

    std::function<double(double)> f;
    Decay decay = Decay::gaussian;
    // Support radius (compact) or radius beyond which f is negligible (gaussian).
    double extent = 0.0;

    static RadialFunction compact(std::function<double(double)> fn, double radius) {
        if (!(radius > 0.0)) throw config_error("support radius must be positive");
        return {std::move(fn), Decay::compact, radius};
    }
    static RadialFunction gaussian(std::function<double(double)> fn, double cutoff) {
        if (!(cutoff > 0.0)) throw config_error("truncation radius must be positive");
        return {std::move(fn), Decay::gaussian, cutoff};
    }

    double operator()(double r) const { return f(r); }
};

// Function of the spectral parameter, negligible beyond lambda_max.
struct SpectralFunction {
    std::function<double(double)> f;
    double lambda_max = 0.0;
};

inline void require_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw config_error("spectral parameter must be finite and non-negative");
}

namespace detail {

// 2F1((rho+i l)/2, (rho-i l)/2; n/2; -sinh^2 r); every term is real.
template <class T>
T phi_hypergeometric(int n, double lambda, T r) {
    using std::sinh;
    const double rho = 0.5 * (n - 1);
    T sh = sinh(r);
    T z = -(sh * sh);
    T term(1.0), sum(1.0);
    for (int j = 0; j < 400; ++j) {
        double a = 0.5 * rho + j;
        double ratio = (a * a + 0.25 * lambda * lambda) / ((0.5 * n + j) * (1.0 + j));
        term = term * z * ratio;
        sum = sum + term;
        if (std::abs(value_of(term)) < 1e-18 * std::abs(value_of(sum)) && j > 2) break;
    }
    return sum;
}

// Finite sum for odd n with closed-form integrals of cos(l s) cosh^p s on [0, r].
template <class T>
T phi_finite_sum(int n, double lambda, T r) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    const int rho = (n - 1) / 2;
    T ch = cosh(r), sh = sinh(r);
    T s = sin(lambda * r), c = cos(lambda * r);
    std::vector<T> inner(rho);
    std::vector<T> chp(rho + 1);
    chp[0] = T(1.0);
    for (int p = 1; p <= rho; ++p) chp[p] = chp[p - 1] * ch;
    for (int p = 0; p < rho; ++p) {
        if (p == 0) {
            inner[0] = lambda > 0.0 ? s / lambda : r;
        } else {
            T v = lambda * s * chp[p] + double(p) * c * chp[p - 1] * sh;
            if (p >= 2) v = v + double(p * (p - 1)) * inner[p - 2];
            inner[p] = v / (lambda * lambda + double(p * p));
        }
    }
    T sum(0.0);
    double binom = 1.0;
    for (int l1 = 0; l1 < rho; ++l1) {
        double sign = ((rho - 1 - l1) % 2 == 0) ? 1.0 : -1.0;
        sum = sum + sign * binom * chp[l1] * inner[rho - 1 - l1];
        binom = binom * (rho - 1 - l1) / (l1 + 1);
    }
    double pref = std::pow(2.0, rho) * std::tgamma(rho + 0.5) / (std::sqrt(pi) * std::tgamma(double(rho)));
    return pref * sum / ipow(sh, 2 * rho - 1);
}

// Mean over the sphere written as an angular integral; used for even n.
template <class T>
T phi_angular(int n, double lambda, T r) {
    const double rho = 0.5 * (n - 1);
    const double pref = std::tgamma(rho + 0.5) / (std::sqrt(pi) * std::tgamma(rho));
    auto integrand = [&](double th) {
        using std::cos;
        using std::cosh;
        using std::exp;
        using std::log;
        using std::sinh;
        T w = cosh(r) - std::cos(th) * sinh(r);
        T lw = log(w);
        return exp(-rho * lw) * cos(lambda * lw) * std::pow(std::sin(th), 2.0 * rho - 1.0);
    };
    std::vector<double> breaks;
    const int panels = 2 + static_cast<int>(std::min(60.0, lambda * value_of(r)));
    for (int i = 0; i <= panels; ++i) breaks.push_back(pi * i / panels);
    T total{};
    for (int i = 0; i < panels; ++i)
        total = total + integrate_slots<T>(integrand, breaks[i], breaks[i + 1], 1e-13, 1e-9, "phi_lambda");
    return pref * total;
}

}  // namespace detail

// Spherical function: radial eigenfunction of the Laplacian with value 1 at the origin.
template <class T>
T phi_lambda(const DimensionParams& p, double lambda, T r) {
    require_lambda(lambda);
    require_radius(value_of(r));
    if (value_of(r) == 0.0 && !is_dual_v<T>) return T(1.0);
    const double rv = value_of(r);
    if (rv < 0.5 && lambda * rv < 3.0) return detail::phi_hypergeometric(p.n, lambda, r);
    if (p.odd()) return detail::phi_finite_sum(p.n, lambda, r);
    return detail::phi_angular(p.n, lambda, r);
}

inline double phi_lambda(const DimensionParams& p, double lambda, double r) {
    return phi_lambda<double>(p, lambda, r);
}

// Lanczos approximation, g = 7.
inline std::complex<double> complex_gamma(std::complex<double> z) {
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
    z -= 1.0;
    std::complex<double> x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
    std::complex<double> t = z + 7.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// Harish-Chandra c-function.
inline std::complex<double> c_function(const DimensionParams& p, std::complex<double> lambda) {
    const double rho = p.rho();
    const std::complex<double> il(-lambda.imag(), lambda.real());
    return std::pow(2.0, 2.0 * rho - 1.0) * std::tgamma(rho + 0.5) * complex_gamma(il) /
           (std::sqrt(pi) * complex_gamma(rho + il));
}

namespace detail {

// 4^{2 rho - 1} Gamma(rho + 1/2)^2 / pi = 4^{rho - 1} ((2 rho - 1)!!)^2 for integer rho
inline double plancherel_scale(int rho) {
    double df = 1.0;
    for (int j = 2 * rho - 1; j > 1; j -= 2) df *= j;
    return std::pow(4.0, rho - 1) * df * df;
}

}  // namespace detail

// |c(lambda)|^2 for odd n as a finite product.
inline double c_abs_squared(const DimensionParams& p, double lambda) {
    if (!p.odd()) throw config_error("|c|^2 product form needs odd dimension");
    require_lambda(lambda);
    if (lambda == 0.0) throw config_error("|c(0)|^2 is infinite");
    const int rho = p.k();
    double prod = 1.0;
    for (int l = 1; l <= rho; ++l) prod *= double((rho - l) * (rho - l)) + lambda * lambda;
    return detail::plancherel_scale(rho) / prod;
}

// 1/|c|^2, finite at lambda = 0.
inline double plancherel_density(const DimensionParams& p, double lambda) {
    if (!p.odd()) throw config_error("Plancherel density is only available for odd dimension");
    const int rho = p.k();
    double prod = 1.0;
    for (int l = 1; l <= rho; ++l) prod *= double((rho - l) * (rho - l)) + lambda * lambda;
    return prod / detail::plancherel_scale(rho);
}

// exp(-(i lambda - rho) r) Phi_lambda(r) for complex lambda, by quadrature over u = e^s.
inline std::complex<double> scaled_phi_complex(const DimensionParams& p, std::complex<double> lambda, double r) {
    require_radius(r);
    const double rho = p.rho();
    const std::complex<double> il(-lambda.imag(), lambda.real());
    const double pref = std::pow(2.0, 2.0 * rho) / std::sqrt(pi) * std::tgamma(rho + 0.5) / std::tgamma(rho);
    auto g = [&](double s) {
        // log of (1 + e^{-2r} u^2)^{il - rho} u^{2 rho} (1 + u^2)^{-il - rho}
        double a = std::log1p(std::exp(2.0 * (s - r)));
        double b = std::log1p(std::exp(2.0 * s));
        return std::exp((il - rho) * a + 2.0 * rho * s - (il + rho) * b);
    };
    const double span = 40.0 / rho;
    std::vector<double> breaks;
    for (double s = -span; s < r + span; s += 1.0) breaks.push_back(s);
    breaks.push_back(r + span);
    auto re = [&](double s) { return g(s).real(); };
    auto im = [&](double s) { return g(s).imag(); };
    double vr = checked(integrate_panels(re, breaks, 1e-13), 1e-9, "scaled_phi_complex");
    double vi = checked(integrate_panels(im, breaks, 1e-13), 1e-9, "scaled_phi_complex");
    return pref * std::complex<double>(vr, vi);
}

inline std::complex<double> phi_lambda_complex(const DimensionParams& p, std::complex<double> lambda, double r) {
    const std::complex<double> il(-lambda.imag(), lambda.real());
    return std::exp((il - p.rho()) * r) * scaled_phi_complex(p, lambda, r);
}

// omega_{n-1} int f Phi_lambda sinh^{n-1} dr
inline double forward_radial(const RadialFunction& f, const DimensionParams& p, double lambda) {
    require_lambda(lambda);
    auto integrand = [&](double r) { return f(r) * phi_lambda(p, lambda, r) * std::pow(std::sinh(r), p.n - 1); };
    std::vector<double> breaks;
    const double width = std::min(1.0, 2.0 / std::max(lambda, 1e-3));
    for (double r = 0.0; r < f.extent; r += width) breaks.push_back(r);
    breaks.push_back(f.extent);
    return sphere_area(p.n) * checked(integrate_panels(integrand, breaks, 1e-12), 1e-8, "forward_radial");
}

inline double inverse_radial(const SpectralFunction& ft, const DimensionParams& p, double r) {
    if (!p.odd()) throw config_error("inverse radial transform needs odd dimension");
    require_radius(r);
    if (!(ft.lambda_max > 0.0)) throw config_error("spectral cutoff must be positive");
    auto integrand = [&](double l) { return ft.f(l) * phi_lambda(p, l, r) * plancherel_density(p, l); };
    std::vector<double> breaks;
    const double width = std::min(1.0, 2.0 / std::max(r, 1e-3));
    for (double l = 0.0; l < ft.lambda_max; l += width) breaks.push_back(l);
    breaks.push_back(ft.lambda_max);
    const double pref = std::pow(2.0, 2.0 * p.rho()) / (2.0 * pi * sphere_area(p.n));
    return pref * checked(integrate_panels(integrand, breaks, 1e-12), 1e-8, "inverse_radial");
}

struct PlancherelSides {
    double spatial;
    double spectral;
};

inline PlancherelSides plancherel_sides(const RadialFunction& f, const DimensionParams& p) {
    if (!p.odd()) throw config_error("Plancherel identity needs odd dimension");
    auto spatial_integrand = [&](double r) {
        double v = f(r);
        return v * v * std::pow(std::sinh(r), p.n - 1);
    };
    std::vector<double> rb;
    for (double r = 0.0; r < f.extent; r += 1.0) rb.push_back(r);
    rb.push_back(f.extent);
    double spatial = sphere_area(p.n) * checked(integrate_panels(spatial_integrand, rb, 1e-13), 1e-9, "plancherel");

    auto density = [&](double l) {
        double v = forward_radial(f, p, l);
        return v * v * plancherel_density(p, l);
    };
    // Walk out until the spectral density is negligible.
    double peak = 0.0, lmax = 1.0;
    for (double l = 0.5;; l += 0.5) {
        double g = std::abs(density(l));
        peak = std::max(peak, g);
        if (g <= 1e-18 * peak && l > 2.0) {
            lmax = l;
            break;
        }
        if (l > 200.0) throw numeric_error("spectral side does not decay");
    }
    std::vector<double> lb;
    for (double l = 0.0; l < lmax; l += 1.0) lb.push_back(l);
    lb.push_back(lmax);
    const double pref = std::pow(2.0, 2.0 * p.rho()) / (2.0 * pi * sphere_area(p.n));
    double spectral = pref * checked(integrate_panels(density, lb, 1e-11), 1e-8, "plancherel");
    return {spatial, spectral};
}

// Spectral side of the Plancherel identity, checked against the spatial norm.
inline double plancherel_norm(const RadialFunction& f, const DimensionParams& p, double tol = 1e-6) {
    PlancherelSides s = plancherel_sides(f, p);
    double scale = std::max(std::abs(s.spatial), 1e-300);
    if (std::abs(s.spatial - s.spectral) > tol * scale)
        throw numeric_error("Plancherel sides disagree: spatial " + std::to_string(s.spatial) + " spectral " +
                            std::to_string(s.spectral));
    return s.spectral;
}

}  // namespace hyperheat
