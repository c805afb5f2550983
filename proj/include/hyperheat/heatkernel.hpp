#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fourier.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "terms.hpp"

namespace hyperheat {

enum class Method { closed_form, quadrature, recurrence, spectral, descent };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::recurrence: return "recurrence";
        case Method::spectral: return "spectral";
        case Method::descent: return "descent";
    }
    return "unknown";
}

struct KernelValue {
    double value = 0.0;
    int n = 0;
    double r = 0.0;
    double t = 0.0;
    double mass = 0.0;
    Method method = Method::closed_form;
};

// Gaussian tail below this fraction of the peak is dropped from radial integrals.
inline constexpr double gaussian_floor = 1e-18;

namespace detail {

struct OddKernelData {
    GaussianTermExpr expr;
    CompiledExpr value, dr, drr, dt;
};

// Terms of (1/sinh r d/dr)^k exp(-r^2/4t), Gaussian stripped.
inline const OddKernelData& odd_kernel_data(int k) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<OddKernelData>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(k);
    if (it != cache.end()) return *it->second;
    auto data = std::make_unique<OddKernelData>();
    GaussianTermExpr e = GaussianTermExpr::constant(1);
    for (int i = 0; i < k; ++i) e = e.recurrence_step();
    data->expr = e;
    data->value = CompiledExpr(e);
    GaussianTermExpr er = e.d_r();
    data->dr = CompiledExpr(er);
    data->drr = CompiledExpr(er.d_r());
    data->dt = CompiledExpr(e.d_t());
    return *cache.emplace(k, std::move(data)).first->second;
}

// Terms of (1/sinh s d/ds)^k [2 s csch(s) exp(-s^2/4t)], Gaussian stripped.
inline const CompiledExpr& even_integrand(int k) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<CompiledExpr>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(k);
    if (it != cache.end()) return *it->second;
    GaussianTermExpr e = GaussianTermExpr::monomial(2, 1, 0, 1, 0);
    for (int i = 0; i < k; ++i) e = e.recurrence_step();
    return *cache.emplace(k, std::make_unique<CompiledExpr>(e)).first->second;
}

inline double sign_pow(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

// (-1)^k / (2 pi)^k (4 pi t)^{-1/2}
inline double odd_prefactor(int k, double t) {
    return sign_pow(k) / std::pow(2.0 * pi, k) / std::sqrt(4.0 * pi * t);
}

inline double gaussian(double r, double t) { return std::exp(-r * r / (4.0 * t)); }

// cosh a - cosh b for a >= b without cancellation.
inline double cosh_gap(double a, double b) { return 2.0 * std::sinh(0.5 * (a + b)) * std::sinh(0.5 * (a - b)); }

// int_r^inf h(s) sinh s / sqrt(cosh s - cosh r) ds = 2 int_0^inf h(s(v)) dv, cosh s = cosh r + v^2.
template <class H>
double abel_integral(H&& h, double r, double t, const std::string& what, double tol = 1e-12) {
    const double s_max = std::sqrt(r * r + 4.0 * t * std::log(1.0 / gaussian_floor));
    const double s1 = std::min(r + 1.0, s_max);
    const double base = 2.0 * std::pow(std::sinh(0.5 * r), 2);
    auto in_v = [&](double v) {
        double w = base + v * v;
        double s = std::log1p(w + std::sqrt(w * (w + 2.0)));
        return h(s);
    };
    const double v1 = std::sqrt(cosh_gap(s1, r));
    QuadResult total = integrate(in_v, 0.0, v1, tol);
    if (s_max > s1) {
        auto in_s = [&](double s) { return h(s) * std::sinh(s) / (2.0 * std::sqrt(cosh_gap(s, r))); };
        std::vector<double> breaks;
        const double width = std::max(0.5, std::sqrt(t));
        for (double s = s1; s < s_max; s += width) breaks.push_back(s);
        breaks.push_back(s_max);
        total = total + integrate_panels(in_s, breaks, tol);
    }
    return 2.0 * checked(total, 1e-9, what);
}

}  // namespace detail

inline KernelValue p1(double r, double t) {
    require_time(t);
    return {detail::gaussian(r, t) / std::sqrt(4.0 * pi * t), 1, r, t, 0.0, Method::closed_form};
}

inline KernelValue p_odd(const DimensionParams& p, double r, double t) {
    if (!p.odd()) throw config_error("p_odd needs odd dimension");
    require_radius(r);
    require_time(t);
    const int k = p.k();
    const auto& data = detail::odd_kernel_data(k);
    double poly = r == 0.0 ? data.value.at_origin(t) : data.value(r, t);
    double v = detail::odd_prefactor(k, t) * std::exp(-double(k * k) * t) * detail::gaussian(r, t) * poly;
    return {v, p.n, r, t, 0.0, k == 1 ? Method::closed_form : Method::recurrence};
}

inline KernelValue p_even(const DimensionParams& p, double r, double t) {
    if (p.odd()) throw config_error("p_even needs even dimension");
    require_radius(r);
    require_time(t);
    const int k = (p.n - 2) / 2;
    if (p.rho() * p.rho() * t + r * r / (4.0 * t) > 700.0) return {0.0, p.n, r, t, 0.0, Method::quadrature};
    const auto& poly = detail::even_integrand(k);
    auto h = [&](double s) { return detail::gaussian(s, t) * poly(s, t); };
    double integral = 0.5 * detail::abel_integral(h, r, t, "p_even");
    double pref = detail::sign_pow(k) / std::pow(2.0 * pi, k) * std::exp(-double(k * (k + 1)) * t) * std::sqrt(2.0) /
                  std::pow(4.0 * pi * t, 1.5) * std::exp(-0.25 * t);
    return {pref * integral, p.n, r, t, 0.0, Method::quadrature};
}

inline KernelValue p2(double r, double t) { return p_even(DimensionParams(2), r, t); }

inline KernelValue massive(KernelValue v, double m) {
    if (!(m >= 0.0)) throw config_error("mass must be non-negative");
    v.value *= std::exp(-m * m * v.t);
    v.mass = m;
    return v;
}

// Kernel of -Laplacian + m^2 on H^n, m taken from the parameters.
inline KernelValue kernel(const DimensionParams& p, double r, double t) {
    KernelValue v = p.odd() ? p_odd(p, r, t) : p_even(p, r, t);
    return massive(v, p.mass);
}

// Kernel in dimension N - 1 from the massless kernel in dimension N = source.n.
inline KernelValue descend(const DimensionParams& source, double r, double t) {
    require_radius(r);
    require_time(t);
    if (source.n < 3) throw config_error("descent needs a source dimension >= 3");
    const DimensionParams src(source.n);
    auto h = [&](double s) { return kernel(src, s, t).value; };
    const int n = source.n - 2;
    double v = std::sqrt(2.0) * std::exp((2.0 * n + 1.0) * t / 4.0) * detail::abel_integral(h, r, t, "descend", 1e-11);
    return {v, source.n - 1, r, t, 0.0, Method::descent};
}

// Heat kernel rebuilt from its spectral resolution.
inline KernelValue spectral_kernel(const DimensionParams& p, double r, double t) {
    if (!p.odd()) throw config_error("spectral kernel needs odd dimension");
    require_time(t);
    const double rho = p.rho();
    // Smallest lambda past the peak of lambda^{2 rho} e^{-lambda^2 t} where it drops below 1e-16 of the peak.
    const double lpk = std::sqrt(rho / t);
    const double peak_log = 2.0 * rho * std::log(lpk) - rho;
    double lmax = lpk + 1.0;
    while (2.0 * rho * std::log(lmax) - lmax * lmax * t > peak_log - 16.0 * std::log(10.0)) lmax += 0.5;
    SpectralFunction ft{[=](double l) { return std::exp(-(l * l + rho * rho) * t); }, lmax};
    return {inverse_radial(ft, p, r), p.n, r, t, 0.0, Method::spectral};
}

// Relative residual of d_t p = p'' + (n-1) coth(r) p'.
inline double heat_equation_residual(const DimensionParams& p, double r, double t) {
    require_time(t);
    if (!(r > 0.0)) throw config_error("heat residual needs r > 0");
    double pt, pr, prr;
    if (p.odd()) {
        const int k = p.k();
        const auto& data = detail::odd_kernel_data(k);
        double a = detail::odd_prefactor(k, t) * std::exp(-double(k * k) * t) * detail::gaussian(r, t);
        double e = data.value(r, t);
        pt = a * (data.dt(r, t) - (k * k + 0.5 / t) * e);
        pr = a * data.dr(r, t);
        prr = a * data.drr(r, t);
    } else {
        auto f = [&](double rr, double tt) { return p_even(p, rr, tt).value; };
        const double h = 2e-3, ht = 2e-3 * t;
        double f0 = f(r, t);
        double fp1 = f(r + h, t), fm1 = f(r - h, t), fp2 = f(r + 2 * h, t), fm2 = f(r - 2 * h, t);
        pr = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
        prr = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        double tp1 = f(r, t + ht), tm1 = f(r, t - ht), tp2 = f(r, t + 2 * ht), tm2 = f(r, t - 2 * ht);
        pt = (8.0 * (tp1 - tm1) - (tp2 - tm2)) / (12.0 * ht);
    }
    double lap = (p.n - 1) / std::tanh(r) * pr;
    double scale = std::abs(pt) + std::abs(prr) + std::abs(lap);
    return std::abs(pt - prr - lap) / scale;
}

// omega_{n-1} int_0^inf p_n(r, t) sinh^{n-1} r dr
inline double total_mass(const DimensionParams& p, double t) {
    require_time(t);
    const DimensionParams massless(p.n);
    const double rmax = 2.0 * p.rho() * t + std::sqrt(4.0 * t * std::log(1e20)) + 1.0;
    auto f = [&](double r) { return kernel(massless, r, t).value * std::pow(std::sinh(r), p.n - 1); };
    std::vector<double> breaks;
    const double width = std::min(0.5, std::sqrt(t));
    for (double r = 0.0; r < rmax; r += width) breaks.push_back(r);
    breaks.push_back(rmax);
    return sphere_area(p.n) * checked(integrate_panels(f, breaks, p.odd() ? 1e-12 : 1e-10), 1e-9, "total_mass");
}

}  // namespace hyperheat
