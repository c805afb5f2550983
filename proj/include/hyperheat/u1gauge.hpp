#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dual.hpp"
#include "fourier.hpp"
#include "heatkernel.hpp"
#include "hypgeom.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace hyperheat {

// Vector heat kernel K_{mu nu'} = F g_{mu nu'} + (grad_mu grad_nu' Q), both radial.
struct BiTensorRadialKernel {
    DimensionParams p;
    double mass = 0.0;

    double F(double t, double r) const;
    double Q(double t, double r) const;
};

inline void require_odd(const DimensionParams& p, const char* what) {
    if (!p.odd()) throw config_error(std::string(what) + " needs odd dimension");
}

// Scalar-like part: same term list as p_n, opposite sign, no e^{-k^2 t}.
inline double f_component(const DimensionParams& p, double m, double t, double r) {
    require_odd(p, "f_component");
    require_time(t);
    require_radius(r);
    const int k = p.k();
    const auto& data = detail::odd_kernel_data(k);
    double poly = r == 0.0 ? data.value.at_origin(t) : data.value(r, t);
    return -detail::odd_prefactor(k, t) * std::exp(-m * m * t) * detail::gaussian(r, t) * poly;
}

// Radial source -2 int_r^inf F(t, s) sinh s ds of the Q equation.
inline double q_source(const DimensionParams& p, double m, double t, double r) {
    require_odd(p, "q_source");
    const double smax = r + 2.0 * std::sqrt(4.0 * t * std::log(1.0 / gaussian_floor)) + 2.0;
    auto f = [&](double s) { return f_component(p, m, t, s) * std::sinh(s); };
    std::vector<double> breaks;
    for (double s = r; s < smax; s += std::max(0.5, std::sqrt(t))) breaks.push_back(s);
    breaks.push_back(smax);
    return -2.0 * checked(integrate_panels(f, breaks, 1e-13), 1e-9, "q_source");
}

// Spectral Q~(lambda, t).
inline double q_tilde(double lambda, double t, const DimensionParams& p, double m) {
    require_odd(p, "q_tilde");
    require_lambda(lambda);
    if (!(t >= 0.0) || !std::isfinite(t)) throw config_error("time must be non-negative");
    const int rho = p.k();
    const double a = lambda * lambda + rho * rho + m * m;
    const double b = 1.0 + rho * rho + m * m;
    const double sgn = rho % 2 == 0 ? 1.0 : -1.0;  // (-1)^rho
    const double den = b * b + 4.0 * lambda * lambda;
    if ((b - a) * t > 700.0 || -a * t < -745.0 && (b - a) * t > 700.0)
        throw numeric_error("q_tilde exponent overflows");
    double head = std::exp(-a * t) * (1.0 / a + 4.0 * sgn / den);
    double tail;
    if (lambda < 1e-2 || b * t < 1e-2) {
        // (t / lambda) e^{-a t} int_0^1 e^{b t xi} sin(2 t lambda xi) d xi
        auto g = [&](double xi) {
            double s = lambda > 0.0 ? std::sin(2.0 * t * lambda * xi) / lambda : 2.0 * t * xi;
            return std::exp(b * t * xi - a * t) * s;
        };
        tail = t * checked(integrate(g, 0.0, 1.0, 1e-14), 1e-10, "q_tilde");
    } else {
        double x = 2.0 * t * lambda;
        tail = (2.0 * lambda * std::exp(-a * t) + std::exp((b - a) * t) * (b * std::sin(x) - 2.0 * lambda * std::cos(x))) /
               (lambda * den);
    }
    return head - 2.0 * sgn * tail;
}

// Right-hand side of d_t Q~ + (lambda^2 + rho^2 + m^2) Q~ implied by q_tilde.
inline double q_tilde_source(double lambda, double t, const DimensionParams& p) {
    require_odd(p, "q_tilde_source");
    const double sgn = p.k() % 2 == 0 ? 1.0 : -1.0;
    const double s = lambda > 0.0 ? std::sin(2.0 * lambda * t) / lambda : 2.0 * t;
    return -2.0 * sgn * std::exp((1.0 - lambda * lambda) * t) * s;
}

namespace detail {

inline double spectral_cutoff(double rho, double t) {
    const double lpk = std::sqrt(std::max(rho, 0.5) / t);
    const double peak_log = 2.0 * rho * std::log(lpk) - lpk * lpk * t;
    double lmax = lpk + 1.0;
    while (2.0 * rho * std::log(lmax) - lmax * lmax * t > peak_log - 16.0 * std::log(10.0)) lmax += 0.5;
    return lmax;
}

// Q on H^3 from the erfc/erf closed form and a smooth integral over [0, 1].
template <class T>
T q_closed_h3(long double t, T r, long double m) {
    using std::erfc;
    using std::exp;
    using std::sinh;
    using std::sqrt;
    const long double m2 = m * m;
    const long double g = 1.0L + 0.5L * m2;
    const long double q = sqrt(1.0L + m2);
    const long double st = sqrt(t);
    const long double area = 4.0L * 3.14159265358979323846264338327950288L;
    T h = r / (2.0L * st);
    T bracket = exp(t * m2 * m2 / 4.0L) * (exp(r * g) * erfc(st * g + h) - exp(-r * g) * erfc(st * g - h)) -
                (exp(r * q) * erfc(st * q + h) - exp(-r * q) * erfc(st * q - h));
    T sh = sinh(r);
    T first = bracket / (2.0L * area * sh);

    static const auto& rule = boost::math::quadrature::gauss<long double, 40>::abscissa();
    static const auto& weights = boost::math::quadrature::gauss<long double, 40>::weights();
    auto integrand = [&](long double x) {
        long double u = 1.0L - x;
        return exp(-t * m2 * u - t * u * u) * sinh(r * x);
    };
    T integral(0.0L);
    // Gauss-Legendre on [0, 1] mapped from [-1, 1]; the tables store non-negative nodes.
    for (std::size_t i = 0; i < rule.size(); ++i) {
        long double xp = 0.5L * (1.0L + rule[i]), xm = 0.5L * (1.0L - rule[i]);
        if (rule[i] == 0.0L) integral = integral + 0.5L * weights[i] * integrand(xp);
        else integral = integral + 0.5L * weights[i] * (integrand(xp) + integrand(xm));
    }
    T last = 2.0L * sqrt(t / 3.14159265358979323846264338327950288L) * exp(-r * r / (4.0L * t)) * integral / (area * sh);
    return first + last;
}

}  // namespace detail

// Q by inverting Q~ against the Plancherel density.
inline double q_inverse_spectral(double t, double r, const DimensionParams& p, double m) {
    require_odd(p, "q_inverse");
    require_time(t);
    SpectralFunction ft{[&](double l) { return q_tilde(l, t, p, m); }, detail::spectral_cutoff(p.rho(), t)};
    return inverse_radial(ft, p, r);
}

inline double q_inverse(double t, double r, const DimensionParams& p, double m) {
    require_odd(p, "q_inverse");
    require_time(t);
    require_radius(r);
    if (p.n != 3) return q_inverse_spectral(t, r, p, m);
    if (r == 0.0) throw config_error("closed-form Q is evaluated at r > 0");
    if (t * m * m * m * m / 4.0 > 700.0) throw numeric_error("closed-form Q exponent overflows");
    return static_cast<double>(detail::q_closed_h3<long double>(t, r, m));
}

// (1/sinh r) dQ/dr
inline double q_radial_derivative(double t, double r, const DimensionParams& p, double m) {
    require_odd(p, "q_radial_derivative");
    require_time(t);
    if (!(r > 0.0)) throw config_error("radial derivative needs r > 0");
    if (p.n == 3) {
        using D = Dual<long double>;
        D y = detail::q_closed_h3<D>(t, make_variable<D>(static_cast<long double>(r)), m);
        return static_cast<double>(y.d / std::sinh(static_cast<long double>(r)));
    }
    using D = Dual<double>;
    const double sh = std::sinh(r);
    SpectralFunction ft{[&](double l) {
                            D phi = phi_lambda(p, l, make_variable<D>(r));
                            return q_tilde(l, t, p, m) * phi.d / sh;
                        },
                        detail::spectral_cutoff(p.rho(), t)};
    return inverse_radial(ft, p, 0.0);
}

inline double BiTensorRadialKernel::F(double t, double r) const { return f_component(p, mass, t, r); }
inline double BiTensorRadialKernel::Q(double t, double r) const { return q_inverse(t, r, p, mass); }

// Ladder of radii for the coincidence limit, scaled by min(1, sqrt t).
inline constexpr std::array<double, 3> coincidence_ladder{1e-2, 5e-3, 2.5e-3};

inline double u1_trace(const DimensionParams& p, double m, double t) {
    require_odd(p, "u1_trace");
    require_time(t);
    std::array<double, 3> v{};
    const double scale = std::min(1.0, std::sqrt(t));
    for (int i = 0; i < 3; ++i) {
        double r = coincidence_ladder[i] * scale;
        v[i] = f_component(p, m, t, r) + q_radial_derivative(t, r, p, m);
    }
    Extrapolated e = richardson3(v[0], v[1], v[2]);
    double d1 = std::abs(v[1] - v[0]), d2 = std::abs(v[2] - v[1]);
    double floor = 1e-12 * std::abs(e.value);
    if (d2 > d1 && d2 > floor) throw numeric_error("coincidence extrapolation is not converging");
    return -p.n * e.value;
}

// Vector trace minus twice the massless scalar trace (ghost pair).
inline double ghost_subtracted_partition_trace(const DimensionParams& p, double m, double t) {
    return u1_trace(p, m, t) - 2.0 * p_odd(DimensionParams(p.n), 0.0, t).value;
}

struct BiTensorReport {
    double box_mixed = 0.0;          // box(d d' u) - d d' u
    double transport = 0.0;          // grad u . grad(du d'u) - 2(1+u) du d'u
    double transport_printed = 0.0;  // same with coefficient 4
    double transport_coefficient = 0.0;
    double box_product = 0.0;        // box(du d'u) - (n+1) du d'u - 2(u+1) d d' u
    double coincidence_mixed = 0.0;  // g^{mu nu'} d_mu d_nu' u at x = y
    double coincidence_product = 0.0;
    double max_deviation = 0.0;
    bool pass = false;
};

namespace detail {

template <int D> struct Nested { using type = Dual<typename Nested<D - 1>::type>; };
template <> struct Nested<0> { using type = double; };

template <int D>
typename Nested<D>::type seeded(double x, int var, const std::array<int, 4>& dirs) {
    using T = typename Nested<D>::type;
    if constexpr (D == 0) {
        return x;
    } else {
        using Inner = typename Nested<D - 1>::type;
        return T(seeded<D - 1>(x, var, dirs), Inner(dirs[D - 1] == var ? 1.0 : 0.0));
    }
}

template <int D>
double top_slot(const typename Nested<D>::type& y) {
    if constexpr (D == 0) return y;
    else return top_slot<D - 1>(y.d);
}

// Mixed partial of u; variables 0..n-1 are x, n..2n-1 are y.
template <int D>
double partial_u(const std::vector<double>& x, const std::vector<double>& y, const std::array<int, 4>& dirs) {
    using T = typename Nested<D>::type;
    const int n = static_cast<int>(x.size());
    std::vector<T> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = seeded<D>(x[i], i, dirs);
        ys[i] = seeded<D>(y[i], n + i, dirs);
    }
    return top_slot<D>(chordal_u(xs, ys));
}

}  // namespace detail

inline BiTensorReport bitensor_identity_check(const DimensionParams& p, const HalfSpacePoint& xp, const HalfSpacePoint& yp) {
    const int n = p.n;
    if (xp.dim() != n || yp.dim() != n) throw config_error("points must have dimension n");
    const std::vector<double>& x = xp.coords();
    const std::vector<double>& y = yp.coords();
    const double z = x[n - 1];
    const double u = chordal_u(x, y);
    auto d = [&](auto... idx) {
        constexpr int D = sizeof...(idx);
        std::array<int, 4> dirs{};
        int i = 0;
        ((dirs[i++] = idx), ...);
        return detail::partial_u<D>(x, y, dirs);
    };
    auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    // Half-space Christoffel symbols and their x-derivatives.
    auto gam = [&](int k, int i, int j) {
        int h = n - 1;
        return -(delta(i, k) * delta(j, h) + delta(j, k) * delta(i, h) - delta(i, j) * delta(k, h)) / z;
    };
    auto dgam = [&](int l, int k, int i, int j) { return l == n - 1 ? -gam(k, i, j) / z : 0.0; };
    const double ginv = z * z;

    // Covariant box of a covector field V_nu given V, dV, ddV as callables.
    auto box = [&](auto V, auto dV, auto ddV, int nu) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
            double term = ddV(l, l, nu);
            for (int k = 0; k < n; ++k) {
                term -= dgam(l, k, l, nu) * V(k);
                term -= gam(k, l, nu) * dV(l, k);
                term -= gam(k, l, l) * (dV(k, nu));
                term -= gam(k, l, nu) * dV(l, k);
                for (int s2 = 0; s2 < n; ++s2) {
                    term += gam(k, l, l) * gam(s2, k, nu) * V(s2);
                    term += gam(k, l, nu) * gam(s2, l, k) * V(s2);
                }
            }
            s += ginv * term;
        }
        return s;
    };

    BiTensorReport rep;
    double scale1 = 0.0, scale2 = 0.0, scale3 = 0.0;
    double dev1 = 0.0, dev2 = 0.0, dev2p = 0.0, dev3 = 0.0;
    double coef_num = 0.0, coef_den = 0.0;
    for (int np = 0; np < n; ++np) {
        const int yp_idx = n + np;
        // V_nu = d_nu d_nu' u
        auto V1 = [&](int k) { return d(k, yp_idx); };
        auto dV1 = [&](int l, int k) { return d(k, yp_idx, l); };
        auto ddV1 = [&](int a, int b, int k) { return d(k, yp_idx, a, b); };
        // W_nu = d_nu u d_nu' u
        const double uy = d(yp_idx);
        auto W = [&](int k) { return d(k) * uy; };
        auto dW = [&](int l, int k) { return d(k, l) * uy + d(k) * d(yp_idx, l); };
        auto ddW = [&](int a, int b, int k) {
            return d(k, a, b) * uy + d(k, a) * d(yp_idx, b) + d(k, b) * d(yp_idx, a) + d(k) * d(yp_idx, a, b);
        };
        for (int nu = 0; nu < n; ++nu) {
            double lhs1 = box(V1, dV1, ddV1, nu), rhs1 = V1(nu);
            dev1 = std::max(dev1, std::abs(lhs1 - rhs1));
            scale1 = std::max(scale1, std::abs(rhs1));

            double tr = 0.0;
            for (int mu = 0; mu < n; ++mu) {
                double cov = dW(mu, nu);
                for (int k = 0; k < n; ++k) cov -= gam(k, mu, nu) * W(k);
                tr += ginv * d(mu) * cov;
            }
            double base = (1.0 + u) * W(nu);
            dev2 = std::max(dev2, std::abs(tr - 2.0 * base));
            dev2p = std::max(dev2p, std::abs(tr - 4.0 * base));
            scale2 = std::max(scale2, std::abs(2.0 * base));
            coef_num += tr * base;
            coef_den += base * base;

            double lhs3 = box(W, dW, ddW, nu);
            double rhs3 = (n + 1) * W(nu) + 2.0 * (u + 1.0) * V1(nu);
            dev3 = std::max(dev3, std::abs(lhs3 - rhs3));
            scale3 = std::max(scale3, std::abs(rhs3));
        }
    }
    auto rel = [](double dev, double scale) { return dev / std::max(scale, 1.0); };
    rep.box_mixed = rel(dev1, scale1);
    rep.transport = rel(dev2, scale2);
    rep.transport_printed = rel(dev2p, scale2);
    rep.transport_coefficient = coef_den > 0.0 ? coef_num / coef_den : 0.0;
    rep.box_product = rel(dev3, scale3);

    // Coincidence limits at x = y.
    double mixed = 0.0, product = 0.0;
    for (int mu = 0; mu < n; ++mu) {
        std::array<int, 4> dm{mu, n + mu, 0, 0}, d1{mu, 0, 0, 0}, d2{n + mu, 0, 0, 0};
        mixed += ginv * detail::partial_u<2>(x, x, dm);
        product += ginv * detail::partial_u<1>(x, x, d1) * detail::partial_u<1>(x, x, d2);
    }
    rep.coincidence_mixed = mixed;
    rep.coincidence_product = product;
    rep.max_deviation = std::max({rep.box_mixed, rep.transport, rep.box_product, std::abs(mixed + n) / n,
                                  std::abs(product)});
    rep.pass = rep.max_deviation < 1e-6;
    return rep;
}

}  // namespace hyperheat
