#pragma once

#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "heatkernel.hpp"
#include "params.hpp"
#include "quadrature.hpp"

namespace hyperheat {

// One-loop densities W = (1/2) int_eps^inf dt/t Tr K(t) per unit volume, eps = Lambda^-2.
struct ActionDecomposition {
    std::function<double(double)> divergent_density;  // Lambda -> value
    double regular_density = 0.0;
    std::string cutoff_convention = "lower proper-time cutoff eps = Lambda^-2";
    DimensionParams p;
    double mass = 0.0;
    double cutoff = 0.0;

    // Coefficient of ln(Lambda) in the divergent density as Lambda -> inf (even n only).
    double log_coefficient = 0.0;
    // Optimally truncated small-t series estimate of the regular density (even n only).
    TruncatedSum series_regular;
    bool series_truncated = false;

    double total(double lambda) const { return divergent_density(lambda) + regular_density; }
    double total() const { return total(cutoff); }
};

inline std::pair<double, double> erf_erfc(double x) { return {std::erf(x), std::erfc(x)}; }

inline void require_cutoff(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw config_error("cutoff must be positive and finite");
}

// (2s - 1)!!
inline double double_factorial_odd(int s) {
    double out = 1.0;
    for (int j = 2 * s - 1; j > 1; j -= 2) out *= j;
    return out;
}

// int_x^inf u^{-(s+1/2)} e^{-u} du split as power_part + erfc_coeff * sqrt(pi) erfc(sqrt x).
struct HalfGammaSplit {
    double value = 0.0;
    double power_part = 0.0;
    double erfc_coeff = 0.0;
    double condition = 1.0;
    bool fallback = false;

    // value minus its x -> 0 finite part, i.e. Gamma(1/2 - s, x) - Gamma(1/2 - s)
    double minus_limit(double x) const {
        return power_part - erfc_coeff * std::sqrt(pi) * std::erf(std::sqrt(x));
    }
};

inline HalfGammaSplit upper_gamma_half_split(int s, double x) {
    if (s < 1) throw config_error("upper_gamma_half needs s >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw config_error("upper_gamma_half needs x > 0");
    HalfGammaSplit out;
    const double base = std::sqrt(pi) * std::erfc(std::sqrt(x));
    const double ex = std::exp(-x);
    // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^{-x}) / a, stepping a = 1/2 -> 1/2 - s.
    double value = base, abs_sum = base, power = 0.0, coeff = 1.0;
    for (int j = 1; j <= s; ++j) {
        double a = 0.5 - j;
        double piece = std::pow(x, a) * ex;
        value = (value - piece) / a;
        power = (power - piece) / a;
        coeff /= a;
        abs_sum = (abs_sum + piece) / std::abs(a);
    }
    out.power_part = power;
    out.erfc_coeff = coeff;
    out.condition = value != 0.0 ? abs_sum / std::abs(value) : INFINITY;
    if (out.condition * 2.220446049250313e-16 > 1e-9) {
        auto f = [s](double u) { return std::pow(u, -(s + 0.5)) * std::exp(-u); };
        out.value = checked(integrate(f, x, INFINITY, 1e-14), 1e-10, "upper_gamma_half");
        out.fallback = true;
    } else {
        out.value = value;
    }
    return out;
}

inline double upper_gamma_half(int s, double x) { return upper_gamma_half_split(s, x).value; }

// Gamma(1/2 - s) by analytic continuation.
inline double gamma_half_limit(int s) {
    return (s % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, s) * std::sqrt(pi) / double_factorial_odd(s);
}

inline double w_odd_regular_density(const DimensionParams& p, double m) {
    if (!p.odd() || p.k() < 1) throw config_error("w_odd_regular_density needs odd n >= 3");
    const int k = p.k();
    const double b2 = k * k + m * m;
    RationalSeries a = extract_a_coeffs(k);
    double sum = 0.0;
    for (int l = 0; l < k; ++l)
        sum += (l % 2 == 0 ? 1.0 : -1.0) * to_double(a.coeffs[l]) / (std::tgamma(k - l + 1.5) * std::pow(b2, l));
    const double sign = k % 2 == 1 ? 1.0 : -1.0;  // (-1)^{k+1}
    return sign / (std::pow(2.0, 2 * (k + 1)) * std::pow(pi, k - 0.5)) * std::pow(b2, k + 0.5) * sum;
}

// (1/2) int_eps^inf dt/t K(0, t) by quadrature of the kernel itself.
inline double direct_cutoff_integral(const DimensionParams& p, double m, double lambda) {
    require_cutoff(lambda);
    const DimensionParams pm(p.n, m);
    const double eps = 1.0 / (lambda * lambda);
    const double b2 = pm.gap();
    const double tmax = eps + 80.0 / b2;
    auto f = [&](double t) { return kernel(pm, 0.0, t).value / t; };
    std::vector<double> breaks{eps};
    while (breaks.back() * 2.0 < tmax) breaks.push_back(breaks.back() * 2.0);
    breaks.push_back(std::max(tmax, eps * 2.0));
    return 0.5 * checked(integrate_panels(f, breaks, 1e-11), 1e-9, "direct cutoff integral");
}

inline ActionDecomposition w_odd_decomposition(const DimensionParams& p, double m, double lambda) {
    if (!p.odd() || p.k() < 1) throw config_error("w_odd_decomposition needs odd n >= 3");
    require_cutoff(lambda);
    const int k = p.k();
    const double b2 = k * k + m * m, b = std::sqrt(b2);
    const double pref = std::pow(b, 2 * k + 1) / (2.0 * std::pow(4.0 * pi, k + 0.5));
    std::vector<double> a;
    for (const auto& c : extract_a_coeffs(k).coeffs) a.push_back(to_double(c));

    double reg = 0.0;
    for (int l = 0; l < k; ++l) reg += a[l] / std::pow(b2, l) * gamma_half_limit(k - l + 1);
    reg *= pref;

    ActionDecomposition out;
    out.p = DimensionParams(p.n, m);
    out.mass = m;
    out.cutoff = lambda;
    out.regular_density = reg;
    out.divergent_density = [=](double L) {
        require_cutoff(L);
        const double x = b2 / (L * L);
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            HalfGammaSplit g = upper_gamma_half_split(k - l + 1, x);
            double d = g.fallback ? g.value - gamma_half_limit(k - l + 1) : g.minus_limit(x);
            s += a[l] / std::pow(b2, l) * d;
        }
        return pref * s;
    };
    return out;
}

inline ActionDecomposition w_h3_decomposition(double m, double lambda) {
    require_cutoff(lambda);
    if (!(m >= 0.0)) throw config_error("mass must be non-negative");
    const double b2 = 1.0 + m * m, b = std::sqrt(b2);
    const double constant = std::pow(b2, 1.5) / (12.0 * pi);
    ActionDecomposition out;
    out.p = DimensionParams(3, m);
    out.mass = m;
    out.cutoff = lambda;
    out.regular_density = constant;
    out.divergent_density = [=](double L) {
        require_cutoff(L);
        const double q = L / b;
        double power = std::pow(b2, 1.5) / (3.0 * std::pow(4.0 * pi, 1.5)) * (-2.0 * q + q * q * q) * std::exp(-1.0 / (q * q));
        return power - constant * std::erf(1.0 / q);
    };
    const double direct = 0.5 * std::pow(b, 3) / std::pow(4.0 * pi, 1.5) * upper_gamma_half(2, b2 / (lambda * lambda));
    if (std::abs(out.total() - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
        throw numeric_error("H^3 action split does not reproduce the cutoff integral");
    return out;
}

namespace detail {

inline const RationalSeries& even_series_cached(int n) {
    static std::mutex mu;
    static std::map<int, RationalSeries> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    return cache.emplace(n, even_coincidence_series(n, 14)).first->second;
}

// Gamma(-j, x) for j >= 0 by upward recursion from E_1.
inline double upper_gamma_neg_int(int j, double x) {
    double g = boost::math::expint(1, x);
    for (int i = 1; i <= j; ++i) g = (std::pow(x, -i) * std::exp(-x) - g) / i;
    return g;
}

inline constexpr double even_series_switch = 0.1;

// (1/2) int_a^b dt/t [K(0, t) - head(t)], head keeping orders t^0 .. t^{n/2} of the coincidence series.
inline double even_remainder_integral(const DimensionParams& pm, double a, double b) {
    b = std::min(b, 80.0 / pm.gap() + 1.0);  // e^{-b^2 t} below 1e-34 past this
    if (b <= a) return 0.0;
    const int h = pm.n / 2;
    const auto& series = even_series_cached(pm.n);
    std::vector<double> c;
    for (const auto& q : series.coeffs) c.push_back(to_double(q));
    const double b2 = pm.gap();
    auto norm = [&](double t) { return std::pow(4.0 * pi * t, -0.5 * pm.n) * std::exp(-b2 * t); };
    auto series_rem = [&](double t) {
        double s = 0.0;
        for (std::size_t l = c.size(); l-- > static_cast<std::size_t>(h + 1);) s = s * t + c[l];
        return norm(t) * s * std::pow(t, h + 1) / t;
    };
    auto direct_rem = [&](double t) {
        double head = 0.0;
        for (int l = h; l >= 0; --l) head = head * t + c[l];
        return (kernel(pm, 0.0, t).value - norm(t) * head) / t;
    };
    double total = 0.0;
    const double ts = even_series_switch;
    if (a < ts) total += checked(integrate(series_rem, a, std::min(b, ts), 1e-12), 1e-9, "series remainder");
    if (b > ts) {
        double lo = std::max(a, ts);
        std::vector<double> breaks{lo};
        while (breaks.back() * 2.0 < b) breaks.push_back(breaks.back() * 2.0);
        breaks.push_back(b);
        total += checked(integrate_panels(direct_rem, breaks, 1e-9), 1e-7, "kernel remainder");
    }
    return 0.5 * total;
}

}  // namespace detail

// Even n: head orders t^0 .. t^{n/2} integrated exactly, the rest as a convergent subtracted integral.
inline ActionDecomposition w_even_decomposition(const DimensionParams& p, double m, double lambda, int L = 12) {
    if (p.odd()) throw config_error("w_even_decomposition needs even n");
    require_cutoff(lambda);
    if (L < 1) throw config_error("series length must be positive");
    const DimensionParams pm(p.n, m);
    const int h = pm.n / 2;
    const double b2 = pm.gap();
    const auto& series = detail::even_series_cached(pm.n);
    if (L > series.order()) throw config_error("series length exceeds the available coincidence coefficients");
    std::vector<double> c;
    for (const auto& q : series.coeffs) c.push_back(to_double(q));
    const double pref = 0.5 * std::pow(4.0 * pi, -0.5 * pm.n);

    ActionDecomposition out;
    out.p = pm;
    out.mass = m;
    out.cutoff = lambda;
    out.regular_density = detail::even_remainder_integral(pm, 0.0, INFINITY);
    out.divergent_density = [=](double Lam) {
        require_cutoff(Lam);
        const double x = b2 / (Lam * Lam);
        double s = 0.0;
        for (int l = 0; l <= h; ++l) s += c[l] * std::pow(b2, h - l) * detail::upper_gamma_neg_int(h - l, x);
        return pref * s - detail::even_remainder_integral(pm, 0.0, 1.0 / (Lam * Lam));
    };
    double logc = 0.0;
    for (int l = 0; l <= h; ++l) {
        int j = h - l;
        logc += c[l] * std::pow(b2, j) * 2.0 * (j % 2 == 0 ? 1.0 : -1.0) / std::tgamma(j + 1.0);
    }
    out.log_coefficient = pref * logc;

    std::vector<double> terms;
    for (int l = h + 1; l <= L; ++l) terms.push_back(pref * c[l] * std::pow(b2, h - l) * std::tgamma(double(l - h)));
    out.series_regular = truncate_optimally(terms);
    out.series_truncated = out.series_regular.terms_used < static_cast<int>(terms.size());
    return out;
}

inline ActionDecomposition w_h2_decomposition(double m, double lambda, int L = 12) {
    return w_even_decomposition(DimensionParams(2), m, lambda, L);
}

inline ActionDecomposition w_h4_decomposition(double m, double lambda, int L = 12) {
    return w_even_decomposition(DimensionParams(4), m, lambda, L);
}

// (1/2) int dt/t of the ln-free regular series term of order l on H^2, b^2 = m^2 + 1/4.
inline double h2_regular_series_term(int l, double m) {
    if (l < 2) throw config_error("regular series starts at l = 2");
    const double b2 = m * m + 0.25;
    Rational c = (Rational(2) / rpow(Rational(4), l) - 1) * bernoulli(2 * l) / factorial(l);
    return b2 / (8.0 * pi) * to_double(c) * std::tgamma(l - 1.0) / std::pow(b2, l);
}

// c * t^power, removed from the trace and integrated analytically.
struct Monomial {
    double power = 0.0;
    double coeff = 0.0;
};

// Local power law exponent of |g| between t1 and t2.
inline double local_exponent(double g1, double g2, double t1, double t2) {
    return std::log(std::abs(g1) / std::abs(g2)) / std::log(t1 / t2);
}

inline ActionDecomposition w_from_trace(std::function<double(double)> trace, double lambda,
                                        std::vector<Monomial> subtraction, const DimensionParams& p = DimensionParams(3),
                                        double m = 0.0) {
    require_cutoff(lambda);
    for (const auto& q : subtraction)
        if (q.power > 0.0) throw config_error("declared divergent monomials must have power <= 0");
    auto monos = [subtraction](double t) {
        double s = 0.0;
        for (const auto& q : subtraction) s += q.coeff * std::pow(t, q.power);
        return s;
    };
    auto rem = [trace, monos](double t) { return trace(t) - monos(t); };

    // UV: remainder must vanish at t -> 0.
    const double d1 = 1e-4, d2 = d1 / 4.0;
    const double r1 = rem(d1), r2 = rem(d2);
    const double noise = 1e-12 * std::max(std::abs(trace(d2)), 1e-300);
    double alpha = 0.0, amp = 0.0;
    if (std::abs(r2) > noise && std::abs(r1) > noise) {
        alpha = local_exponent(r1, r2, d1, d2);
        if (alpha < 0.05) throw numeric_error("trace has an undeclared divergence at small t (order t^" + std::to_string(alpha) + ")");
        amp = r1 / std::pow(d1, alpha);
    }

    // IR: trace/t must be integrable at t -> inf.
    const double T1 = 1e3, T2 = 1e4;
    const double g1 = trace(T1), g2 = trace(T2);
    if (std::abs(g2) > 1e-300 && std::abs(g1) > 1e-300 && local_exponent(g1, g2, T1, T2) > -0.05)
        throw numeric_error("trace is not integrable at large t");

    auto rem_over_t = [rem](double t) { return rem(t) / t; };
    // int_0^1 rem/t: analytic power-law tail below d1, quadrature above.
    auto small_part = [=](double upper) {
        if (upper <= d1) return alpha > 0.0 ? amp * std::pow(upper, alpha) / alpha : 0.0;
        double tail = alpha > 0.0 ? amp * std::pow(d1, alpha) / alpha : 0.0;
        std::vector<double> breaks{d1};
        while (breaks.back() * 4.0 < upper) breaks.push_back(breaks.back() * 4.0);
        breaks.push_back(upper);
        QuadResult r = integrate_panels(rem_over_t, breaks, 1e-9);
        // the remainder cancels against the declared monomials, so judge the error on the trace scale
        double scale = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            scale += integrate([&](double t) { return std::abs(trace(t)) / t; }, breaks[i], breaks[i + 1], 1.0, 0).value;
        if (!std::isfinite(r.value) || r.error > 1e-10 * std::max(scale, r.l1))
            throw numeric_error("trace remainder: quadrature did not converge");
        return tail + r.value;
    };
    // t = 1/u^2 maps [1, inf) onto (0, 1] and softens algebraic decay
    auto tail_in_u = [trace](double u) { return u > 1e-100 ? 2.0 * trace(1.0 / (u * u)) / u : 0.0; };
    QuadResult big = integrate_singular(tail_in_u, 0.0, 1.0, 1e-12);
    double regular = 0.5 * (small_part(1.0) + checked(big, 1e-8, "trace tail"));

    ActionDecomposition out;
    out.p = p;
    out.mass = m;
    out.cutoff = lambda;
    out.regular_density = regular;
    out.divergent_density = [=](double L) {
        require_cutoff(L);
        const double eps = 1.0 / (L * L);
        double s = 0.0;
        for (const auto& q : subtraction)
            s += q.coeff * (q.power == 0.0 ? -std::log(eps) : (1.0 - std::pow(eps, q.power)) / q.power);
        return 0.5 * (s - small_part(eps));
    };
    return out;
}

// Relative deviation of divergent + regular from the directly integrated cutoff action.
inline double split_exactness(const ActionDecomposition& d, double lambda) {
    double direct = direct_cutoff_integral(d.p, d.mass, lambda);
    double dev = std::abs(d.total(lambda) - direct);
    return direct != 0.0 ? dev / std::abs(direct) : dev;
}

}  // namespace hyperheat
