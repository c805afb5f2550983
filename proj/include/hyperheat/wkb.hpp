#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "dual.hpp"
#include "fourier.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "rational.hpp"

namespace hyperheat {

// Truncated Taylor series sum_j c_j r^j, trusted through power valid().
class RadialSeries {
public:
    static constexpr int default_order = 12;

    explicit RadialSeries(int order = default_order) : c_(order + 1, Rational(0)), valid_(order) {}
    RadialSeries(std::vector<Rational> coeffs, int valid) : c_(std::move(coeffs)), valid_(valid) {}

    static RadialSeries constant(const Rational& q, int order = default_order) {
        RadialSeries s(order);
        s.c_[0] = q;
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    int valid() const { return valid_; }
    bool underflow() const { return valid_ < order(); }
    const Rational& operator[](int j) const { return c_[j]; }
    Rational& operator[](int j) { return c_[j]; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool even() const {
        for (int j = 1; j <= valid_; j += 2)
            if (c_[j] != 0) return false;
        return true;
    }

    RadialSeries& operator+=(const RadialSeries& o) {
        for (int j = 0; j <= order(); ++j) c_[j] += o.c_[j];
        valid_ = std::min(valid_, o.valid_);
        return *this;
    }
    RadialSeries& operator-=(const RadialSeries& o) {
        for (int j = 0; j <= order(); ++j) c_[j] -= o.c_[j];
        valid_ = std::min(valid_, o.valid_);
        return *this;
    }
    friend RadialSeries operator+(RadialSeries a, const RadialSeries& b) { return a += b; }
    friend RadialSeries operator-(RadialSeries a, const RadialSeries& b) { return a -= b; }
    friend RadialSeries operator*(const Rational& q, RadialSeries a) {
        for (auto& x : a.c_) x *= q;
        return a;
    }
    friend RadialSeries operator*(const RadialSeries& a, const RadialSeries& b) {
        RadialSeries out(a.order());
        for (int i = 0; i <= a.order(); ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; i + j <= a.order(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        out.valid_ = std::min(a.valid_, b.valid_);
        return out;
    }

    RadialSeries derivative() const {
        RadialSeries out(order());
        for (int j = 1; j <= order(); ++j) out.c_[j - 1] = c_[j] * j;
        out.valid_ = valid_ - 1;
        return out;
    }

    // f(r) / r; the constant term must vanish.
    RadialSeries divide_by_r() const {
        if (c_[0] != 0) throw std::domain_error("series has a non-zero constant term");
        RadialSeries out(order());
        for (int j = 1; j <= order(); ++j) out.c_[j - 1] = c_[j];
        out.valid_ = valid_ - 1;
        return out;
    }

    // g^alpha for a unit-constant series g.
    RadialSeries power(const Rational& alpha) const {
        if (c_[0] != 1) throw std::domain_error("rational power needs constant term 1");
        RadialSeries h(order());
        h.c_[0] = 1;
        for (int m = 1; m <= order(); ++m) {
            Rational s = 0;
            for (int j = 1; j <= m; ++j) s += ((alpha + 1) * j - m) * c_[j] * h.c_[m - j];
            h.c_[m] = s / m;
        }
        h.valid_ = valid_;
        return h;
    }

    RadialSeries truncated(int valid) const {
        RadialSeries out = *this;
        out.valid_ = std::min(valid_, valid);
        for (int j = out.valid_ + 1; j <= order(); ++j) out.c_[j] = 0;
        return out;
    }

    double operator()(double r) const {
        double s = 0.0;
        for (int j = valid_; j >= 0; --j) s = s * r + to_double(c_[j]);
        return s;
    }

private:
    std::vector<Rational> c_;
    int valid_;
};

namespace detail {

// r / sinh r
inline RadialSeries r_csch_series(int order) {
    RadialSeries s(order);
    for (int i = 0; 2 * i <= order; ++i) {
        Rational b = bernoulli_table(2 * i) / factorial(2 * i);
        s[2 * i] = (2 - rpow(Rational(4), i)) * b;
    }
    return s;
}

// r coth r
inline RadialSeries r_coth_series(int order) {
    RadialSeries s(order);
    for (int i = 0; 2 * i <= order; ++i) s[2 * i] = rpow(Rational(4), i) * bernoulli_table(2 * i) / factorial(2 * i);
    return s;
}

}  // namespace detail

// -D^{-1/2} Delta (D^{1/2} f) with D = (r / sinh r)^{n-1}.
inline RadialSeries nhat_apply(const RadialSeries& f, const DimensionParams& p) {
    if (!f.even()) throw std::domain_error("nhat_apply needs an even series");
    const int J = f.order();
    const Rational alpha(p.n - 1, 2);
    RadialSeries g = detail::r_csch_series(J);
    RadialSeries half = g.power(alpha), inv_half = g.power(-alpha);
    RadialSeries h = half * f;
    RadialSeries d1 = h.derivative();
    RadialSeries lap = d1.derivative() + Rational(p.n - 1) * (detail::r_coth_series(J) * d1.divide_by_r());
    RadialSeries out = Rational(-1) * (inv_half * lap);
    return out.truncated(std::min(out.valid(), f.valid() - 2));
}

// Series solution of (1 + (r/l) d/dr) b_l = N b_{l-1}.
inline RadialSeries b_next(const RadialSeries& prev, int l, const DimensionParams& p) {
    if (l < 1) throw config_error("recursion index must be positive");
    RadialSeries nb = nhat_apply(prev, p);
    RadialSeries out(nb.order());
    for (int j = 0; j <= nb.valid(); ++j) out[j] = Rational(l, l + j) * nb[j];
    return out.truncated(nb.valid());
}

struct CurvatureInvariants {
    Rational R;      // scalar curvature, positive for H^n in this convention
    Rational Ric2;   // R_{mn} R^{mn}
    Rational Riem2;  // R_{mnab} R^{mnab}
};

inline CurvatureInvariants curvature(const DimensionParams& p) {
    const Rational n(p.n);
    return {n * (n - 1), n * (n - 1) * (n - 1), 2 * n * (n - 1)};
}

// n^4/36 - n^3/15 + 13 n^2/180 - n/30
inline Rational scalar_b2_polynomial(int dim) {
    const Rational n(dim);
    return n * n * n * n / 36 - n * n * n / 15 + 13 * n * n / 180 - n / 30;
}

// Coefficients of t^l, times l!, in (4 pi t)^{n/2} e^{m^2 t} K(0, t).
struct ScalarCoincidence {
    Rational b0, b1, b2;
    Rational b1_recursion, b2_recursion;
};

inline ScalarCoincidence scalar_coincidence(const DimensionParams& p) {
    RadialSeries b0 = RadialSeries::constant(1);
    RadialSeries b1 = b_next(b0, 1, p);
    RadialSeries b2 = b_next(b1, 2, p);
    const Rational n(p.n);
    ScalarCoincidence out{1, -n * (n - 1) / 6, scalar_b2_polynomial(p.n), -b1[0], b2[0]};
    if (out.b1 != out.b1_recursion || out.b2 != out.b2_recursion)
        throw std::logic_error("transport recursion disagrees with the curvature polynomial");
    return out;
}

// Per-component factors and traces (factor times n) of the vector-field coefficients.
struct U1Coincidence {
    Rational f0, f1, f2;
    Rational tr0, tr1, tr2;
};

inline U1Coincidence u1_coincidence(const DimensionParams& p) {
    const Rational n(p.n);
    const CurvatureInvariants c = curvature(p);
    Rational f1 = (1 - n / 6) * c.R / n;
    Rational f2 = n * n * n * n / 72 - n * n * n / 5 + 313 * n * n / 360 - 27 * n / 20 + Rational(2, 3);
    Rational tr2 = ((2 * n - 30) * c.Riem2 + (180 - 2 * n) * c.Ric2 + (5 * n - 60) * c.R * c.R) / 360;
    if (tr2 != n * f2) throw std::logic_error("trace identity for the second vector coefficient fails");
    return {1, f1, f2, n, n * f1, tr2};
}

struct TraceTriple {
    Rational tr0, tr1, tr2;
};

// Vector traces minus twice the scalar coefficients (ghost pair), massless.
inline TraceTriple ghost_subtracted_traces(const DimensionParams& p) {
    const Rational n(p.n);
    const CurvatureInvariants c = curvature(p);
    TraceTriple closed{n - 2, (8 - n) * c.R / 6,
                       ((n - 17) * c.Riem2 + (92 - n) * c.Ric2) / 180 + (n - 14) * c.R * c.R / 72};
    const U1Coincidence u = u1_coincidence(p);
    const ScalarCoincidence s = scalar_coincidence(p);
    TraceTriple assembled{u.tr0 - 2 * s.b0, u.tr1 - 2 * s.b1, u.tr2 - s.b2};
    if (closed.tr0 != assembled.tr0 || closed.tr1 != assembled.tr1 || closed.tr2 != assembled.tr2)
        throw std::logic_error("ghost-subtracted traces disagree with the curvature form");
    return closed;
}

// Weight of the Poincare inequality, -D^{-1/2} Delta D^{1/2} 1.
inline double phi_weight(const DimensionParams& p, double r) {
    if (!(r > 0.0)) throw config_error("phi_weight needs r > 0");
    if (r < 0.1) {
        static thread_local int cached_n = -1;
        static thread_local RadialSeries cached;
        if (cached_n != p.n) {
            cached = nhat_apply(RadialSeries::constant(1), p);
            cached_n = p.n;
        }
        return cached(r);
    }
    const double n = p.n;
    const double rc = r / std::tanh(r);
    return -(n - 1) / (4.0 * r * r) * ((n - 3) * (1.0 - rc * rc) - 2.0 * r * r);
}

struct PoincareResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

// int |f'|^2 sinh^{n-1} versus int Phi f^2 sinh^{n-1} over the support [0, radius].
template <class F>
PoincareResult poincare_check(F&& f, double radius, const DimensionParams& p) {
    if (!(radius > 0.0)) throw config_error("support radius must be positive");
    auto deriv = [&](double r) {
        if constexpr (std::is_invocable_v<F, Dual<double>>) {
            return f(make_variable<Dual<double>>(r)).d;
        } else {
            double h = 1e-5 * std::max(1.0, r);
            return (f(r + h) - f(r - h)) / (2.0 * h);
        }
    };
    auto val = [&](double r) {
        if constexpr (std::is_invocable_v<F, double>) return static_cast<double>(f(r));
        else return f(Dual<double>(r)).v;
    };
    auto lhs_f = [&](double r) {
        double d = deriv(r);
        return d * d * std::pow(std::sinh(r), p.n - 1);
    };
    auto rhs_f = [&](double r) {
        double v = val(r);
        return phi_weight(p, r) * v * v * std::pow(std::sinh(r), p.n - 1);
    };
    PoincareResult out;
    out.lhs = checked(integrate(lhs_f, 0.0, radius, 1e-12), 1e-8, "poincare_check");
    out.rhs = checked(integrate(rhs_f, 0.0, radius, 1e-12), 1e-8, "poincare_check");
    out.holds = out.lhs >= out.rhs - 1e-9;
    return out;
}

inline PoincareResult poincare_check(const RadialFunction& f, const DimensionParams& p) {
    return poincare_check([&](double r) { return f(r); }, f.extent, p);
}

}  // namespace hyperheat
