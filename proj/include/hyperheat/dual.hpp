#pragma once

#include <cmath>
#include <type_traits>

namespace hyperheat {

// Forward-mode dual number. Nest Dual<Dual<double>> for higher derivatives.
template <class T>
struct Dual {
    T v{};
    T d{};

    constexpr Dual() = default;
    template <class S, std::enable_if_t<std::is_arithmetic_v<S>, int> = 0>
    constexpr Dual(S x) : v(x), d(0.0) {}
    constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}
template <class S> using if_scalar = std::enable_if_t<std::is_arithmetic_v<S>, int>;

template <class T, class S, if_scalar<S> = 0> Dual<T> operator+(const Dual<T>& a, S b) { return Dual<T>(a.v + b, a.d); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator+(S a, const Dual<T>& b) { return Dual<T>(a + b.v, b.d); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator-(const Dual<T>& a, S b) { return Dual<T>(a.v - b, a.d); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator-(S a, const Dual<T>& b) { return Dual<T>(a - b.v, -b.d); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator*(const Dual<T>& a, S b) { return Dual<T>(a.v * b, a.d * b); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator*(S a, const Dual<T>& b) { return Dual<T>(a * b.v, a * b.d); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator/(const Dual<T>& a, S b) { return Dual<T>(a.v / b, a.d / b); }
template <class T, class S, if_scalar<S> = 0> Dual<T> operator/(S a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return a.v < b.v; }
template <class T> bool operator<(const Dual<T>& a, double b) { return a.v < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return a.v > b; }

template <class T> Dual<T> exp(const Dual<T>& a) { using std::exp; T e = exp(a.v); return {e, e * a.d}; }
template <class T> Dual<T> log(const Dual<T>& a) { using std::log; return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> log1p(const Dual<T>& a) { using std::log1p; return {log1p(a.v), a.d / (1.0 + a.v)}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) { using std::sqrt; T s = sqrt(a.v); return {s, a.d / (2.0 * s)}; }
template <class T> Dual<T> sin(const Dual<T>& a) { using std::sin; using std::cos; return {sin(a.v), cos(a.v) * a.d}; }
template <class T> Dual<T> cos(const Dual<T>& a) { using std::sin; using std::cos; return {cos(a.v), -sin(a.v) * a.d}; }
template <class T> Dual<T> sinh(const Dual<T>& a) { using std::sinh; using std::cosh; return {sinh(a.v), cosh(a.v) * a.d}; }
template <class T> Dual<T> cosh(const Dual<T>& a) { using std::sinh; using std::cosh; return {cosh(a.v), sinh(a.v) * a.d}; }
template <class T> Dual<T> tanh(const Dual<T>& a) {
    using std::tanh;
    T th = tanh(a.v);
    return {th, (1.0 - th * th) * a.d};
}
inline constexpr long double two_over_sqrt_pi = 1.128379167095512573896158903121545172L;

template <class T> Dual<T> erf(const Dual<T>& a) {
    using std::erf; using std::exp;
    return Dual<T>(erf(a.v), two_over_sqrt_pi * exp(-a.v * a.v) * a.d);
}
template <class T> Dual<T> erfc(const Dual<T>& a) {
    using std::erfc; using std::exp;
    return Dual<T>(erfc(a.v), -two_over_sqrt_pi * exp(-a.v * a.v) * a.d);
}
template <class T> Dual<T> pow(const Dual<T>& a, double p) {
    using std::pow;
    T q = pow(a.v, p - 1.0);
    return {q * a.v, p * q * a.d};
}

// Integer power by repeated squaring, valid for any ring-like type.
template <class T>
T ipow(T x, int e) {
    if (e < 0) return T(1.0) / ipow(x, -e);
    T result(1.0);
    while (e) {
        if (e & 1) result = result * x;
        x = x * x;
        e >>= 1;
    }
    return result;
}

inline double value_of(double x) { return x; }
inline long double value_of(long double x) { return x; }
template <class T> auto value_of(const Dual<T>& x) { return value_of(x.v); }

// Number of scalar slots in a (possibly nested) dual.
template <class T> struct dual_width { static constexpr int value = 1; };
template <class T> struct dual_width<Dual<T>> { static constexpr int value = 2 * dual_width<T>::value; };

template <class T>
double& slot(T& x, int i) {
    if constexpr (is_dual_v<T>) {
        constexpr int half = dual_width<decltype(x.v)>::value;
        return i < half ? slot(x.v, i) : slot(x.d, i - half);
    } else {
        (void)i;
        return x;
    }
}

// Independent variable with unit derivative in every nesting level.
template <class T, class S = double>
T make_variable(S x) {
    if constexpr (is_dual_v<T>) {
        using Inner = decltype(T{}.v);
        return T(make_variable<Inner>(x), Inner(1.0));
    } else {
        return T(x);
    }
}

}  // namespace hyperheat
