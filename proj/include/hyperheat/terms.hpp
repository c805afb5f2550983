#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace hyperheat {

// One summand  coeff * r^a coth^b(r) csch^c(r) t^{-d}.
struct Term {
    Rational coeff;
    int a = 0;  // power of r
    int b = 0;  // power of coth r, kept in {0, 1}
    int c = 0;  // power of csch r
    int d = 0;  // power of 1/t
};

// Sum of terms carrying an implicit Gaussian factor exp(-r^2/(4t)).
// Derivatives act on the full product, so d_r() of the expression E
// returns the E' with  d/dr (E G) = E' G.
class GaussianTermExpr {
public:
    using Key = std::array<int, 4>;

    GaussianTermExpr() = default;

    static GaussianTermExpr constant(const Rational& q) {
        GaussianTermExpr e;
        e.add(0, 0, 0, 0, q);
        return e;
    }

    static GaussianTermExpr monomial(const Rational& q, int a, int b, int c, int d) {
        GaussianTermExpr e;
        e.add(a, b, c, d, q);
        return e;
    }

    void add(int a, int b, int c, int d, const Rational& q) {
        if (q == 0) return;
        while (b >= 2) {  // coth^2 = 1 + csch^2
            add(a, b - 2, c + 2, d, q);
            b -= 2;
        }
        auto [it, fresh] = terms_.try_emplace(Key{a, b, c, d}, q);
        if (!fresh) {
            it->second += q;
            if (it->second == 0) terms_.erase(it);
        }
    }

    GaussianTermExpr d_r() const {
        GaussianTermExpr out;
        for (const auto& [key, q] : terms_) {
            auto [a, b, c, d] = key;
            if (a != 0) out.add(a - 1, b, c, d, q * a);
            if (b == 1) out.add(a, 0, c + 2, d, -q);
            if (c != 0) out.add(a, b + 1, c, d, -q * c);
            out.add(a + 1, b, c, d + 1, -q / 2);
        }
        return out;
    }

    GaussianTermExpr d_t() const {
        GaussianTermExpr out;
        for (const auto& [key, q] : terms_) {
            auto [a, b, c, d] = key;
            if (d != 0) out.add(a, b, c, d + 1, -q * d);
            out.add(a + 2, b, c, d + 2, q / 4);
        }
        return out;
    }

    GaussianTermExpr times(const Rational& s, int a, int b, int c, int d) const {
        GaussianTermExpr out;
        for (const auto& [key, q] : terms_) out.add(key[0] + a, key[1] + b, key[2] + c, key[3] + d, q * s);
        return out;
    }

    GaussianTermExpr scaled(const Rational& s) const { return times(s, 0, 0, 0, 0); }

    // (1/sinh r) d/dr applied to (E G).
    GaussianTermExpr recurrence_step() const { return d_r().times(1, 0, 0, 1, 0); }

    GaussianTermExpr& operator+=(const GaussianTermExpr& o) {
        for (const auto& [key, q] : o.terms_) add(key[0], key[1], key[2], key[3], q);
        return *this;
    }
    GaussianTermExpr& operator-=(const GaussianTermExpr& o) {
        for (const auto& [key, q] : o.terms_) add(key[0], key[1], key[2], key[3], -q);
        return *this;
    }
    friend GaussianTermExpr operator+(GaussianTermExpr x, const GaussianTermExpr& y) { return x += y; }
    friend GaussianTermExpr operator-(GaussianTermExpr x, const GaussianTermExpr& y) { return x -= y; }

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    std::vector<Term> terms() const {
        std::vector<Term> v;
        for (const auto& [key, q] : terms_) v.push_back({q, key[0], key[1], key[2], key[3]});
        return v;
    }

    const std::map<Key, Rational>& raw() const { return terms_; }

private:
    std::map<Key, Rational> terms_;
};

inline GaussianTermExpr recurrence_step(const GaussianTermExpr& e) { return e.recurrence_step(); }

// Taylor expansion in r of an expression without its Gaussian factor.
// coeffs[j] maps d -> coefficient of r^{parity + 2j} t^{-d}.
struct RegularSeries {
    bool regular = false;
    int parity = 0;
    std::vector<std::map<int, Rational>> coeffs;
};

namespace detail {

inline std::vector<Rational> series_mul(const std::vector<Rational>& x, const std::vector<Rational>& y, std::size_t m) {
    std::vector<Rational> z(m, Rational(0));
    for (std::size_t i = 0; i < m && i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; i + j < m && j < y.size(); ++j) z[i + j] += x[i] * y[j];
    }
    return z;
}

}  // namespace detail

// Expand through r^{parity + 2(order-1)} using the Laurent series of coth and csch.
inline RegularSeries regular_series(const GaussianTermExpr& e, int order) {
    RegularSeries out;
    if (e.empty()) {
        out.regular = true;
        out.coeffs.assign(order, {});
        return out;
    }
    int min_net = 0, max_c = 0, parity = -1;
    for (const auto& [key, q] : e.raw()) {
        int net = key[0] - key[1] - key[2];
        min_net = std::min(min_net, net);
        max_c = std::max(max_c, key[2]);
        int par = ((net % 2) + 2) % 2;
        if (parity < 0) parity = par;
        else if (parity != par) return out;
    }
    int top = parity + 2 * (order - 1);
    std::size_t m = static_cast<std::size_t>((top - min_net) / 2 + 1);

    // r coth r and r csch r as series in r^2.
    std::vector<Rational> rcoth(m), rcsch(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational b = bernoulli_table(2 * static_cast<int>(i)) / factorial(2 * static_cast<int>(i));
        Rational p4 = rpow(Rational(4), static_cast<int>(i));
        rcoth[i] = p4 * b;
        rcsch[i] = (2 - p4) * b;
    }
    std::vector<std::vector<Rational>> cpow{std::vector<Rational>(m, Rational(0))};
    cpow[0][0] = 1;
    for (int c = 1; c <= max_c; ++c) cpow.push_back(detail::series_mul(cpow.back(), rcsch, m));

    std::map<std::pair<int, int>, Rational> acc;
    for (const auto& [key, q] : e.raw()) {
        auto [a, b, c, d] = key;
        int net = a - b - c;
        std::vector<Rational> tmp;
        const std::vector<Rational>* sp = &cpow[c];
        if (b == 1) {
            tmp = detail::series_mul(cpow[c], rcoth, m);
            sp = &tmp;
        }
        for (std::size_t i = 0; i < m; ++i) {
            int power = net + 2 * static_cast<int>(i);
            if (power > top) break;
            if ((*sp)[i] == 0) continue;
            acc[{power, d}] += q * (*sp)[i];
        }
    }
    out.parity = parity;
    out.coeffs.assign(order, {});
    for (const auto& [pd, q] : acc) {
        if (q == 0) continue;
        if (pd.first < 0) return RegularSeries{};
        out.coeffs[(pd.first - parity) / 2][pd.second] = q;
    }
    out.regular = true;
    return out;
}

// Floating-point evaluator for an expression with the Gaussian stripped.
class CompiledExpr {
public:
    static constexpr double series_radius = 1.0;
    static constexpr int series_order = 30;

    CompiledExpr() = default;
    explicit CompiledExpr(const GaussianTermExpr& e) {
        for (const auto& t : e.terms()) {
            terms_.push_back({to_double(t.coeff), t.a, t.b, t.c, t.d});
            max_a_ = std::max(max_a_, t.a);
            max_c_ = std::max(max_c_, t.c);
        }
        RegularSeries s = regular_series(e, series_order);
        regular_ = s.regular;
        parity_ = s.parity;
        if (regular_) {
            for (const auto& level : s.coeffs) {
                std::vector<std::pair<int, double>> row;
                for (const auto& [d, q] : level) row.emplace_back(d, to_double(q));
                series_.push_back(std::move(row));
            }
        }
    }

    bool regular() const { return regular_; }
    int parity() const { return parity_; }

    // Value at r = 0 as coefficients of t^{-d}; only for even regular expressions.
    double at_origin(double t) const {
        if (!regular_ || parity_ != 0) throw std::logic_error("expression has no finite even limit at r = 0");
        double s = 0.0;
        for (const auto& [d, q] : series_[0]) s += q * std::pow(t, -d);
        return s;
    }

    double operator()(double r, double t) const {
        if (regular_ && r < series_radius) return eval_series(r, t);
        return eval_direct(r, t);
    }

    double eval_direct(double r, double t) const {
        double coth = 1.0 / std::tanh(r), csch = 1.0 / std::sinh(r);
        std::vector<double> rp(max_a_ + 1), cp(max_c_ + 1);
        rp[0] = cp[0] = 1.0;
        for (int i = 1; i <= max_a_; ++i) rp[i] = rp[i - 1] * r;
        for (int i = 1; i <= max_c_; ++i) cp[i] = cp[i - 1] * csch;
        double s = 0.0;
        for (const auto& m : terms_) {
            double v = m.coef * rp[m.a] * cp[m.c] * std::pow(t, -m.d);
            if (m.b) v *= coth;
            s += v;
        }
        return s;
    }

    double eval_series(double r, double t) const {
        double x = r * r, s = 0.0;
        for (std::size_t j = series_.size(); j-- > 0;) {
            double cj = 0.0;
            for (const auto& [d, q] : series_[j]) cj += q * std::pow(t, -d);
            s = s * x + cj;
        }
        return parity_ ? s * r : s;
    }

private:
    struct Mono {
        double coef;
        int a, b, c, d;
    };
    std::vector<Mono> terms_;
    std::vector<std::vector<std::pair<int, double>>> series_;
    int max_a_ = 0, max_c_ = 0;
    bool regular_ = false;
    int parity_ = 0;
};

}  // namespace hyperheat
