#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "heatkernel.hpp"
#include "params.hpp"
#include "rational.hpp"
#include "terms.hpp"

namespace hyperheat {

inline constexpr int max_bernoulli_index = 200;

// B_idx for even idx in [2, 200]; odd idx >= 3 give exact zero.
inline Rational bernoulli(int idx) {
    if (idx < 2 || idx > max_bernoulli_index)
        throw config_error("Bernoulli index must lie in [2, " + std::to_string(max_bernoulli_index) + "]");
    if (idx % 2 == 1) return 0;
    return bernoulli_table(idx);
}

// Coefficients c_0..c_L of t^l after stripping the prefactor named in normalization.
struct RationalSeries {
    std::vector<Rational> coeffs;
    std::string normalization;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double t) const {
        double s = 0.0;
        for (std::size_t l = coeffs.size(); l-- > 0;) s = s * t + to_double(coeffs[l]);
        return s;
    }
};

// Small-t series of (4 pi t) e^{t/4} p_2(0, t).
inline RationalSeries k2_series(int L) {
    if (L < 1) throw config_error("k2_series needs L >= 1");
    RationalSeries s{{Rational(1)}, "(4 pi t)^{-1} exp(-(m^2 + 1/4) t)"};
    for (int l = 1; l <= L; ++l) {
        Rational p = Rational(1) / rpow(Rational(4), l) * 2;  // 2^{1-2l}
        s.coeffs.push_back((p - 1) * bernoulli(2 * l) / factorial(l));
    }
    return s;
}

// Small-t series of (4 pi t)^{n/2} e^{rho^2 t} p_n(0, t) for even n.
// Descends from the odd kernel in dimension n + 1 at r = 0:
//   p_n(0, t) = 2 e^{(2n-1)t/4} int_0^inf p_{n+1}(s, t) cosh(s/2) ds,
// and integrates the Taylor series of the term list against Gaussian moments.
inline RationalSeries even_coincidence_series(int n, int L) {
    if (n < 2 || n % 2 != 0) throw config_error("even_coincidence_series needs even n >= 2");
    if (L < 0) throw config_error("series order must be non-negative");
    const int k = n / 2;
    const auto& data = detail::odd_kernel_data(k);
    RegularSeries rs = regular_series(data.expr, L + 1);
    if (!rs.regular || rs.parity != 0) throw std::logic_error("kernel terms are not even and regular at r = 0");
    std::vector<Rational> out(L + 1, Rational(0));
    for (int j = 0; j <= L; ++j) {
        // coefficient of s^{2j} in P(s) cosh(s/2)
        std::map<int, Rational> q;
        for (int i = 0; i <= j; ++i) {
            Rational ch = Rational(1) / (rpow(Rational(4), i) * factorial(2 * i));
            for (const auto& [d, c] : rs.coeffs[j - i]) q[d] += c * ch;
        }
        Rational moment = factorial(2 * j) / factorial(j);
        for (const auto& [d, c] : q) {
            int power = k + j - d;
            if (power < 0 && c != 0) throw std::logic_error("negative power in the coincidence series");
            if (power <= L) out[power] += c * moment;
        }
    }
    Rational scale = rpow(Rational(-2), k);
    for (auto& c : out) c *= scale;
    return {out, "(4 pi t)^{-n/2} exp(-(rho^2 + m^2) t)"};
}

// Small-t series of (4 pi t)^2 e^{9t/4} p_4(0, t).
inline RationalSeries k4_series(int L) {
    if (L < 2) throw config_error("k4_series needs L >= 2");
    RationalSeries s = even_coincidence_series(4, L);
    s.normalization = "(4 pi t)^{-2} exp(-(m^2 + 9/4) t)";
    return s;
}

// a_{k,0..k-1}: (4 pi t)^{n/2} e^{k^2 t} p_n(0, t) = sum_l a_{k,l} t^l for n = 2k + 1.
inline RationalSeries extract_a_coeffs(int k) {
    if (k < 1) throw config_error("extract_a_coeffs needs k >= 1");
    const auto& data = detail::odd_kernel_data(k);
    RegularSeries rs = regular_series(data.expr, 1);
    if (!rs.regular || rs.parity != 0) throw std::logic_error("kernel terms are not even and regular at r = 0");
    const auto& origin = rs.coeffs[0];
    RationalSeries out{{}, "(4 pi t)^{-n/2} exp(-(k^2 + m^2) t)"};
    Rational scale = rpow(Rational(-2), k);
    for (const auto& [d, q] : origin)
        if (d <= 0 || d > k) throw std::logic_error("a-coefficient beyond the finite range");
    for (int l = 0; l < k; ++l) {
        auto it = origin.find(k - l);
        out.coeffs.push_back(it == origin.end() ? Rational(0) : scale * it->second);
    }
    return out;
}

struct TruncatedSum {
    double sum = 0.0;
    int terms_used = 0;      // indices [0, terms_used) were summed
    double error_bound = 0;  // magnitude of the smallest term
};

// Optimal truncation of an asymptotic series: stop before the smallest-magnitude term.
inline TruncatedSum truncate_optimally(const std::vector<double>& terms) {
    TruncatedSum out;
    if (terms.empty()) return out;
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (std::abs(terms[i]) < std::abs(terms[smallest])) smallest = i;
    for (std::size_t i = 0; i < smallest; ++i) out.sum += terms[i];
    out.terms_used = static_cast<int>(smallest);
    out.error_bound = std::abs(terms[smallest]);
    return out;
}

}  // namespace hyperheat
