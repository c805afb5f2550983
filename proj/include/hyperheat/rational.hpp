#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <mutex>
#include <string>
#include <vector>

namespace hyperheat {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return Rational(c);
}

inline Rational rpow(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

// Bernoulli numbers with B_1 = -1/2, cached and extended on demand.
inline Rational bernoulli_table(int j) {
    static std::mutex mtx;
    static std::vector<Rational> table{Rational(1)};
    std::lock_guard<std::mutex> lock(mtx);
    while (static_cast<int>(table.size()) <= j) {
        int m = static_cast<int>(table.size());
        Rational s = 0;
        for (int i = 0; i < m; ++i) s += binomial(m + 1, i) * table[i];
        table.push_back(-s / (m + 1));
    }
    return table[j];
}

}  // namespace hyperheat
