#include <hyperheat/hyperheat.hpp>

#include <gtest/gtest.h>

using namespace hyperheat;

namespace {

// B_0..B_m from sum_{j<=m} C(m+1, j) B_j = 0.
std::vector<Rational> bernoulli_oracle(int m) {
    std::vector<Rational> b(m + 1);
    b[0] = 1;
    for (int k = 1; k <= m; ++k) {
        Rational s = 0;
        Rational c = 1;  // C(k+1, j)
        for (int j = 0; j < k; ++j) {
            s += c * b[j];
            c = c * (k + 1 - j) / (j + 1);
        }
        b[k] = -s / (k + 1);
    }
    return b;
}

}  // namespace

TEST(Bernoulli, CanonicalValues) {
    EXPECT_EQ(bernoulli(2), Rational(1, 6));
    EXPECT_EQ(bernoulli(4), Rational(-1, 30));
    EXPECT_EQ(bernoulli(12), Rational(-691, 2730));
    EXPECT_EQ(bernoulli(7), 0);
}

TEST(Bernoulli, AgreesWithRecurrence) {
    auto ref = bernoulli_oracle(60);
    for (int j = 2; j <= 60; ++j) EXPECT_EQ(bernoulli(j), ref[j]) << j;
}

TEST(Bernoulli, LargestIndexIsFinite) {
    Rational b = bernoulli(max_bernoulli_index);
    EXPECT_NE(b, 0);
    EXPECT_THROW(bernoulli(max_bernoulli_index + 1), config_error);
    EXPECT_THROW(bernoulli(1), config_error);
}

TEST(K2Series, LeadingCoefficients) {
    RationalSeries s = k2_series(6);
    EXPECT_EQ(s.coeffs[0], 1);
    EXPECT_EQ(s.coeffs[1], Rational(-1, 12));
    EXPECT_EQ(s.coeffs[2], Rational(7, 480));
    for (int l = 1; l <= 6; ++l)
        EXPECT_EQ(s.coeffs[l], (Rational(1) / rpow(Rational(2), 2 * l - 1) - 1) * bernoulli_oracle(12)[2 * l] / factorial(l));
    EXPECT_THROW(k2_series(0), config_error);
}

TEST(K2Series, PartialSumMatchesQuadratureKernel) {
    const double t = 0.01;
    double v = 4 * pi * t * std::exp(0.25 * t) * p2(0.0, t).value;
    EXPECT_NEAR(k2_series(4)(t), v, 2e-6);
}

TEST(EvenCoincidenceSeries, ReproducesK2) {
    RationalSeries a = k2_series(8), b = even_coincidence_series(2, 8);
    for (int l = 0; l <= 8; ++l) EXPECT_EQ(a.coeffs[l], b.coeffs[l]) << l;
}

// e^{rho^2 t} (1 + b1 t + b2 t^2 / 2) from the curvature polynomials.
TEST(EvenCoincidenceSeries, AgreesWithTransportCoefficients) {
    for (int n : {2, 4, 6, 8}) {
        RationalSeries s = even_coincidence_series(n, 3);
        const Rational rho2 = Rational((n - 1) * (n - 1), 4);
        const Rational nn(n);
        const Rational b1 = -nn * (nn - 1) / 6;
        const Rational b2 = nn * nn * nn * nn / 36 - nn * nn * nn / 15 + 13 * nn * nn / 180 - nn / 30;
        EXPECT_EQ(s.coeffs[1], rho2 + b1) << n;
        EXPECT_EQ(s.coeffs[2], rho2 * rho2 / 2 + rho2 * b1 + b2 / 2) << n;
    }
}

TEST(K4Series, Coefficients) {
    RationalSeries s = k4_series(4);
    EXPECT_EQ(s.coeffs[1], Rational(1, 4));
    // t^2 coefficient of e^{9t/4} (1 - 2t + (29/15) t^2)
    const Rational a(9, 4);
    EXPECT_EQ(s.coeffs[2], a * a / 2 - 2 * a + Rational(29, 15));
    EXPECT_EQ(s.coeffs[2], Rational(-17, 480));
    EXPECT_THROW(k4_series(1), config_error);
}

TEST(K4Series, PartialSumMatchesQuadratureKernel) {
    for (double t : {0.01, 0.02}) {
        double v = std::pow(4 * pi * t, 2) * std::exp(2.25 * t) * p_even(DimensionParams(4), 0.0, t).value;
        EXPECT_NEAR(k4_series(6)(t), v, 1e-9) << t;
    }
}

TEST(ACoefficients, Table) {
    EXPECT_EQ(extract_a_coeffs(1).coeffs, (std::vector<Rational>{1}));
    EXPECT_EQ(extract_a_coeffs(2).coeffs, (std::vector<Rational>{1, Rational(2, 3)}));
    EXPECT_EQ(extract_a_coeffs(3).coeffs, (std::vector<Rational>{1, 2, Rational(16, 15)}));
    EXPECT_THROW(extract_a_coeffs(0), config_error);
}

TEST(ACoefficients, PolynomialReproducesKernelAtOrigin) {
    for (int k = 1; k <= 5; ++k) {
        RationalSeries a = extract_a_coeffs(k);
        const DimensionParams p(2 * k + 1);
        for (double t : {0.1, 0.7, 2.0}) {
            double v = std::pow(4 * pi * t, p.n / 2.0) * std::exp(k * k * t) * p_odd(p, 0.0, t).value;
            EXPECT_NEAR(a(t) / v, 1.0, 1e-12) << k << " " << t;
        }
    }
}

TEST(ACoefficients, FirstOrderMatchesScalarCurvature) {
    for (int k = 1; k <= 3; ++k) {
        RationalSeries a = extract_a_coeffs(k);
        Rational a1 = a.coeffs.size() > 1 ? a.coeffs[1] : Rational(0);
        const Rational n(2 * k + 1);
        EXPECT_EQ(-k * k + a1, -n * (n - 1) / 6) << k;
    }
}

TEST(TruncateOptimally, StopsBeforeSmallestTerm) {
    TruncatedSum s = truncate_optimally({1.0, 0.5, -0.1, 0.2, 5.0});
    EXPECT_DOUBLE_EQ(s.sum, 1.5);
    EXPECT_EQ(s.terms_used, 2);
    EXPECT_DOUBLE_EQ(s.error_bound, 0.1);
    TruncatedSum e = truncate_optimally({});
    EXPECT_EQ(e.terms_used, 0);
    EXPECT_EQ(e.sum, 0.0);
}
