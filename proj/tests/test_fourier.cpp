#include <hyperheat/hyperheat.hpp>

#include <gtest/gtest.h>

using namespace hyperheat;

namespace {

RadialFunction gaussian_bump(double scale = 1.0) {
    return RadialFunction::gaussian([scale](double r) { return scale * std::exp(-r * r); }, 9.0);
}

RadialFunction heat_profile(int n, double t) {
    return RadialFunction::gaussian([n, t](double r) { return p_odd(DimensionParams(n), r, t).value; },
                                    2.0 * (n - 1) * t + std::sqrt(4.0 * t * std::log(1e40)) + 1.0);
}

}  // namespace

TEST(SphericalFunction, UnitAtOrigin) {
    for (int n = 2; n <= 7; ++n)
        for (double l : {0.0, 0.3, 1.0, 4.0}) EXPECT_NEAR(phi_lambda(DimensionParams(n), l, 0.0), 1.0, 1e-15);
}

TEST(SphericalFunction, ThreeDimensionalClosedForm) {
    EXPECT_NEAR(phi_lambda(DimensionParams(3), 1.0, 1.0), std::sin(1.0) / std::sinh(1.0), 1e-13);
    for (double l : {0.2, 1.5, 6.0})
        for (double r : {0.1, 0.6, 2.0, 5.0})
            EXPECT_NEAR(phi_lambda(DimensionParams(3), l, r), std::sin(l * r) / (l * std::sinh(r)), 1e-12);
}

TEST(SphericalFunction, EigenfunctionResidual) {
    for (int n : {2, 4, 5}) {
        const DimensionParams p(n);
        const double l = 0.7, r = 1.3;
        auto phi = [&](auto x) { return phi_lambda(p, l, x); };
        double lap = radial_laplacian(phi, p, r);
        EXPECT_LT(std::abs(lap + (l * l + p.rho() * p.rho()) * phi_lambda(p, l, r)), 1e-7) << n;
    }
}

TEST(SphericalFunction, RepresentationsAgree) {
    for (int n : {3, 5, 7})
        for (double r : {0.3, 0.5, 0.8}) {
            double series = detail::phi_hypergeometric(n, 1.3, r);
            EXPECT_NEAR(series, detail::phi_finite_sum(n, 1.3, r), 1e-12) << n << " " << r;
        }
    for (int n : {2, 4})
        for (double r : {0.3, 0.5}) EXPECT_NEAR(detail::phi_hypergeometric(n, 1.3, r), detail::phi_angular(n, 1.3, r), 1e-11);
}

TEST(CFunction, ProductForm) {
    for (double l : {0.25, 1.0, 3.0}) EXPECT_NEAR(c_abs_squared(DimensionParams(3), l), 1.0 / (l * l), 1e-15);
    EXPECT_DOUBLE_EQ(c_abs_squared(DimensionParams(5), 1.0), 18.0);
    EXPECT_EQ(plancherel_density(DimensionParams(3), 0.5), 0.25);
    EXPECT_THROW(c_abs_squared(DimensionParams(3), 0.0), config_error);
    EXPECT_THROW(c_abs_squared(DimensionParams(4), 1.0), config_error);
}

TEST(CFunction, GammaFormMatchesProduct) {
    for (int n : {3, 5, 7, 9})
        for (double l : {0.3, 1.0, 2.5})
            EXPECT_NEAR(std::norm(c_function(DimensionParams(n), l)) / c_abs_squared(DimensionParams(n), l), 1.0, 1e-12);
}

TEST(CFunction, LargeRadiusAmplitude) {
    const std::complex<double> l(0.5, -0.2);
    for (int n : {3, 4}) {
        const DimensionParams p(n);
        std::complex<double> c = c_function(p, l);
        EXPECT_LT(std::abs(scaled_phi_complex(p, l, 40.0) - c) / std::abs(c), 1e-4) << n;
        // at r = 20 the deviation is the subleading c(-lambda) e^{-2 i lambda r} term
        double dev = std::abs(scaled_phi_complex(p, l, 20.0) - c) / std::abs(c);
        double sub = std::abs(c_function(p, -l) * std::exp(std::complex<double>(0.0, -2.0) * l * 20.0)) / std::abs(c);
        EXPECT_NEAR(dev / sub, 1.0, 0.05) << n;
    }
}

TEST(CFunction, ComplexSphericalFunctionOnRealAxis) {
    const DimensionParams p(3);
    EXPECT_NEAR(phi_lambda_complex(p, 1.2, 0.9).real(), phi_lambda(p, 1.2, 0.9), 1e-9);
    EXPECT_NEAR(phi_lambda_complex(p, 1.2, 0.9).imag(), 0.0, 1e-9);
}

TEST(ForwardTransform, DiagonalizesHeatSemigroup) {
    EXPECT_NEAR(forward_radial(heat_profile(3, 1.0), DimensionParams(3), 1.0), std::exp(-2.0), 1e-7);
    EXPECT_NEAR(forward_radial(heat_profile(5, 0.5), DimensionParams(5), 0.5), std::exp(-(0.25 + 4.0) * 0.5), 1e-6);
}

TEST(ForwardTransform, Linear) {
    const DimensionParams p(3);
    RadialFunction f = gaussian_bump(), g = heat_profile(3, 0.5);
    RadialFunction h = RadialFunction::gaussian([&](double r) { return 2.0 * f(r) - 0.5 * g(r); }, 9.0);
    for (double l : {0.2, 1.0, 3.0}) {
        double lhs = forward_radial(h, p, l);
        double rhs = 2.0 * forward_radial(f, p, l) - 0.5 * forward_radial(g, p, l);
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(InverseTransform, RoundTrip) {
    const DimensionParams p(3);
    RadialFunction f = gaussian_bump();
    SpectralFunction ft{[&](double l) { return forward_radial(f, p, l); }, 14.0};
    for (double r : {0.0, 0.5, 1.0}) EXPECT_NEAR(inverse_radial(ft, p, r), std::exp(-r * r), 1e-6) << r;
}

TEST(InverseTransform, ZeroIsZero) {
    SpectralFunction zero{[](double) { return 0.0; }, 10.0};
    EXPECT_EQ(inverse_radial(zero, DimensionParams(3), 0.7), 0.0);
}

TEST(Plancherel, GaussianNormsAgree) {
    PlancherelSides s = plancherel_sides(gaussian_bump(), DimensionParams(3));
    EXPECT_NEAR(s.spectral / s.spatial, 1.0, 1e-6);
}

TEST(Plancherel, HeatKernelNormClosedForm) {
    // (1 / 2 pi^2) int_0^inf e^{-2(l^2 + 1)} l^2 dl
    const double expected = std::exp(-2.0) * std::sqrt(pi) / (4.0 * std::pow(2.0, 1.5)) / (2.0 * pi * pi);
    PlancherelSides s = plancherel_sides(heat_profile(3, 1.0), DimensionParams(3));
    EXPECT_NEAR(s.spatial / expected, 1.0, 1e-7);
    EXPECT_NEAR(s.spectral / expected, 1.0, 1e-7);
}

TEST(Plancherel, QuadraticScaling) {
    const DimensionParams p(3);
    double base = plancherel_norm(gaussian_bump(), p);
    EXPECT_NEAR(plancherel_norm(gaussian_bump(3.0), p) / base, 9.0, 9e-12);
}

TEST(Plancherel, RejectsEvenDimension) {
    EXPECT_THROW(plancherel_sides(gaussian_bump(), DimensionParams(4)), config_error);
}
