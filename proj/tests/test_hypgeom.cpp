#include <hyperheat/hyperheat.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace hyperheat;

namespace {

HalfSpacePoint random_point(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> horiz(-2.0, 2.0), height(0.2, 3.0);
    std::vector<double> x(n);
    for (int i = 0; i + 1 < n; ++i) x[i] = horiz(rng);
    x[n - 1] = height(rng);
    return HalfSpacePoint(x);
}

std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b, int m) {
    std::vector<double> c(m * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j) c[i * m + j] += a[i * m + k] * b[k * m + j];
    return c;
}

// Product of spatial rotations and a boost along the vertical axis.
MobiusElement random_isometry(std::mt19937_64& rng, int n) {
    const int m = n + 1;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi), rapidity(-1.0, 1.0);
    std::vector<double> h(m * m, 0.0);
    for (int i = 0; i < m; ++i) h[i * m + i] = 1.0;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::vector<double> g(m * m, 0.0);
            for (int d = 0; d < m; ++d) g[d * m + d] = 1.0;
            double a = angle(rng);
            g[i * m + i] = g[j * m + j] = std::cos(a);
            g[i * m + j] = -std::sin(a);
            g[j * m + i] = std::sin(a);
            h = matmul(h, g, m);
        }
    std::vector<double> boost(m * m, 0.0);
    for (int d = 0; d < m; ++d) boost[d * m + d] = 1.0;
    double b = rapidity(rng);
    boost[0] = boost[n * m + n] = std::cosh(b);
    boost[n] = boost[n * m] = std::sinh(b);
    return MobiusElement(n, matmul(h, boost, m));
}

}  // namespace

TEST(ChordalDistance, VanishesAtCoincidence) {
    HalfSpacePoint x({0.3, -1.0, 2.0});
    EXPECT_EQ(chordal_u(x, x), 0.0);
}

TEST(ChordalDistance, PlaneExample) {
    EXPECT_DOUBLE_EQ(chordal_u(HalfSpacePoint({0.0, 1.0}), HalfSpacePoint({1.0, 1.0})), 0.5);
}

TEST(ChordalDistance, MatchesCoshOfDistance) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        int n = 2 + i % 4;
        HalfSpacePoint x = random_point(rng, n), y = random_point(rng, n);
        double u = chordal_u(x, y);
        EXPECT_NEAR(std::cosh(geodesic_distance(x, y)) - 1.0, u, 1e-12 * std::max(1.0, u));
    }
}

TEST(ChordalDistance, RejectsMismatchedDimensions) {
    EXPECT_THROW(chordal_u(HalfSpacePoint({0.0, 1.0}), HalfSpacePoint({0.0, 0.0, 1.0})), config_error);
}

TEST(HalfSpacePoint, RejectsNonPositiveHeight) {
    EXPECT_THROW(HalfSpacePoint({0.0, 0.0}), config_error);
    EXPECT_THROW(HalfSpacePoint({0.0, -1.0}), config_error);
    EXPECT_THROW(HalfSpacePoint({}), config_error);
}

TEST(GeodesicDistance, Examples) {
    EXPECT_NEAR(geodesic_distance(HalfSpacePoint({0.0, 1.0}), HalfSpacePoint({1.0, 1.0})), std::acosh(1.5), 1e-15);
    EXPECT_NEAR(geodesic_distance(HalfSpacePoint({0.0, 1.0}), HalfSpacePoint({1.0, 1.0})), 0.9624236501, 1e-10);
    EXPECT_NEAR(geodesic_distance(HalfSpacePoint({0.0, 1.0}), HalfSpacePoint({0.0, std::exp(1.0)})), 1.0, 1e-15);
}

TEST(GeodesicDistance, TriangleInequality) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        int n = 2 + i % 3;
        HalfSpacePoint a = random_point(rng, n), b = random_point(rng, n), c = random_point(rng, n);
        double slack = geodesic_distance(a, b) + geodesic_distance(b, c) - geodesic_distance(a, c);
        EXPECT_GE(slack, -1e-12);
    }
}

TEST(Mobius, IdentityLeavesPointsFixed) {
    HalfSpacePoint x({0.4, -0.2, 1.7});
    HalfSpacePoint y = mobius_apply(MobiusElement::identity(3), x);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], x[i], 1e-15);
}

TEST(Mobius, VerticalBoostDilates) {
    for (int n : {2, 3, 5}) {
        std::vector<double> origin(n, 0.0);
        origin.back() = 1.0;
        HalfSpacePoint x(origin);
        HalfSpacePoint y = mobius_apply(MobiusElement::vertical_boost(n, 1.0), x);
        for (int i = 0; i + 1 < n; ++i) EXPECT_NEAR(y[i], 0.0, 1e-15);
        const double h = y.height();
        EXPECT_TRUE(std::abs(h - std::exp(1.0)) < 1e-14 || std::abs(h - std::exp(-1.0)) < 1e-14) << h;
        EXPECT_NEAR(geodesic_distance(x, y), 1.0, 1e-14);
    }
}

TEST(Mobius, PreservesDistance) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        int n = 2 + i % 3;
        MobiusElement h = random_isometry(rng, n);
        HalfSpacePoint x = random_point(rng, n), y = random_point(rng, n);
        double d = geodesic_distance(x, y);
        EXPECT_NEAR(geodesic_distance(mobius_apply(h, x), mobius_apply(h, y)), d, 1e-10 * std::max(1.0, d));
    }
}

TEST(Mobius, RejectsNonLorentzMatrix) {
    std::vector<double> h(9, 0.0);
    h[0] = 2.0;
    h[4] = h[8] = 1.0;
    EXPECT_THROW(MobiusElement(2, h), config_error);
    std::vector<double> reflect{1, 0, 0, 0, -1, 0, 0, 0, 1};
    EXPECT_THROW(MobiusElement(2, reflect), config_error);
    std::vector<double> flip{-1, 0, 0, 0, -1, 0, 0, 0, 1};
    EXPECT_THROW(MobiusElement(2, flip), config_error);
}

TEST(BallVolume, ClosedForms) {
    EXPECT_NEAR(ball_volume(DimensionParams(2), 1.0), 2.0 * pi * (std::cosh(1.0) - 1.0), 1e-13);
    EXPECT_NEAR(ball_volume(DimensionParams(3), 1.0), pi * (std::sinh(2.0) - 2.0), 1e-13);
    EXPECT_NEAR(ball_volume(DimensionParams(2), 1.0), 3.4122763, 1e-7);
    EXPECT_NEAR(ball_volume(DimensionParams(3), 1.0), 2.0 * pi * (std::sinh(1.0) * std::cosh(1.0) - 1.0), 1e-13);
}

TEST(BallVolume, AgreesWithRadialQuadrature) {
    for (int n = 2; n <= 7; ++n)
        for (double r : {0.05, 0.7, 2.5}) {
            auto f = [n](double w) { return std::pow(std::sinh(w), n - 1); };
            double ref = sphere_area(n) * integrate(f, 0.0, r, 1e-12).value;
            EXPECT_NEAR(ball_volume(DimensionParams(n), r) / ref, 1.0, 1e-12) << n << " " << r;
        }
}

TEST(BallVolume, EuclideanLimit) {
    for (int n = 2; n <= 6; ++n) {
        const double r = 1e-3;
        double euclid = sphere_area(n) * std::pow(r, n) / n;
        EXPECT_NEAR(ball_volume(DimensionParams(n), r) / euclid, 1.0, 1e-6);
    }
}

TEST(BallVolume, RejectsNonPositiveRadius) { EXPECT_THROW(ball_volume(DimensionParams(3), 0.0), config_error); }

TEST(RadialLaplacian, ConstantAndCosh) {
    for (int n = 2; n <= 6; ++n) {
        DimensionParams p(n);
        EXPECT_NEAR(radial_laplacian([](auto) { return 1.0; }, p, 0.8), 0.0, 1e-12);
        auto ch = [](auto r) {
            using std::cosh;
            return cosh(r);
        };
        for (double r : {0.3, 1.0, 2.2}) EXPECT_NEAR(radial_laplacian(ch, p, r), n * std::cosh(r), 1e-12 * std::cosh(r));
    }
}

TEST(RadialLaplacian, SphericalFunctionEigenvalue) {
    const DimensionParams p(3);
    auto phi = [&](auto r) { return phi_lambda(p, 1.0, r); };
    EXPECT_NEAR(radial_laplacian(phi, p, 1.0), -2.0 * std::sin(1.0) / std::sinh(1.0), 1e-8);
}

TEST(VanVleck, Values) {
    EXPECT_EQ(van_vleck(DimensionParams(4), 0.0), 1.0);
    EXPECT_NEAR(van_vleck(DimensionParams(3), 1.0), std::pow(1.0 / std::sinh(1.0), 2), 1e-15);
    EXPECT_NEAR(van_vleck(DimensionParams(3), 1.0), 0.7240616, 1e-7);
    for (int n = 2; n <= 8; ++n) {
        double prev = van_vleck(DimensionParams(n), 0.1);
        for (double r = 0.2; r <= 10.0; r += 0.1) {
            double v = van_vleck(DimensionParams(n), r);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}
