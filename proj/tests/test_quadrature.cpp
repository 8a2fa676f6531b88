#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "tcentroid/centroid.hpp"
#include "tcentroid/errors.hpp"
#include "tcentroid/quadrature.hpp"

// Reference values: tests/oracles/freeze_values.py (40-digit quadrature).

namespace {

using namespace tcentroid;
using namespace tcentroid::quadrature;

constexpr GaussianParams kFigureParams{1.0, 2.0};
constexpr ExcludedInterval kFigureHole{-1.0, 4.0};

double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

TEST(ExteriorMass, ReferenceValues) {
    EXPECT_LT(rel_err(exterior_mass({0.0, 1.0}, {-1.0, 1.0}, 0.0).value,
                      0.31731050786291410283),
              1e-13);
    EXPECT_LT(rel_err(exterior_mass(kFigureParams, kFigureHole, 0.0).value,
                      0.22546245520031511742),
              1e-13);
    EXPECT_LT(rel_err(exterior_mass(kFigureParams, kFigureHole, 2.0).value,
                      0.33128767067416610356),
              1e-13);
    EXPECT_LT(rel_err(exterior_mass({0.0, 1.0}, {-0.1, 0.1}, 0.0).value,
                      0.92034432544594203707),
              1e-13);
}

TEST(ExteriorMass, NearlyVanishingSupport) {
    const IntegralEstimate m = exterior_mass({0.0, 1.0}, {-8.0, 8.0}, 0.0);
    EXPECT_LT(rel_err(m.value, 1.2441921148543568247e-15), 1e-9);
    EXPECT_LT(m.remainder_bound, QuadratureConfig{}.abs_tol);
}

TEST(ExteriorFirstMoment, ReferenceValues) {
    EXPECT_LT(rel_err(exterior_first_moment(kFigureParams, kFigureHole, 0.0).value,
                      0.0005561974938118730518),
              1e-10);
    EXPECT_LT(rel_err(exterior_first_moment(kFigureParams, kFigureHole, 2.0).value,
                      1.5900117325247211623),
              1e-12);
}

TEST(ExteriorFirstMoment, OddIntegrandVanishes) {
    const QuadratureConfig cfg;
    for (double a : {0.5, 1.0, 3.0}) {
        EXPECT_NEAR(exterior_first_moment({0.0, 1.0}, {-a, a}, 0.0, cfg).value, 0.0, cfg.abs_tol);
    }
}

TEST(CentroidQuadrature, FigureCentroids) {
    const CentroidResult base = centroid_quadrature(kFigureParams, kFigureHole, 0.0);
    const CentroidResult shifted = centroid_quadrature(kFigureParams, kFigureHole, 2.0);
    EXPECT_EQ(base.method, Method::quadrature);
    EXPECT_NEAR(base.value, 0.0025, 5e-4);
    EXPECT_NEAR(shifted.value, 4.7995, 5e-4);
    EXPECT_LT(rel_err(base.value, 0.0024669184646184749026), 1e-10);
    EXPECT_LT(rel_err(shifted.value, 4.7994896075941128582), 1e-12);
}

TEST(CentroidQuadrature, SymmetricHole) {
    EXPECT_NEAR(centroid_quadrature({0.0, 1.0}, {-1.0, 1.0}, 0.0).value, 0.0,
                QuadratureConfig{}.abs_tol);
}

TEST(CentroidQuadrature, AgreesWithClosedForm) {
    for (double l : {-3.0, -0.5, 1.0}) {
        for (double u : {1.5, 3.5}) {
            for (double h : {-2.0, 0.0, 1.3}) {
                const GaussianParams params{0.7, 1.9};
                const ExcludedInterval hole{l, u};
                const double closed = centroid_exterior(params, hole, h).value;
                const double oracle = centroid_quadrature(params, hole, h).value;
                EXPECT_LE(std::fabs(closed - oracle), 1e-9 * std::max(1.0, std::fabs(closed)));
            }
        }
    }
}

TEST(CentroidQuadrature, SmallSupportKeepsRelativeAccuracy) {
    const CentroidResult r = centroid_quadrature({0.0, 1.0}, {-3.0, 50.0}, 0.0);
    EXPECT_LT(rel_err(r.value, -3.2830986549304365069), 1e-11);
}

TEST(CentroidQuadrature, InsensitiveToCutoff) {
    const double ref = centroid_quadrature(kFigureParams, kFigureHole, 2.0).value;
    for (double c : {10.0, 12.0, 16.0}) {
        QuadratureConfig cfg;
        cfg.tail_cutoff_sigmas = c;
        EXPECT_LT(std::fabs(centroid_quadrature(kFigureParams, kFigureHole, 2.0, cfg).value - ref),
                  1e-12)
            << c;
    }
}

TEST(CentroidQuadrature, HalvingTolerancesStaysWithinErrorEstimate) {
    const QuadratureConfig loose{1e-8, 1e-8, 12.0, 60};
    const QuadratureConfig tight{5e-9, 5e-9, 12.0, 60};
    const IntegralEstimate a = exterior_first_moment(kFigureParams, kFigureHole, 2.0, loose);
    const IntegralEstimate b = exterior_first_moment(kFigureParams, kFigureHole, 2.0, tight);
    EXPECT_LE(std::fabs(a.value - b.value), a.error + a.remainder_bound + 1e-15);
}

TEST(CentroidQuadrature, DeclinesDeepTruncation) {
    EXPECT_THROW(centroid_quadrature({0.0, 1.0}, {-40.0, 40.0}, 0.0), DeepTruncationError);
}

TEST(CentroidQuadrature, FlagsIllConditioning) {
    const CentroidResult r = centroid_quadrature({0.0, 1.0}, {-8.0, 8.0}, 0.0);
    EXPECT_TRUE(r.has_warning(Warning::ill_conditioned));
    EXPECT_NEAR(r.value, 0.0, 1e-9);
}

TEST(QuadratureConfig, Validation) {
    EXPECT_THROW(validate(QuadratureConfig{0.0, 1e-12, 12.0, 60}), ParameterError);
    EXPECT_THROW(validate(QuadratureConfig{1e-13, -1.0, 12.0, 60}), ParameterError);
    EXPECT_THROW(validate(QuadratureConfig{1e-13, 1e-12, 7.5, 60}), ParameterError);
    EXPECT_THROW(validate(QuadratureConfig{1e-13, 1e-12, 12.0, -1}), ParameterError);
    EXPECT_NO_THROW(validate(QuadratureConfig{}));
}

TEST(QuadratureConfig, RemainderMustFitTolerance) {
    // f(8) * 9 is about 4e-14, far above 1e-20.
    const QuadratureConfig cfg{1e-20, 1e-12, 8.0, 60};
    EXPECT_THROW(exterior_mass({0.0, 1.0}, {-1.0, 1.0}, 0.0, cfg), ToleranceError);
}

TEST(QuadratureConfig, PropagatesInputErrors) {
    EXPECT_THROW(exterior_mass({0.0, 0.0}, {-1.0, 1.0}, 0.0), ParameterError);
    EXPECT_THROW(exterior_mass({0.0, 1.0}, {1.0, -1.0}, 0.0), IntervalError);
}

}  // namespace
