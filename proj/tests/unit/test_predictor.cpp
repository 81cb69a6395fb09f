#include "dnoband/errors.hpp"
#include "dnoband/flat_spectrum.hpp"
#include "dnoband/predictor.hpp"

#include "oracle_values.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dnoband;

namespace {

BathymetryProfile cos2() { return BathymetryProfile::from_cosine_series({{2, 2.0, 0.0}}); }
BathymetryProfile two_mode() { return BathymetryProfile::from_cosine_series({{1, 2.0, 0.0}, {3, 2.0, 0.0}}); }
BathymetryProfile phased() {
    return BathymetryProfile::from_fourier({{1, std::polar(1.0, 0.3)}, {3, std::polar(1.0, -0.7)}});
}

} // namespace

TEST(Constants, F) {
    EXPECT_NEAR(F(1), oracle::F1, 1e-15);
    EXPECT_NEAR(F(2), oracle::F2, 1e-15);
    EXPECT_NEAR(F(20), oracle::F20, 1e-20);
    EXPECT_THROW(F(0), PreconditionError);
}

TEST(Constants, K) {
    EXPECT_NEAR(K(1), oracle::K1, 1e-14);
    EXPECT_NEAR(K(2), oracle::K2, 1e-14);
    // Diagnostic: K_p coincides with the flat band slope at theta = 0.
    for (int p = 1; p <= 6; ++p) EXPECT_NEAR(K(p), flat_band_slope(p), 1e-12);
}

TEST(Order1, CenterAndWidthAtZero) {
    const auto g = gap_edges_order1(1, 0.02, cos2(), GapLocation::zero);
    EXPECT_NEAR(g.center, oracle::tanh1, 1e-15);
    EXPECT_NEAR(2 * g.half_width, 0.02 * oracle::two_F2, 1e-15);
    EXPECT_NEAR(g.upper_edge - g.lower_edge, 2 * g.half_width, 1e-15);
    EXPECT_EQ(g.lower_band(), 1);
}

TEST(Order1, HalfPeriod) {
    const auto b = BathymetryProfile::from_cosine_series({{1, 2.0, 0.0}});
    const auto g = gap_edges_order1(0, 0.03, b, GapLocation::half);
    EXPECT_NEAR(2 * g.half_width, 0.03 * oracle::two_F1, 1e-15);
    EXPECT_NEAR(g.center, oracle::kappa_0_05, 1e-15);
    EXPECT_EQ(g.lower_band(), 0);
    EXPECT_EQ(g.location_theta(), 0.5);
}

TEST(Order1, ZeroWhenResonantModeAbsent) {
    EXPECT_EQ(gap_edges_order1(1, 0.05, two_mode(), GapLocation::zero).half_width, 0.0);
}

TEST(Order1, LinearInEpsilon) {
    const auto b = BathymetryProfile::from_cosine_series({{2, 1.3, 0.4}, {4, 0.7, 0.0}});
    for (int p : {1, 2}) {
        const auto a = gap_edges_order1(p, 0.01, b, GapLocation::zero);
        const auto c = gap_edges_order1(p, 0.03, b, GapLocation::zero);
        EXPECT_NEAR(c.half_width, 3 * a.half_width, 1e-15);
    }
}

TEST(MMatrix, HermitianWithExpectedEigenvalues) {
    const auto b = BathymetryProfile::from_cosine_series({{2, 1.3, 0.4}});
    for (double d : {0.0, 0.3, -1.2}) {
        const auto m = m_matrix(1, d, b);
        EXPECT_LE((m - m.adjoint()).norm(), 1e-15);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
        const auto [lo, hi] = lambda_prime(1, d, b);
        EXPECT_NEAR(es.eigenvalues()(0), lo, 1e-14);
        EXPECT_NEAR(es.eigenvalues()(1), hi, 1e-14);
        EXPECT_NEAR(hi, std::hypot(K(1) * d, F(2) * 0.65), 1e-14);
    }
}

TEST(Order2, Sums) {
    EXPECT_NEAR(j_sum(1, two_mode()), oracle::J1_two_mode, 1e-13);
    EXPECT_NEAR(std::abs(s_sum(1, two_mode()) - oracle::S1_two_mode), 0.0, 1e-13);
    EXPECT_NEAR(j_sum(2, two_mode()), oracle::J2_two_mode, 1e-13);
    EXPECT_NEAR(std::abs(s_sum(2, two_mode()) - oracle::S2_two_mode), 0.0, 1e-13);
    EXPECT_NEAR(j_sum(1, cos2()), oracle::J1_cos2, 1e-13);
    EXPECT_EQ(s_sum(1, cos2()), cplx(0.0));
}

TEST(Order2, PhasedProfile) {
    EXPECT_NEAR(j_sum(1, phased()), oracle::J1_phased, 1e-13);
    const auto s = s_sum(1, phased());
    EXPECT_NEAR(s.real(), oracle::S1_phased_re, 1e-13);
    EXPECT_NEAR(s.imag(), oracle::S1_phased_im, 1e-13);
}

TEST(Order2, GapEdges) {
    const auto g = gap_edges_order2(1, 0.05, two_mode());
    EXPECT_EQ(g.order, 2);
    EXPECT_NEAR(g.center, oracle::order2_center_eps005, 1e-14);
    EXPECT_NEAR(g.half_width, oracle::order2_half_eps005, 1e-15);
    EXPECT_FALSE(g.inconclusive);
    EXPECT_NEAR(2 * std::abs(s_sum(1, two_mode())), oracle::two_abs_S1, 1e-13);
}

TEST(Order2, RequiresVanishingResonantMode) {
    EXPECT_THROW(gap_edges_order2(1, 0.05, cos2()), PreconditionError);
}

TEST(Order2, InconclusiveWhenSVanishes) {
    const auto b = BathymetryProfile::from_cosine_series({{4, 2.0, 0.0}});
    const auto g = gap_edges_order2(1, 0.05, b);
    EXPECT_TRUE(g.inconclusive);
    EXPECT_EQ(g.half_width, 0.0);
}

TEST(Order2, JsWeightExcludesResonantModes) {
    EXPECT_THROW(js_weight(1, 1), PreconditionError);
    EXPECT_THROW(js_weight(-1, 1), PreconditionError);
    EXPECT_NO_THROW(js_weight(0, 1));
}

TEST(NMatrix, HermitianWithExpectedEigenvalues) {
    for (double d : {0.0, 0.4}) {
        const auto n = n_matrix(1, d, two_mode());
        EXPECT_LE((n - n.adjoint()).norm(), 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(n);
        const auto [lo, hi] = lambda_second(1, d, two_mode());
        EXPECT_NEAR(es.eigenvalues()(0), lo, 1e-13);
        EXPECT_NEAR(es.eigenvalues()(1), hi, 1e-13);
    }
}

TEST(PredictorProperty, ShiftInvariance) {
    // Translating b rotates the phases of bhat_k, leaving |S_p|, J_p and widths fixed.
    const auto a = BathymetryProfile::from_cosine_series({{1, 1.0, 0.0}, {3, 0.6, 0.0}, {2, 0.4, 0.0}});
    const double s = 0.83;
    const auto b = BathymetryProfile::from_cosine_series({{1, 1.0, s}, {3, 0.6, 3 * s}, {2, 0.4, 2 * s}});
    for (int p : {1, 2}) {
        EXPECT_NEAR(j_sum(p, a), j_sum(p, b), 1e-13);
        EXPECT_NEAR(std::abs(s_sum(p, a)), std::abs(s_sum(p, b)), 1e-13);
        EXPECT_NEAR(gap_edges_order1(p, 0.02, a, GapLocation::zero).half_width,
                    gap_edges_order1(p, 0.02, b, GapLocation::zero).half_width, 1e-15);
    }
}

TEST(PredictorProperty, QuadraticScaling) {
    const auto a = BathymetryProfile::from_cosine_series({{1, 1.0, 0.0}, {3, 0.6, 0.0}});
    const auto b = BathymetryProfile::from_cosine_series({{1, 2.0, 0.0}, {3, 1.2, 0.0}});
    EXPECT_NEAR(j_sum(1, b), 4 * j_sum(1, a), 1e-12);
    EXPECT_NEAR(std::abs(s_sum(1, b)), 4 * std::abs(s_sum(1, a)), 1e-12);
}
