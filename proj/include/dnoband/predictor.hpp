#pragma once

#include "dnoband/bathymetry.hpp"

#include <Eigen/Dense>

#include <utility>

namespace dnoband {

// F_p = (p/2)^2 / cosh^2(p/2).
double F(int p);
// K_p = p / cosh^2 p * (1 + sinh(2p) / (2p)).
double K(int p);
// d kappa_p / d theta at theta = 0; a diagnostic only, never used as an oracle for K.
double flat_band_slope(int p);

// Order-eps reduced matrix near theta = 0.
Eigen::Matrix2cd m_matrix(int p, double delta, const BathymetryProfile& profile);
// (-s, +s), s = sqrt(K_p^2 delta^2 + F_{2p}^2 |bhat_{2p}|^2).
std::pair<double, double> lambda_prime(int p, double delta, const BathymetryProfile& profile);

// Weight (k^2 - kappa_k kappa_p) / (kappa_p - kappa_k) at theta = 0, k not in {p, -p}.
double js_weight(int k, int p);
double j_sum(int p, const BathymetryProfile& profile);
cplx s_sum(int p, const BathymetryProfile& profile);

// Order-eps^2 reduced matrix.
Eigen::Matrix2cd n_matrix(int p, double delta, const BathymetryProfile& profile);
// J_p -+ sqrt(K_p^2 delta^2 + |S_p|^2).
std::pair<double, double> lambda_second(int p, double delta, const BathymetryProfile& profile);

enum class GapLocation { zero, half };

struct GapPrediction {
    int p = 0;
    int order = 1;
    GapLocation location = GapLocation::zero;
    double center = 0.0;
    double half_width = 0.0;
    double lower_edge = 0.0;
    double upper_edge = 0.0;
    // Order-2 only: S_p = 0, the formula predicts no opening at this order.
    bool inconclusive = false;

    double location_theta() const { return location == GapLocation::zero ? 0.0 : 0.5; }
    // Sorted band indices bounding this gap.
    int lower_band() const { return location == GapLocation::zero ? 2 * p - 1 : 2 * p; }
};

// Centre lambda_{2p}^0(location); half-width F_m |bhat_m| eps with m = 2p or 2p+1.
GapPrediction gap_edges_order1(int p, double epsilon, const BathymetryProfile& profile,
                               GapLocation location);
// Centre lambda_{2p}^0(0) + J_p eps^2, half-width |S_p| eps^2. Requires bhat_{2p} = 0.
GapPrediction gap_edges_order2(int p, double epsilon, const BathymetryProfile& profile);

} // namespace dnoband
