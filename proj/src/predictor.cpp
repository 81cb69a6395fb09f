#include "dnoband/predictor.hpp"

#include "dnoband/errors.hpp"
#include "dnoband/flat_spectrum.hpp"

#include <cmath>
#include <string>

namespace dnoband {

namespace {

void require_positive(int p, const char* what) {
    if (p < 1) throw PreconditionError(std::string(what) + ": p must be >= 1, got " + std::to_string(p));
}

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

// J_p and S_p share the weight and the summation range |k| <= p + K_b.
// Band-limitedness makes every term beyond the range vanish; the next ten
// terms on each side are checked to be exactly zero.
template <typename Term>
auto weighted_sum(int p, const BathymetryProfile& profile, Term term) {
    const int kmax = p + profile.max_mode();
    decltype(term(0)) acc{};
    for (int k = -kmax; k <= kmax; ++k) {
        if (k == 0 || k == p || k == -p) continue;
        const auto t = term(k);
        if (t != decltype(t){}) acc += js_weight(k, p) * t;
    }
    for (int k = kmax + 1; k <= kmax + 10; ++k)
        if (term(k) != decltype(term(k)){} || term(-k) != decltype(term(k)){})
            throw Error("J/S sum: nonzero term beyond |k| = p + K_b");
    return p * p * sech2(p) * acc;
}

} // namespace

double F(int p) {
    require_positive(p, "F");
    const double h = 0.5 * p;
    return h * h * sech2(h);
}

double K(int p) {
    require_positive(p, "K");
    return p * sech2(p) * (1.0 + std::sinh(2.0 * p) / (2.0 * p));
}

double flat_band_slope(int p) { return std::tanh(p) + p * sech2(p); }

Eigen::Matrix2cd m_matrix(int p, double delta, const BathymetryProfile& profile) {
    require_positive(p, "m_matrix");
    const cplx off = profile.fourier_coefficient(2 * p) * F(2 * p);
    Eigen::Matrix2cd m;
    m << K(p) * delta, off, std::conj(off), -K(p) * delta;
    return m;
}

std::pair<double, double> lambda_prime(int p, double delta, const BathymetryProfile& profile) {
    require_positive(p, "lambda_prime");
    const double s = std::hypot(K(p) * delta, F(2 * p) * std::abs(profile.fourier_coefficient(2 * p)));
    return {-s, s};
}

double js_weight(int k, int p) {
    const double kp = kappa(p, 0.0), kk = kappa(k, 0.0);
    // x tanh x is strictly increasing in |x|, so this only fails for k = +-p.
    if (kp == kk)
        throw PreconditionError("js_weight: k = " + std::to_string(k) + " is excluded for p = " + std::to_string(p));
    return (static_cast<double>(k) * k - kk * kp) / (kp - kk);
}

double j_sum(int p, const BathymetryProfile& profile) {
    require_positive(p, "j_sum");
    return weighted_sum(p, profile, [&](int k) { return std::norm(profile.fourier_coefficient(k - p)); });
}

cplx s_sum(int p, const BathymetryProfile& profile) {
    require_positive(p, "s_sum");
    return weighted_sum(p, profile, [&](int k) {
        return profile.fourier_coefficient(k + p) * std::conj(profile.fourier_coefficient(k - p));
    });
}

Eigen::Matrix2cd n_matrix(int p, double delta, const BathymetryProfile& profile) {
    require_positive(p, "n_matrix");
    const double j = j_sum(p, profile);
    const cplx s = s_sum(p, profile);
    Eigen::Matrix2cd n;
    n << K(p) * delta + j, -s, -std::conj(s), -K(p) * delta + j;
    return n;
}

std::pair<double, double> lambda_second(int p, double delta, const BathymetryProfile& profile) {
    require_positive(p, "lambda_second");
    const double j = j_sum(p, profile);
    const double r = std::hypot(K(p) * delta, std::abs(s_sum(p, profile)));
    return {j - r, j + r};
}

GapPrediction gap_edges_order1(int p, double epsilon, const BathymetryProfile& profile,
                               GapLocation location) {
    GapPrediction g;
    g.p = p;
    g.order = 1;
    g.location = location;
    int m = 0;
    if (location == GapLocation::zero) {
        require_positive(p, "gap_edges_order1");
        m = 2 * p;
    } else {
        if (p < 0) throw PreconditionError("gap_edges_order1: p must be >= 0 at theta = 1/2");
        m = 2 * p + 1;
    }
    g.center = lambda0(2 * p, g.location_theta());
    g.half_width = F(m) * std::abs(profile.fourier_coefficient(m)) * std::abs(epsilon);
    g.lower_edge = g.center - g.half_width;
    g.upper_edge = g.center + g.half_width;
    return g;
}

GapPrediction gap_edges_order2(int p, double epsilon, const BathymetryProfile& profile) {
    require_positive(p, "gap_edges_order2");
    if (profile.fourier_coefficient(2 * p) != cplx(0.0))
        throw PreconditionError("gap_edges_order2: bhat_" + std::to_string(2 * p) +
                                " != 0, the order-1 predictor applies");
    GapPrediction g;
    g.p = p;
    g.order = 2;
    g.location = GapLocation::zero;
    const double e2 = epsilon * epsilon;
    const cplx s = s_sum(p, profile);
    g.center = lambda0(2 * p, 0.0) + j_sum(p, profile) * e2;
    g.half_width = std::abs(s) * e2;
    g.inconclusive = (s == cplx(0.0));
    g.lower_edge = g.center - g.half_width;
    g.upper_edge = g.center + g.half_width;
    return g;
}

} // namespace dnoband
