#include "dnoband/quasimode.hpp"

#include "dnoband/errors.hpp"
#include "dnoband/flat_spectrum.hpp"
#include "dnoband/predictor.hpp"
#include "dnoband/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dnoband {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx I(0.0, 1.0);

// rho(z) = cosh(p(z+1)) / cosh p and its z-derivatives.
struct Rho {
    double r0, r1, r2, r3;
};

Rho rho(int p, double z) {
    const double c = std::cosh(p), a = p * (z + 1.0);
    const double r0 = std::cosh(a) / c, r1 = p * std::sinh(a) / c;
    return {r0, r1, p * p * r0, p * p * r1};
}

struct Bottom {
    double b, b1, b2;
};

Bottom bottom(const BathymetryProfile& profile, double x) {
    return {profile.evaluate(x), profile.derivative(x, 1), profile.derivative(x, 2)};
}

// Phi_q at theta = 0 with |q| = p: value and gradient.
struct PhiField {
    cplx v, dx, dz, dxx, dxz, dzz;
};

PhiField phi(int q, int p, double x, double z) {
    const Rho r = rho(p, z);
    const cplx e = std::polar(1.0, q * x);
    return {r.r0 * e, I * double(q) * r.r0 * e, r.r1 * e, -double(q * q) * r.r0 * e,
            I * double(q) * r.r1 * e, r.r2 * e};
}

// div(Q1 grad Phi_q) by the product rule, Q1 = [[-b, z b'], [z b', b]].
cplx div_q1_grad_phi(int q, int p, const Bottom& bt, double x, double z) {
    const PhiField f = phi(q, p, x, z);
    const double q11 = -bt.b, q11_x = -bt.b1;
    const double q12 = z * bt.b1, q12_x = z * bt.b2, q12_z = bt.b1;
    const double q22 = bt.b;
    const cplx d1 = q11_x * f.dx + q11 * f.dxx + q12_x * f.dz + q12 * f.dxz;
    const cplx d2 = q12_z * f.dx + q12 * f.dxz + q22 * f.dzz;
    return d1 + d2;
}

// E_q = -z rho'(z) b(x) e^{iqx}.
cplx e_value(int q, int p, const Bottom& bt, double x, double z) {
    return -z * rho(p, z).r1 * bt.b * std::polar(1.0, q * x);
}

cplx e_laplacian(int q, int p, const Bottom& bt, double x, double z) {
    const Rho r = rho(p, z);
    const cplx e = std::polar(1.0, q * x);
    const double dq = q;
    const cplx dxx = -z * r.r1 * (bt.b2 + 2.0 * I * dq * bt.b1 - dq * dq * bt.b) * e;
    const cplx dzz = -(2.0 * r.r2 + z * r.r3) * bt.b * e;
    return dxx + dzz;
}

cplx e_dz(int q, int p, const Bottom& bt, double x, double z) {
    const Rho r = rho(p, z);
    return -(r.r1 + z * r.r2) * bt.b * std::polar(1.0, q * x);
}

} // namespace

cplx Quasimode::u0(double x, double z) const {
    return alpha_plus * phi(p, p, x, z).v + alpha_minus * phi(-p, p, x, z).v;
}

cplx Quasimode::uprime_value(double x, double z) const {
    const Bottom bt = bottom(profile, x);
    cplx s = alpha_plus * e_value(p, p, bt, x, z) + alpha_minus * e_value(-p, p, bt, x, z);
    for (const auto& c : uprime) {
        const double a = c.k * (z + 1.0);
        s += (c.beta * std::cosh(a) + c.gamma * std::sinh(a)) * std::polar(1.0, c.k * x);
    }
    return s;
}

cplx Quasimode::uprime_pde_defect(double x, double z) const {
    const Bottom bt = bottom(profile, x);
    cplx lap = alpha_plus * e_laplacian(p, p, bt, x, z) + alpha_minus * e_laplacian(-p, p, bt, x, z);
    for (const auto& c : uprime) {
        const double k = c.k, a = k * (z + 1.0);
        const cplx v = c.beta * std::cosh(a) + c.gamma * std::sinh(a);
        const cplx vzz = k * k * (c.beta * std::cosh(a) + c.gamma * std::sinh(a));
        lap += (vzz - k * k * v) * std::polar(1.0, k * x);
    }
    const cplx src = alpha_plus * div_q1_grad_phi(p, p, bt, x, z) +
                     alpha_minus * div_q1_grad_phi(-p, p, bt, x, z);
    return -lap - src;
}

cplx Quasimode::uprime_bottom_defect(double x) const {
    const double z = -1.0;
    const Bottom bt = bottom(profile, x);
    cplx dz = alpha_plus * e_dz(p, p, bt, x, z) + alpha_minus * e_dz(-p, p, bt, x, z);
    for (const auto& c : uprime) dz += double(c.k) * c.gamma * std::polar(1.0, c.k * x);
    cplx flux(0.0);
    for (const auto& [q, a] : {std::pair{p, alpha_plus}, std::pair{-p, alpha_minus}}) {
        const PhiField f = phi(q, p, x, z);
        flux += a * (z * bt.b1 * f.dx + bt.b * f.dz);
    }
    return dz + flux;
}

Quasimode build_quasimode(int p, double delta, double epsilon, const BathymetryProfile& profile,
                          Branch branch) {
    if (p < 1) throw PreconditionError("build_quasimode: p must be >= 1");
    if (delta < 0.0) throw PreconditionError("build_quasimode: delta must be >= 0");
    Quasimode qm;
    qm.p = p;
    qm.delta = delta;
    qm.epsilon = epsilon;
    qm.branch = branch;
    qm.profile = profile;

    const Eigen::Matrix2cd m = m_matrix(p, delta, profile);
    if (m.isZero(0.0)) {
        qm.degenerate = true;
        qm.alpha_plus = branch == Branch::plus ? 1.0 : 0.0;
        qm.alpha_minus = branch == Branch::plus ? 0.0 : 1.0;
        qm.lambda_prime = 0.0;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
        const int col = branch == Branch::plus ? 1 : 0;
        Eigen::Vector2cd a = es.eigenvectors().col(col);
        // Fix the phase: alpha_+ real non-negative, else alpha_- real positive.
        const int ref = std::abs(a(0)) > 1e-14 ? 0 : 1;
        a *= std::conj(a(ref)) / std::abs(a(ref));
        a(ref) = cplx(a(ref).real(), 0.0);
        qm.alpha_plus = a(0);
        qm.alpha_minus = a(1);
        const auto [lm, lp] = lambda_prime(p, delta, profile);
        qm.lambda_prime = branch == Branch::plus ? lp : lm;
    }
    qm.lambda_app = lambda0(2 * p, 0.0) + epsilon * qm.lambda_prime;
    qm.tau_app = 1.0 / (1.0 + qm.lambda_app);

    const int kb = profile.max_mode();
    const double kp = kappa(p, 0.0);
    const double pref = p / std::cosh(p);
    for (int k = -p - kb; k <= p + kb; ++k) {
        if (k == 0 || k == p || k == -p) continue;
        if (std::abs(k - p) > kb && std::abs(k + p) > kb) continue;
        const cplx gamma = pref * (-qm.alpha_plus * profile.fourier_coefficient(k - p) +
                                   qm.alpha_minus * profile.fourier_coefficient(k + p));
        const double kk = kappa(k, 0.0);
        const cplx beta = (double(k) * k - kk * kp) / (k * (kp - kk)) * gamma;
        qm.uprime.push_back({k, beta, gamma});
    }
    return qm;
}

Eigen::VectorXcd surface_trace(const Quasimode& qm, const SpectralGrid& grid) {
    grid.validate();
    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(grid.n_x);
    auto put = [&](int k, cplx v) {
        if (v == cplx(0.0)) return;
        if (!grid.contains(k))
            throw GridTooSmall("surface_trace: mode " + std::to_string(k) + " outside n_x = " +
                               std::to_string(grid.n_x));
        xi(grid.index(k)) += v;
    };
    put(qm.p, qm.alpha_plus);
    put(-qm.p, qm.alpha_minus);
    for (const auto& c : qm.uprime)
        put(c.k, qm.epsilon * (c.beta * std::cosh(double(c.k)) + c.gamma * std::sinh(double(c.k))));
    return xi / xi.norm();
}

double residual(const Quasimode& qm, const SpectralGrid& grid) {
    const Eigen::VectorXcd xi = surface_trace(qm, grid);
    const StraightenedOperator op(qm.profile, qm.epsilon, qm.theta(), grid);
    return (op.apply(xi) - qm.tau_app * xi).norm();
}

Certification certify_eigenvalue(const Quasimode& qm, const DnoSpectrum& spectrum) {
    const Eigen::VectorXcd xi = surface_trace(qm, spectrum.grid);
    const double r = (spectrum.resolvent_matrix * xi - qm.tau_app * xi).norm();
    return certify_eigenvalue(qm, spectrum, r);
}

Certification certify_eigenvalue(const Quasimode& qm, const DnoSpectrum& spectrum, double residual) {
    if (std::abs(spectrum.epsilon - qm.epsilon) > 1e-15 || std::abs(spectrum.theta - qm.theta()) > 1e-15)
        throw PreconditionError("certify_eigenvalue: spectrum not computed at (delta*eps, eps)");
    const auto n = spectrum.tau.size();
    Eigen::Index best = 0;
    (spectrum.tau.array() - qm.tau_app).abs().minCoeff(&best);
    const double dist = std::abs(spectrum.tau(best) - qm.tau_app);
    if (dist > residual)
        throw CertificationFailure("no resolvent eigenvalue within residual " + std::to_string(residual) +
                                   " of tau_app = " + std::to_string(qm.tau_app) +
                                   " (nearest at distance " + std::to_string(dist) + ")");
    Certification c;
    c.index = static_cast<int>(best);
    c.matched_lambda = spectrum.eigenvalues(best);
    c.residual = residual;
    c.error_bound = residual / (spectrum.tau(best) * qm.tau_app);
    double gap = std::numeric_limits<double>::infinity();
    if (best > 0) gap = std::min(gap, std::abs(spectrum.tau(best - 1) - spectrum.tau(best)));
    if (best + 1 < n) gap = std::min(gap, std::abs(spectrum.tau(best + 1) - spectrum.tau(best)));
    c.tau_spacing = gap;
    c.informative = residual < 0.5 * gap;
    return c;
}

double uprime_pde_residual(const Quasimode& qm, int n_x, int n_z) {
    double m = 0.0;
    for (int i = 0; i < n_x; ++i)
        for (int j = 0; j < n_z; ++j) {
            const double x = two_pi * i / n_x, z = -(j + 1.0) / (n_z + 1.0);
            m = std::max(m, std::abs(qm.uprime_pde_defect(x, z)));
        }
    return m;
}

double uprime_bottom_bc_residual(const Quasimode& qm, int n_x) {
    if (n_x <= 2 * (qm.p + qm.profile.max_mode()))
        throw GridTooSmall("uprime_bottom_bc_residual: n_x too small for the defect's band limit");
    std::vector<cplx> r(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) r[i] = qm.uprime_bottom_defect(two_pi * i / n_x);
    if (qm.profile.fourier_coefficient(2 * qm.p) != cplx(0.0)) {
        Eigen::FFT<double> fft;
        std::vector<cplx> c;
        fft.fwd(c, r);
        c[static_cast<std::size_t>(qm.p)] = 0.0;
        c[static_cast<std::size_t>(n_x - qm.p)] = 0.0;
        fft.inv(r, c);
    }
    double m = 0.0;
    for (const auto& v : r) m = std::max(m, std::abs(v));
    return m;
}

double AppendixIntegrals::max_error() const {
    return std::max({std::abs(diag - closed_diag), std::abs(cross_pm - closed_pm),
                     std::abs(cross_mp - closed_mp)});
}

AppendixIntegrals appendix_integrals(int p, const BathymetryProfile& profile, const QuadratureSizes& sizes) {
    if (p < 1) throw PreconditionError("appendix_integrals: p must be >= 1");
    if (sizes.n_x <= profile.max_mode() + 2 * p)
        throw GridTooSmall("appendix_integrals: n_x must exceed max_mode + 2p");
    const GaussLegendre g = gauss_legendre(sizes.n_z, -1.0, 0.0);
    AppendixIntegrals r{};
    const double wx = two_pi / sizes.n_x;
    for (int i = 0; i < sizes.n_x; ++i) {
        const double x = two_pi * i / sizes.n_x;
        const Bottom bt = bottom(profile, x);
        for (std::size_t j = 0; j < g.nodes.size(); ++j) {
            const double z = g.nodes[j], w = wx * g.weights[j];
            const PhiField fp = phi(p, p, x, z), fm = phi(-p, p, x, z);
            // Q1 grad Phi_a.
            auto q1 = [&](const PhiField& f) {
                return std::pair{-bt.b * f.dx + z * bt.b1 * f.dz, z * bt.b1 * f.dx + bt.b * f.dz};
            };
            auto dot = [](const std::pair<cplx, cplx>& v, const PhiField& f) {
                return v.first * std::conj(f.dx) + v.second * std::conj(f.dz);
            };
            const auto vp = q1(fp), vm = q1(fm);
            r.diag += w * dot(vp, fp);
            r.cross_pm += w * dot(vp, fm);
            r.cross_mp += w * dot(vm, fp);
        }
    }
    const double c = p / std::cosh(p);
    const cplx b2p = profile.fourier_coefficient(2 * p);
    r.closed_diag = 0.0;
    r.closed_pm = two_pi * c * c * std::conj(b2p);
    r.closed_mp = two_pi * c * c * b2p;
    return r;
}

AppendixIdentities appendix_identities(int p, const BathymetryProfile& profile, const IdentitySampling& s) {
    if (p < 1) throw PreconditionError("appendix_identities: p must be >= 1");
    AppendixIdentities out;
    for (int i = 0; i < s.sample_x; ++i) {
        const double x = two_pi * i / s.sample_x;
        const Bottom bt = bottom(profile, x);
        for (int j = 0; j < s.sample_z; ++j) {
            const double z = -(j + 1.0) / (s.sample_z + 1.0);
            for (int q : {p, -p})
                out.laplacian_residual = std::max(
                    out.laplacian_residual,
                    std::abs(-e_laplacian(q, p, bt, x, z) - div_q1_grad_phi(q, p, bt, x, z)));
        }
    }

    const QuadratureSizes& qs = s.quadrature;
    if (qs.n_x <= 2 * profile.max_mode() + 2 * p)
        throw GridTooSmall("appendix_identities: n_x must exceed 2 max_mode + 2p");
    const GaussLegendre g = gauss_legendre(qs.n_z, -1.0, 0.0);
    const double wx = two_pi / qs.n_x;
    for (int q : {p, -p}) {
        for (int beta : {p, -p}) {
            cplx lhs(0.0), rhs(0.0);
            for (int i = 0; i < qs.n_x; ++i) {
                const double x = two_pi * i / qs.n_x;
                const Bottom bt = bottom(profile, x);
                for (std::size_t j = 0; j < g.nodes.size(); ++j) {
                    const double z = g.nodes[j], w = wx * g.weights[j];
                    lhs += w * e_laplacian(q, p, bt, x, z) * e_value(beta, p, bt, x, z);
                    // Q2 = diag(0, b^2 + (z b')^2); no conjugation in this identity.
                    const double q2 = q_series_term(profile, 2, x, z)(1, 1);
                    rhs += w * q2 * phi(q, p, x, z).dz * phi(beta, p, x, z).dz;
                }
            }
            out.claim_residual = std::max(out.claim_residual, std::abs(lhs + rhs));
        }
    }
    return out;
}

} // namespace dnoband
