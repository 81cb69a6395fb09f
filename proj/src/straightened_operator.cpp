#include "dnoband/straightened_operator.hpp"

#include "dnoband/errors.hpp"
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

// Vertical Galerkin matrices for T_j(2z+1), d/dz included.
struct VerticalMatrices {
    Eigen::MatrixXd z00, zd0, z0d, zdd, zzz;
};

VerticalMatrices vertical_matrices(int n_z) {
    const int nb = n_z + 1;
    const GaussLegendre g = gauss_legendre(n_z + 4, -1.0, 0.0);
    const int nq = static_cast<int>(g.nodes.size());
    Eigen::MatrixXd t(nb, nq), dt(nb, nq);
    for (int q = 0; q < nq; ++q) {
        const double s = 2.0 * g.nodes[q] + 1.0;
        double tm = 1.0, tc = s, dm = 0.0, dc = 1.0;
        t(0, q) = 1.0;
        dt(0, q) = 0.0;
        if (nb > 1) {
            t(1, q) = s;
            dt(1, q) = 2.0;
        }
        for (int j = 2; j < nb; ++j) {
            const double tn = 2.0 * s * tc - tm;
            const double dn = 2.0 * tc + 2.0 * s * dc - dm;
            tm = tc;
            tc = tn;
            dm = dc;
            dc = dn;
            t(j, q) = tn;
            dt(j, q) = 2.0 * dn;
        }
    }
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(g.weights.data(), nq);
    const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(g.nodes.data(), nq);
    VerticalMatrices v;
    v.z00 = t * w.asDiagonal() * t.transpose();
    v.zd0 = dt * (w.array() * z.array()).matrix().asDiagonal() * t.transpose();
    v.z0d = v.zd0.transpose();
    v.zdd = dt * w.asDiagonal() * dt.transpose();
    v.zzz = dt * (w.array() * z.array() * z.array()).matrix().asDiagonal() * dt.transpose();
    return v;
}

// Fourier coefficients c[d], |d| < n_x, of the x-only coefficient functions.
struct HorizontalCoefficients {
    std::vector<cplx> c11, c12, c22a, c22b;  // indexed by d + n_x - 1
    int offset = 0;
    cplx get(const std::vector<cplx>& c, int d) const { return c[static_cast<std::size_t>(d + offset)]; }
};

HorizontalCoefficients horizontal_coefficients(const BathymetryProfile& profile, double epsilon,
                                               const SpectralGrid& grid) {
    const int m = grid.oversample * grid.n_x;
    std::vector<double> f11(m), f12(m), f22a(m), f22b(m);
    for (int i = 0; i < m; ++i) {
        const double x = two_pi * i / m;
        const double b = profile.evaluate(x);
        const double bp = profile.derivative(x, 1);
        const double jac = 1.0 - epsilon * b;
        if (!(jac > 0.0))
            throw DomainError("straightened operator: 1 - eps b <= 0 at x = " + std::to_string(x));
        f11[i] = jac;
        f12[i] = epsilon * bp;
        f22a[i] = 1.0 / jac;
        f22b[i] = epsilon * epsilon * bp * bp / jac;
    }
    const bool even = profile.has_real_coefficients();
    Eigen::FFT<double> fft;
    HorizontalCoefficients h;
    h.offset = grid.n_x - 1;
    auto transform = [&](const std::vector<double>& f, std::vector<cplx>& c, bool odd_function) {
        std::vector<cplx> out;
        fft.fwd(out, f);
        c.assign(static_cast<std::size_t>(2 * grid.n_x - 1), cplx(0.0));
        for (int d = 0; d < grid.n_x; ++d) {
            cplx v = out[static_cast<std::size_t>(d)] / static_cast<double>(m);
            if (even) v = odd_function ? cplx(0.0, v.imag()) : cplx(v.real(), 0.0);
            // Exact conjugate symmetry keeps the stiffness matrix Hermitian.
            c[static_cast<std::size_t>(d + h.offset)] = v;
            c[static_cast<std::size_t>(-d + h.offset)] = std::conj(v);
        }
        c[static_cast<std::size_t>(h.offset)] = cplx(c[static_cast<std::size_t>(h.offset)].real(), 0.0);
    };
    transform(f11, h.c11, false);
    transform(f12, h.c12, true);
    transform(f22a, h.c22a, false);
    transform(f22b, h.c22b, false);
    return h;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
assemble(const BathymetryProfile& profile, double epsilon, double theta, const SpectralGrid& grid) {
    const HorizontalCoefficients h = horizontal_coefficients(profile, epsilon, grid);
    const VerticalMatrices v = vertical_matrices(grid.n_z);
    const int nb = grid.n_z + 1;
    const int n = grid.n_x * nb;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    const cplx I(0.0, 1.0);
    for (int ik = 0; ik < grid.n_x; ++ik) {
        const double kt = grid.mode(ik) + theta;
        for (int im = 0; im < grid.n_x; ++im) {
            const double mt = grid.mode(im) + theta;
            const int d = ik - im;
            const cplx c11 = h.get(h.c11, d), c12 = h.get(h.c12, d);
            const cplx c22a = h.get(h.c22a, d), c22b = h.get(h.c22b, d);
            const cplx a00 = mt * kt * c11;
            const cplx ad0 = I * mt * c12;
            const cplx a0d = -I * kt * c12;
            auto block = a.block(ik * nb, im * nb, nb, nb);
            for (int l = 0; l < nb; ++l) {
                for (int j = 0; j < nb; ++j) {
                    cplx e = a00 * v.z00(j, l) + ad0 * v.zd0(j, l) + a0d * v.z0d(j, l) +
                             c22a * v.zdd(j, l) + c22b * v.zzz(j, l);
                    if (ik == im) e += 1.0;
                    if constexpr (std::is_same_v<Scalar, double>) {
                        block(j, l) = e.real();
                    } else {
                        block(j, l) = e;
                    }
                }
            }
        }
    }
    return a;
}

template <typename Matrix>
double min_rayleigh(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace

void SpectralGrid::validate() const {
    if (n_x < 4 || n_x % 2 != 0)
        throw PreconditionError("grid: n_x must be even and >= 4, got " + std::to_string(n_x));
    if (n_z < 1) throw PreconditionError("grid: n_z must be >= 1, got " + std::to_string(n_z));
    if (oversample < 2)
        throw PreconditionError("grid: oversample must be >= 2, got " + std::to_string(oversample));
}

void SpectralGrid::validate_for(const BathymetryProfile& profile) const {
    validate();
    if (n_x < 2 * profile.max_mode() + 2)
        throw GridTooSmall("grid: n_x = " + std::to_string(n_x) + " below 2*max_mode+2 = " +
                           std::to_string(2 * profile.max_mode() + 2));
}

void check_domain(const BathymetryProfile& profile, double epsilon) {
    if (!std::isfinite(epsilon)) throw DomainError("epsilon must be finite");
    const double s = std::abs(epsilon) * profile.sup_norm();
    if (s >= 1.0)
        throw DomainError("domain degeneracy: eps*max|b| = " + std::to_string(s) + " >= 1");
}

Eigen::Matrix2d p_matrix(const BathymetryProfile& profile, double epsilon, double x, double z) {
    const double b = profile.evaluate(x);
    const double bp = profile.derivative(x, 1);
    const double jac = 1.0 - epsilon * b;
    if (!(jac > 0.0)) throw DomainError("p_matrix: 1 - eps b <= 0");
    Eigen::Matrix2d p;
    p(0, 0) = jac;
    p(0, 1) = p(1, 0) = z * epsilon * bp;
    p(1, 1) = (1.0 + epsilon * epsilon * z * z * bp * bp) / jac;
    return p;
}

Eigen::Matrix2d q_series_term(const BathymetryProfile& profile, int k, double x, double z) {
    if (k < 1) throw PreconditionError("q_series_term: order must be >= 1");
    const double b = profile.evaluate(x);
    const double zbp = z * profile.derivative(x, 1);
    Eigen::Matrix2d q = Eigen::Matrix2d::Zero();
    if (k == 1) {
        q << -b, zbp, zbp, b;
        return q;
    }
    // std::pow(0.0, 0) == 1 covers b = 0 at k = 2.
    q(1, 1) = std::pow(b, k) + zbp * zbp * std::pow(b, k - 2);
    return q;
}

TransformCoefficients build_coefficients(const BathymetryProfile& profile, double epsilon,
                                         const SpectralGrid& grid) {
    grid.validate();
    check_domain(profile, epsilon);
    const int m = grid.oversample * grid.n_x;
    const GaussLegendre g = gauss_legendre(grid.n_z + 4, -1.0, 0.0);
    const int nq = static_cast<int>(g.nodes.size());
    TransformCoefficients c;
    c.epsilon = epsilon;
    c.z = g.nodes;
    c.z_weights = g.weights;
    c.x.resize(static_cast<std::size_t>(m));
    c.jacobian.resize(static_cast<std::size_t>(m));
    c.p11.resize(m, nq);
    c.p12.resize(m, nq);
    c.p22.resize(m, nq);
    c.drift_x.resize(m, nq);
    c.drift_z.resize(m, nq);
    for (int i = 0; i < m; ++i) {
        const double x = two_pi * i / m;
        c.x[i] = x;
        const double b = profile.evaluate(x);
        const double bp = profile.derivative(x, 1);
        c.jacobian[i] = 1.0 - epsilon * b;
        for (int q = 0; q < nq; ++q) {
            const Eigen::Matrix2d p = p_matrix(profile, epsilon, x, g.nodes[q]);
            c.p11(i, q) = p(0, 0);
            c.p12(i, q) = p(0, 1);
            c.p22(i, q) = p(1, 1);
            c.drift_x(i, q) = -b;
            c.drift_z(i, q) = g.nodes[q] * bp;
        }
    }
    return c;
}

Eigen::MatrixXcd assemble_stiffness(const BathymetryProfile& profile, double epsilon, double theta,
                                    const SpectralGrid& grid, const AssemblyOptions& options) {
    grid.validate_for(profile);
    check_domain(profile, epsilon);
    if (profile.has_real_coefficients() && !options.force_complex)
        return assemble<double>(profile, epsilon, theta, grid).cast<cplx>();
    return assemble<cplx>(profile, epsilon, theta, grid);
}

struct StraightenedOperator::Impl {
    bool real = false;
    Eigen::LLT<Eigen::MatrixXd> llt_r;
    Eigen::LLT<Eigen::MatrixXcd> llt_c;
    int nb = 0;

    // Surface load E xi: T_j(1) = 1 for every j.
    template <typename Vec, typename In>
    Vec lift(const In& xi, int n_x) const {
        Vec f(n_x * nb);
        for (int k = 0; k < n_x; ++k) f.segment(k * nb, nb).setConstant(xi(k));
        return f;
    }
};

StraightenedOperator::StraightenedOperator(const BathymetryProfile& profile, double epsilon,
                                           double theta, const SpectralGrid& grid,
                                           const AssemblyOptions& options)
    : impl_(std::make_unique<Impl>()), grid_(grid), theta_(theta), epsilon_(epsilon) {
    grid.validate_for(profile);
    check_domain(profile, epsilon);
    impl_->nb = grid.n_z + 1;
    impl_->real = profile.has_real_coefficients() && !options.force_complex;
    const auto breakdown = [&](double mr) {
        return NumericalBreakdown("stiffness matrix not positive definite at theta = " +
                                      std::to_string(theta) + ", eps = " + std::to_string(epsilon) +
                                      "; min Rayleigh quotient " + std::to_string(mr),
                                  mr);
    };
    if (impl_->real) {
        Eigen::MatrixXd a = assemble<double>(profile, epsilon, theta, grid);
        impl_->llt_r.compute(a);
        if (impl_->llt_r.info() != Eigen::Success) throw breakdown(min_rayleigh(a));
    } else {
        Eigen::MatrixXcd a = assemble<cplx>(profile, epsilon, theta, grid);
        impl_->llt_c.compute(a);
        if (impl_->llt_c.info() != Eigen::Success) throw breakdown(min_rayleigh(a));
    }
}

StraightenedOperator::~StraightenedOperator() = default;
StraightenedOperator::StraightenedOperator(StraightenedOperator&&) noexcept = default;
StraightenedOperator& StraightenedOperator::operator=(StraightenedOperator&&) noexcept = default;

bool StraightenedOperator::uses_real_path() const { return impl_->real; }

Eigen::VectorXcd StraightenedOperator::apply(const Eigen::VectorXcd& xi) const {
    if (xi.size() != grid_.n_x)
        throw PreconditionError("apply_resolvent: xi has length " + std::to_string(xi.size()) +
                                ", expected n_x = " + std::to_string(grid_.n_x));
    const int nb = impl_->nb;
    Eigen::VectorXcd u(grid_.n_x * nb);
    if (impl_->real) {
        // A is real, so solve real and imaginary parts separately.
        Eigen::MatrixXd f(grid_.n_x * nb, 2);
        f.col(0) = impl_->lift<Eigen::VectorXd>(Eigen::VectorXd(xi.real()), grid_.n_x);
        f.col(1) = impl_->lift<Eigen::VectorXd>(Eigen::VectorXd(xi.imag()), grid_.n_x);
        const Eigen::MatrixXd s = impl_->llt_r.solve(f);
        u.real() = s.col(0);
        u.imag() = s.col(1);
    } else {
        u = impl_->llt_c.solve(impl_->lift<Eigen::VectorXcd>(xi, grid_.n_x));
    }
    Eigen::VectorXcd out(grid_.n_x);
    for (int k = 0; k < grid_.n_x; ++k) out(k) = u.segment(k * nb, nb).sum();
    return out;
}

Eigen::MatrixXcd StraightenedOperator::resolvent_matrix() const {
    const int nb = impl_->nb;
    const int n = grid_.n_x * nb;
    Eigen::MatrixXcd r(grid_.n_x, grid_.n_x);
    auto compress = [&](const auto& x) {
        for (int k = 0; k < grid_.n_x; ++k)
            for (int m = 0; m < grid_.n_x; ++m) r(k, m) = x.col(m).segment(k * nb, nb).sum();
    };
    if (impl_->real) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, grid_.n_x);
        for (int k = 0; k < grid_.n_x; ++k) e.block(k * nb, k, nb, 1).setOnes();
        const Eigen::MatrixXd x = impl_->llt_r.solve(e);
        compress(x);
    } else {
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, grid_.n_x);
        for (int k = 0; k < grid_.n_x; ++k) e.block(k * nb, k, nb, 1).setOnes();
        const Eigen::MatrixXcd x = impl_->llt_c.solve(e);
        compress(x);
    }
    return r;
}

DnoSpectrum assemble_dno(const BathymetryProfile& profile, double epsilon, double theta,
                         const SpectralGrid& grid, const AssemblyOptions& options) {
    const StraightenedOperator op(profile, epsilon, theta, grid, options);
    const Eigen::MatrixXcd r = op.resolvent_matrix();
    DnoSpectrum s;
    s.theta = theta;
    s.epsilon = epsilon;
    s.grid = grid;
    const double nrm = r.norm();
    s.hermiticity_defect = nrm > 0.0 ? (r - r.adjoint()).norm() / nrm : 0.0;
    s.resolvent_matrix = 0.5 * (r + r.adjoint());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.resolvent_matrix);
    if (es.info() != Eigen::Success) throw NumericalBreakdown("eigensolver did not converge", 0.0);
    const int n = grid.n_x;
    s.tau.resize(n);
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    // Eigen sorts tau ascending; lambda ascending is tau descending.
    for (int i = 0; i < n; ++i) {
        const int src = n - 1 - i;
        const double t = es.eigenvalues()(src);
        if (!(t > 0.0))
            throw NumericalBreakdown("resolvent eigenvalue tau = " + std::to_string(t) + " <= 0", t);
        s.tau(i) = t;
        s.eigenvalues(i) = 1.0 / t - 1.0;
        Eigen::VectorXcd v = es.eigenvectors().col(src);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        v *= std::conj(v(imax)) / std::abs(v(imax));
        v(imax) = cplx(v(imax).real(), 0.0);
        s.eigenvectors.col(i) = v;
    }
    return s;
}

Eigen::VectorXcd apply_resolvent(const BathymetryProfile& profile, double epsilon, double theta,
                                 const SpectralGrid& grid, const Eigen::VectorXcd& xi) {
    return StraightenedOperator(profile, epsilon, theta, grid).apply(xi);
}

} // namespace dnoband
