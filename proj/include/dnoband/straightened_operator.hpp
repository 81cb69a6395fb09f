#pragma once

#include "dnoband/bathymetry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace dnoband {

// Trace modes k in {-n_x/2+1, ..., n_x/2}; vertical Chebyshev degree n_z;
// coefficient functions are sampled on oversample * n_x points in x.
struct SpectralGrid {
    int n_x = 64;
    int n_z = 32;
    int oversample = 4;

    void validate() const;
    void validate_for(const BathymetryProfile& profile) const;

    int size() const { return n_x; }
    int mode(int index) const { return index - n_x / 2 + 1; }
    int index(int k) const { return k + n_x / 2 - 1; }
    bool contains(int k) const { return k > -n_x / 2 && k <= n_x / 2; }
};

// Pointwise coefficients of the straightened problem on the oversampled
// tensor grid (x_i, z_q), z_q the Gauss-Legendre nodes on [-1, 0].
// P = I + Q with Q the full (all orders in eps) correction.
struct TransformCoefficients {
    double epsilon = 0.0;
    std::vector<double> x;
    std::vector<double> z;
    std::vector<double> z_weights;
    Eigen::MatrixXd p11, p12, p22;        // rows x_i, columns z_q
    Eigen::MatrixXd drift_x, drift_z;     // first-order drift (-b, z b')
    std::vector<double> jacobian;          // 1 - eps b(x_i)
};

TransformCoefficients build_coefficients(const BathymetryProfile& profile, double epsilon,
                                         const SpectralGrid& grid);

// Exact P(Sigma) at one point.
Eigen::Matrix2d p_matrix(const BathymetryProfile& profile, double epsilon, double x, double z);

// k-th Taylor coefficient in eps of P(Sigma): Q_1 = [[-b, zb'], [zb', b]],
// Q_k = diag(0, b^k + (zb')^2 b^{k-2}) for k >= 2.
Eigen::Matrix2d q_series_term(const BathymetryProfile& profile, int k, double x, double z);

struct AssemblyOptions {
    // Use complex arithmetic even when the profile admits the real path.
    bool force_complex = false;
};

// Galerkin stiffness matrix of the straightened sesquilinear form in the
// basis e^{ikx} T_j(2z+1); unknown (k, j) sits at index(k) * (n_z+1) + j.
Eigen::MatrixXcd assemble_stiffness(const BathymetryProfile& profile, double epsilon,
                                    double theta, const SpectralGrid& grid,
                                    const AssemblyOptions& options = {});

// Factorized straightened problem for one (theta, eps). Applies the
// resolvent (1 + G_theta[eps b])^{-1} to surface trace-mode vectors.
class StraightenedOperator {
public:
    StraightenedOperator(const BathymetryProfile& profile, double epsilon, double theta,
                         const SpectralGrid& grid, const AssemblyOptions& options = {});
    ~StraightenedOperator();
    StraightenedOperator(StraightenedOperator&&) noexcept;
    StraightenedOperator& operator=(StraightenedOperator&&) noexcept;

    Eigen::VectorXcd apply(const Eigen::VectorXcd& xi) const;
    // R = E^H A^{-1} E before symmetrization.
    Eigen::MatrixXcd resolvent_matrix() const;

    bool uses_real_path() const;
    const SpectralGrid& grid() const { return grid_; }
    double theta() const { return theta_; }
    double epsilon() const { return epsilon_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    SpectralGrid grid_;
    double theta_;
    double epsilon_;
};

struct DnoSpectrum {
    double theta = 0.0;
    double epsilon = 0.0;
    SpectralGrid grid;
    Eigen::MatrixXcd resolvent_matrix;   // symmetrized
    double hermiticity_defect = 0.0;     // ||R - R^H||_F / ||R||_F before symmetrization
    Eigen::VectorXd eigenvalues;         // lambda_n ascending
    Eigen::VectorXd tau;                 // 1 / (1 + lambda_n)
    Eigen::MatrixXcd eigenvectors;       // column n pairs with eigenvalues(n)
};

DnoSpectrum assemble_dno(const BathymetryProfile& profile, double epsilon, double theta,
                         const SpectralGrid& grid, const AssemblyOptions& options = {});

Eigen::VectorXcd apply_resolvent(const BathymetryProfile& profile, double epsilon, double theta,
                                 const SpectralGrid& grid, const Eigen::VectorXcd& xi);

// Throws DomainError unless |eps| * max|b| < 1.
void check_domain(const BathymetryProfile& profile, double epsilon);

} // namespace dnoband
