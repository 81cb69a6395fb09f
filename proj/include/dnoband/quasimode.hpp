#pragma once

#include "dnoband/bathymetry.hpp"
#include "dnoband/straightened_operator.hpp"

#include <vector>

namespace dnoband {

enum class Branch { plus, minus };

struct UprimeCoefficient {
    int k;
    cplx beta;
    cplx gamma;
};

// Order-eps quasimode near theta = 0 for the double point lambda_{2p}^0(0):
//   U = U0 + eps U',  U0 = a+ Phi_p + a- Phi_{-p},
//   U' = E + sum_k (beta_k cosh(k(z+1)) + gamma_k sinh(k(z+1))) e^{ikx},
//   E = -(p / cosh p) z sinh(p(z+1)) b(x) (a+ e^{ipx} + a- e^{-ipx}).
struct Quasimode {
    int p = 1;
    double delta = 0.0;
    double epsilon = 0.0;
    Branch branch = Branch::plus;
    cplx alpha_plus{1.0, 0.0};
    cplx alpha_minus{0.0, 0.0};
    std::vector<UprimeCoefficient> uprime;  // ascending k, k not in {0, +-p}
    double lambda_prime = 0.0;
    double lambda_app = 0.0;
    double tau_app = 1.0;
    // M_p vanished, so (alpha_+, alpha_-) is the canonical basis vector.
    bool degenerate = false;
    BathymetryProfile profile;

    double theta() const { return delta * epsilon; }

    // Closed-form evaluations on the strip S.
    cplx u0(double x, double z) const;
    cplx uprime_value(double x, double z) const;
    // -Laplace(U') - div(Q1 grad U0), both sides differentiated analytically.
    cplx uprime_pde_defect(double x, double z) const;
    // d_z U' + (Q1 grad U0) . e_z at z = -1.
    cplx uprime_bottom_defect(double x) const;
};

Quasimode build_quasimode(int p, double delta, double epsilon, const BathymetryProfile& profile,
                          Branch branch);

// Unit-norm trace-mode vector of U at z = 0.
Eigen::VectorXcd surface_trace(const Quasimode& qm, const SpectralGrid& grid);

// || (1 + G_{delta eps}[eps b])^{-1} xi - tau_app xi || for the unit trace xi.
double residual(const Quasimode& qm, const SpectralGrid& grid);

struct Certification {
    int index = -1;             // band index n of the matched eigenvalue
    double matched_lambda = 0.0;
    double error_bound = 0.0;   // residual / (tau_n tau_app)
    double residual = 0.0;
    double tau_spacing = 0.0;   // distance from tau_n to its nearest neighbour
    bool informative = false;   // residual < tau_spacing / 2
};

// Residual evaluated with the spectrum's own resolvent matrix.
Certification certify_eigenvalue(const Quasimode& qm, const DnoSpectrum& spectrum);
Certification certify_eigenvalue(const Quasimode& qm, const DnoSpectrum& spectrum, double residual);

// Maximum pointwise |U' PDE defect| on an interior n_x-by-n_z sample grid.
double uprime_pde_residual(const Quasimode& qm, int n_x = 33, int n_z = 17);
// Maximum bottom-boundary defect over n_x samples at z = -1. Modes +-p are
// projected out when bhat_{2p} != 0: with beta_{+-p} = gamma_{+-p} = 0 the
// boundary condition is not imposed there.
double uprime_bottom_bc_residual(const Quasimode& qm, int n_x = 64);

struct QuadratureSizes {
    int n_x = 64;  // trapezoid points in x
    int n_z = 32;  // Gauss-Legendre points in z
};

// int_S Q1 grad Phi_a . conj(grad Phi_c) dx dz at theta = 0.
struct AppendixIntegrals {
    cplx diag;       // (a, c) = (p, p)
    cplx cross_pm;   // (p, -p)
    cplx cross_mp;   // (-p, p)
    cplx closed_diag;
    cplx closed_pm;  // 2 pi (p / cosh p)^2 conj(bhat_{2p})
    cplx closed_mp;  // 2 pi (p / cosh p)^2 bhat_{2p}
    double max_error() const;
};

AppendixIntegrals appendix_integrals(int p, const BathymetryProfile& profile,
                                     const QuadratureSizes& sizes = {});

struct AppendixIdentities {
    // max |-Laplace(E_q) - div(Q1 grad Phi_q)|, q = +-p, on the sample grid.
    double laplacian_residual = 0.0;
    // max over q, beta of |int Laplace(E_q) E_{beta p} + int Q2 grad Phi_q . grad Phi_{beta p}|.
    double claim_residual = 0.0;
};

struct IdentitySampling {
    int sample_x = 33;
    int sample_z = 17;
    QuadratureSizes quadrature;
};

AppendixIdentities appendix_identities(int p, const BathymetryProfile& profile,
                                       const IdentitySampling& sampling = {});

} // namespace dnoband
