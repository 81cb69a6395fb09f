#pragma once

#include <complex>

namespace dnoband {

// Flat-bottom (eps = 0) spectrum of the Bloch fibre at quasi-momentum theta.

// Reduce theta to (-1/2, 1/2].
double reduce_theta(double theta);

// kappa_p(theta) = (p + theta) tanh(p + theta).
double kappa(int p, double theta);

// Fourier label p of the n-th flat band after reordering by size.
int flat_label(int n, double theta);

// lambda_n^0(theta) = kappa_{flat_label(n, theta)}(theta).
double lambda0(int n, double theta);

// tau_n^0 = 1 / (1 + lambda_n^0).
double tau0(int n, double theta);

struct FlatEigen {
    int p;
    double theta;
    double value;
    int band_index;
};

FlatEigen flat_eigen(int n, double theta);

// Phi_p = e^{ipx} cosh((p+theta)(z+1)) / cosh(p+theta), z in [-1, 0].
std::complex<double> flat_eigenfunction(int p, double theta, double x, double z);

} // namespace dnoband
