#include "dnoband/flat_spectrum.hpp"

#include "dnoband/errors.hpp"

#include <cmath>
#include <string>

namespace dnoband {

double reduce_theta(double theta) {
    double t = theta - std::round(theta);
    // round() maps +1/2 to 1, so -1/2 lands here; move it to +1/2.
    if (t <= -0.5) t += 1.0;
    return t;
}

double kappa(int p, double theta) {
    const double q = p + theta;
    return q * std::tanh(q);
}

int flat_label(int n, double theta) {
    if (n < 0) throw PreconditionError("flat_label: negative band index " + std::to_string(n));
    const double t = reduce_theta(theta);
    if (n == 0) return 0;
    const int p = (n + 1) / 2;
    const bool even = (n % 2 == 0);
    // theta >= 0: lambda_{2p} = kappa_p, lambda_{2p-1} = kappa_{-p}; swapped for theta < 0.
    if (t >= 0.0) return even ? p : -p;
    return even ? -p : p;
}

double lambda0(int n, double theta) {
    return kappa(flat_label(n, theta), reduce_theta(theta));
}

double tau0(int n, double theta) { return 1.0 / (1.0 + lambda0(n, theta)); }

FlatEigen flat_eigen(int n, double theta) {
    const double t = reduce_theta(theta);
    const int p = flat_label(n, t);
    return {p, t, kappa(p, t), n};
}

std::complex<double> flat_eigenfunction(int p, double theta, double x, double z) {
    if (z < -1.0 || z > 0.0)
        throw PreconditionError("flat_eigenfunction: z outside [-1, 0]");
    const double q = p + theta;
    // cosh(q(z+1))/cosh(q) written with exponentials to avoid overflow for large |q|.
    const double a = std::abs(q);
    const double ratio = (std::exp(a * z) + std::exp(-a * (z + 2.0))) / (1.0 + std::exp(-2.0 * a));
    return std::polar(ratio, p * x);
}

} // namespace dnoband
