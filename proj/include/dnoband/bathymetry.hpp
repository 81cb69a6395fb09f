#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dnoband {

using cplx = std::complex<double>;

struct CosineTerm {
    int k;
    double amplitude;
    double phase = 0.0;
};

// Band-limited, real, zero-mean 2*pi-periodic bottom variation
//   b(x) = sum_k bhat_k e^{ikx}.
// Immutable after construction.
class BathymetryProfile {
public:
    BathymetryProfile() = default;

    // bhat_{+-k} = (a_k / 2) e^{-+i phi_k}, i.e. b(x) = sum a_k cos(k x - phi_k).
    static BathymetryProfile from_cosine_series(const std::vector<CosineTerm>& terms);

    // Coefficients for positive k only; negative modes are filled by conjugation.
    static BathymetryProfile from_fourier(const std::map<int, cplx>& positive_modes);

    // DFT of uniform samples x_j = 2*pi*j/M. The mean is removed and modes
    // with |bhat_k| <= floor are dropped.
    static BathymetryProfile from_samples(std::span<const double> samples,
                                          double floor = 1e-14);

    double evaluate(double x) const;
    // d^order b / dx^order.
    double derivative(double x, int order) const;
    cplx fourier_coefficient(int k) const;

    const std::map<int, cplx>& coeffs() const { return coeffs_; }
    int max_mode() const { return max_mode_; }
    bool is_flat() const { return coeffs_.empty(); }
    // True when every bhat_k is real (b even), which makes the straightened
    // stiffness matrix real symmetric.
    bool has_real_coefficients() const;
    // max|b| sampled on a grid fine enough for the band limit.
    double sup_norm() const;
    // Canonical text form "k:re:im;..." over k > 0, used as a provenance digest.
    std::string digest() const;

private:
    explicit BathymetryProfile(std::map<int, cplx> coeffs);

    std::map<int, cplx> coeffs_;
    int max_mode_ = 0;
};

} // namespace dnoband
