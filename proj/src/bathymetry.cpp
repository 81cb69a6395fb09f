#include "dnoband/bathymetry.hpp"

#include "dnoband/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace dnoband {

namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

BathymetryProfile::BathymetryProfile(std::map<int, cplx> coeffs) : coeffs_(std::move(coeffs)) {
    for (const auto& [k, v] : coeffs_) {
        if (k == 0) throw DomainError("bathymetry: k = 0 coefficient violates zero mean");
        max_mode_ = std::max(max_mode_, std::abs(k));
    }
}

BathymetryProfile BathymetryProfile::from_cosine_series(const std::vector<CosineTerm>& terms) {
    std::map<int, cplx> c;
    std::set<int> seen;
    for (const auto& t : terms) {
        if (t.k == 0) throw DomainError("bathymetry: cosine term with k = 0 violates zero mean");
        if (t.k < 0) throw DomainError("bathymetry: cosine term needs k >= 1, got " + std::to_string(t.k));
        if (!seen.insert(t.k).second)
            throw DomainError("bathymetry: duplicate cosine term k = " + std::to_string(t.k));
        if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase))
            throw DomainError("bathymetry: non-finite cosine term");
        if (t.amplitude == 0.0) continue;
        const cplx v = 0.5 * t.amplitude * std::polar(1.0, -t.phase);
        c[t.k] = v;
        c[-t.k] = std::conj(v);
    }
    return BathymetryProfile(std::move(c));
}

BathymetryProfile BathymetryProfile::from_fourier(const std::map<int, cplx>& positive_modes) {
    std::map<int, cplx> c;
    for (const auto& [k, v] : positive_modes) {
        if (k == 0) throw DomainError("bathymetry: k = 0 coefficient violates zero mean");
        if (k < 0) throw DomainError("bathymetry: give positive modes only, got k = " + std::to_string(k));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("bathymetry: non-finite coefficient");
        if (v == cplx(0.0)) continue;
        c[k] = v;
        c[-k] = std::conj(v);
    }
    return BathymetryProfile(std::move(c));
}

BathymetryProfile BathymetryProfile::from_samples(std::span<const double> samples, double floor) {
    const auto m = static_cast<int>(samples.size());
    if (m < 4 || m % 2 != 0)
        throw DomainError("bathymetry: sample count must be even and >= 4, got " + std::to_string(m));
    for (double s : samples)
        if (!std::isfinite(s)) throw DomainError("bathymetry: non-finite sample");

    std::vector<double> in(samples.begin(), samples.end());
    std::vector<cplx> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    std::map<int, cplx> c;
    for (int k = 1; k <= m / 2 - 1; ++k) {
        const cplx v = out[static_cast<std::size_t>(k)] / static_cast<double>(m);
        if (std::abs(v) <= floor) continue;
        c[k] = v;
        c[-k] = std::conj(v);
    }
    return BathymetryProfile(std::move(c));
}

double BathymetryProfile::evaluate(double x) const { return derivative(x, 0); }

double BathymetryProfile::derivative(double x, int order) const {
    // Sum conjugate pairs so the result is real by construction.
    double s = 0.0;
    for (const auto& [k, v] : coeffs_) {
        if (k < 0) continue;
        const cplx ik(0.0, static_cast<double>(k));
        cplx term = v * std::polar(1.0, k * x);
        for (int d = 0; d < order; ++d) term *= ik;
        s += 2.0 * term.real();
    }
    return s;
}

cplx BathymetryProfile::fourier_coefficient(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? cplx(0.0) : it->second;
}

bool BathymetryProfile::has_real_coefficients() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const auto& kv) { return kv.second.imag() == 0.0; });
}

double BathymetryProfile::sup_norm() const {
    if (coeffs_.empty()) return 0.0;
    const int n = 256 * (max_mode_ + 1);
    double m = 0.0;
    for (int j = 0; j < n; ++j)
        m = std::max(m, std::abs(evaluate(2.0 * std::numbers::pi * j / n)));
    return m;
}

std::string BathymetryProfile::digest() const {
    std::string s;
    for (const auto& [k, v] : coeffs_) {
        if (k < 0) continue;
        if (!s.empty()) s += ';';
        // + 0.0 maps -0 to 0.
        s += std::to_string(k) + ':' + shortest(v.real() + 0.0) + ':' + shortest(v.imag() + 0.0);
    }
    return s.empty() ? "flat" : s;
}

} // namespace dnoband
