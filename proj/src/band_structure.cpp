#include "dnoband/band_structure.hpp"

#include "dnoband/errors.hpp"
#include "dnoband/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dnoband {

ThetaGrid::ThetaGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 9)
        throw PreconditionError("theta grid needs at least 9 points, got " + std::to_string(values_.size()));
    if (values_.front() != 0.0 || values_.back() != 0.5)
        throw PreconditionError("theta grid must start at 0 and end at 1/2");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i] > values_[i - 1]))
            throw PreconditionError("theta grid must be strictly increasing");
}

ThetaGrid ThetaGrid::uniform(int count) {
    if (count < 9) throw PreconditionError("theta grid needs at least 9 points, got " + std::to_string(count));
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[i] = 0.5 * i / (count - 1);
    v.back() = 0.5;
    return ThetaGrid(std::move(v));
}

ThetaGrid ThetaGrid::chebyshev(int count) {
    if (count < 9) throw PreconditionError("theta grid needs at least 9 points, got " + std::to_string(count));
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        v[i] = 0.25 * (1.0 - std::cos(std::numbers::pi * i / (count - 1)));
    v.front() = 0.0;
    v.back() = 0.5;
    return ThetaGrid(std::move(v));
}

ThetaGrid ThetaGrid::from_values(std::vector<double> values) { return ThetaGrid(std::move(values)); }

BandStructure sweep(const BathymetryProfile& profile, double epsilon, const SpectralGrid& grid,
                    const ThetaGrid& theta_grid, int n_bands, const SweepOptions& options) {
    grid.validate_for(profile);
    check_domain(profile, epsilon);
    if (n_bands < 1 || n_bands > grid.n_x / 2 - 2)
        throw PreconditionError("sweep: n_bands = " + std::to_string(n_bands) +
                                " outside [1, n_x/2 - 2 = " + std::to_string(grid.n_x / 2 - 2) + "]");
    const auto& th = theta_grid.values();
    std::vector<Eigen::VectorXd> columns(th.size());
    parallel_for(th.size(), options.threads, [&](std::size_t i) {
        try {
            columns[i] = assemble_dno(profile, epsilon, th[i], grid).eigenvalues.head(n_bands);
        } catch (...) {
            rethrow_with_context("theta = " + std::to_string(th[i]) + ", eps = " + std::to_string(epsilon));
        }
    });
    BandStructure b;
    b.theta_grid = theta_grid;
    b.epsilon = epsilon;
    b.bands.assign(static_cast<std::size_t>(n_bands), std::vector<double>(th.size()));
    for (std::size_t i = 0; i < th.size(); ++i)
        for (int n = 0; n < n_bands; ++n) b.bands[n][i] = columns[i](n);
    b.provenance = "profile=" + profile.digest() + ";n_x=" + std::to_string(grid.n_x) +
                   ";n_z=" + std::to_string(grid.n_z) + ";oversample=" + std::to_string(grid.oversample);
    return b;
}

namespace {

// Vertex of the parabola through three points, if it lies within them.
bool parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                     double& xv, double& yv) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double c2 = (d1 - d0) / (x2 - x0);
    if (c2 == 0.0) return false;
    const double c1 = d0 - c2 * (x0 + x1);
    xv = -c1 / (2.0 * c2);
    if (xv < x0 || xv > x2) return false;
    yv = y1 + d0 * (xv - x1) + c2 * (xv - x0) * (xv - x1);
    return true;
}

double max_slope(const std::vector<double>& th, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < th.size(); ++i)
        s = std::max(s, std::abs(y[i] - y[i - 1]) / (th[i] - th[i - 1]));
    return s;
}

} // namespace

GapRecord detect_gap(const BandStructure& bands, int n_lower, const GapOptions& options) {
    if (n_lower < 0 || n_lower + 1 >= bands.n_bands())
        throw PreconditionError("detect_gap: n_lower + 1 must be < n_bands");
    const auto& th = bands.theta_grid.values();
    const auto& lo = bands.bands[static_cast<std::size_t>(n_lower)];
    const auto& up = bands.bands[static_cast<std::size_t>(n_lower + 1)];
    const auto imax = static_cast<std::size_t>(std::max_element(lo.begin(), lo.end()) - lo.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(up.begin(), up.end()) - up.begin());
    GapRecord g;
    g.n_lower = n_lower;
    g.lower_max = lo[imax];
    g.argmax_theta = th[imax];
    g.upper_min = up[imin];
    g.argmin_theta = th[imin];
    if (options.parabolic) {
        double xv = 0.0, yv = 0.0;
        if (imax > 0 && imax + 1 < th.size() &&
            parabola_vertex(th[imax - 1], lo[imax - 1], th[imax], lo[imax], th[imax + 1], lo[imax + 1], xv, yv) &&
            yv > g.lower_max) {
            g.lower_max = yv;
            g.argmax_theta = xv;
        }
        if (imin > 0 && imin + 1 < th.size() &&
            parabola_vertex(th[imin - 1], up[imin - 1], th[imin], up[imin], th[imin + 1], up[imin + 1], xv, yv) &&
            yv < g.upper_min) {
            g.upper_min = yv;
            g.argmin_theta = xv;
        }
    }
    const double w = g.upper_min - g.lower_max;
    g.width = w > options.touch_tolerance ? w : 0.0;
    g.center = 0.5 * (g.lower_max + g.upper_min);
    double h = 0.0;
    for (std::size_t i = 1; i < th.size(); ++i) h = std::max(h, th[i] - th[i - 1]);
    g.grid_bias_bound = 0.5 * h * (max_slope(th, lo) + max_slope(th, up));
    return g;
}

std::vector<std::pair<double, double>> spectrum_union(const BandStructure& bands, double merge_tolerance) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& row : bands.bands) {
        const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
        iv.emplace_back(*mn, *mx);
    }
    std::sort(iv.begin(), iv.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& i : iv) {
        if (!out.empty() && i.first <= out.back().second + merge_tolerance)
            out.back().second = std::max(out.back().second, i.second);
        else
            out.push_back(i);
    }
    return out;
}

} // namespace dnoband
