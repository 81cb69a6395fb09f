#pragma once

#include "dnoband/bathymetry.hpp"
#include "dnoband/straightened_operator.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dnoband {

// Sorted theta samples in [0, 1/2] with both endpoints.
class ThetaGrid {
public:
    static ThetaGrid uniform(int count);
    // Chebyshev-Lobatto points, clustered at 0 and 1/2.
    static ThetaGrid chebyshev(int count);
    static ThetaGrid from_values(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    explicit ThetaGrid(std::vector<double> values);
    std::vector<double> values_;
};

struct BandStructure {
    ThetaGrid theta_grid = ThetaGrid::uniform(9);
    double epsilon = 0.0;
    // bands[n][i] = lambda_n(theta_i).
    std::vector<std::vector<double>> bands;
    std::string provenance;

    int n_bands() const { return static_cast<int>(bands.size()); }
};

struct SweepOptions {
    int threads = 1;
};

BandStructure sweep(const BathymetryProfile& profile, double epsilon, const SpectralGrid& grid,
                    const ThetaGrid& theta_grid, int n_bands, const SweepOptions& options = {});

struct GapRecord {
    int n_lower = 0;
    double lower_max = 0.0;
    double upper_min = 0.0;
    double width = 0.0;
    double center = 0.0;
    double argmax_theta = 0.0;
    double argmin_theta = 0.0;
    // Lipschitz bound on the grid-extremum bias: max |slope| * max spacing.
    double grid_bias_bound = 0.0;
};

struct GapOptions {
    // Fit a parabola through the extremal grid point and its neighbours.
    bool parabolic = false;
    // Widths at or below this are reported as 0 (touching bands).
    double touch_tolerance = 1e-10;
};

GapRecord detect_gap(const BandStructure& bands, int n_lower, const GapOptions& options = {});

// Union of band images [min_theta, max_theta]; intervals closer than
// merge_tolerance are coalesced.
std::vector<std::pair<double, double>> spectrum_union(const BandStructure& bands,
                                                      double merge_tolerance = 1e-10);

} // namespace dnoband
