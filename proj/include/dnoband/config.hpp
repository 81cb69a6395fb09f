#pragma once

#include "dnoband/band_structure.hpp"
#include "dnoband/bathymetry.hpp"
#include "dnoband/predictor.hpp"
#include "dnoband/straightened_operator.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dnoband {

struct GapPair {
    int p = 1;
    GapLocation location = GapLocation::zero;
};

struct Tolerances {
    double flat_exactness = 1e-8;   // relative
    double kernel = 1e-8;
    double evenness = 1e-10;
    double positivity = 1e-8;
    double appendix = 1e-8;
    double hermiticity = 1e-12;
    double residual_ratio_min = 3.0;
    double residual_ratio_max = 5.0;
};

struct ExperimentConfig {
    BathymetryProfile profile;
    std::vector<double> epsilon_list;
    std::string theta_kind = "uniform";
    int theta_count = 65;
    SpectralGrid grid;
    int n_bands = 8;
    std::vector<GapPair> gap_pairs{GapPair{}};
    bool order1 = true;
    bool order2 = true;
    std::filesystem::path outputs = "out";
    int thread_count = 0;
    // Relative width deviation accepted by the gap report.
    double gap_tolerance = 0.2;
    bool parabolic_refinement = false;
    int quasimode_p = 1;
    double quasimode_delta = 0.0;
    Tolerances tolerances;

    ThetaGrid theta_grid() const;
};

// Strict parse: unknown keys, wrong types and out-of-range values raise
// ConfigError naming the field; eps * max|b| >= 1 raises DomainError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace dnoband
