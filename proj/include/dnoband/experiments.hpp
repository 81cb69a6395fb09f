#pragma once

#include "dnoband/band_structure.hpp"
#include "dnoband/config.hpp"
#include "dnoband/report.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dnoband {

// --- measurements shared by `validate` and the acceptance suite ---

// Largest error of the eps = 0 spectrum against kappa_k(theta), |k| <= kmax:
// |lambda - kappa| / kappa, or |lambda| where kappa = 0.
double flat_exactness_error(const SpectralGrid& grid, double theta, int kmax);

// max_{n < count} |lambda_n(theta) - lambda_n(-theta)|.
double evenness_error(const BathymetryProfile& profile, double epsilon, double theta,
                      const SpectralGrid& grid, int count);

// max over n <= n_max and the theta grid of |lambda_n - lambda_n^0|.
double flat_band_deviation(const BandStructure& bands, int n_max);

// Dispatches to the order-1 or order-2 predictor as configured; empty when
// no enabled predictor applies.
std::optional<GapPrediction> predict_gap(const ExperimentConfig& cfg, const GapPair& pair, double epsilon);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
    std::string to_json() const;
};

// --- CLI subcommands; files go to cfg.outputs ---

std::string band_file_stem(double epsilon);
std::vector<std::filesystem::path> run_bands(const ExperimentConfig& cfg);
GapReportDocument run_gaps(const ExperimentConfig& cfg);
std::string run_predict(const ExperimentConfig& cfg);
std::string run_quasimode(const ExperimentConfig& cfg);
ValidationReport run_validate(const ExperimentConfig& cfg);

} // namespace dnoband
