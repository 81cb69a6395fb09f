#pragma once

#include "dnoband/band_structure.hpp"
#include "dnoband/predictor.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dnoband {

struct GapDeviation {
    double width_abs = 0.0;     // |measured width - predicted width|
    double width_rel = 0.0;     // width_abs / max(measured, predicted), 0 when both vanish
    double center_abs = 0.0;    // |measured center - predicted center|
};

struct GapReportEntry {
    int p = 1;
    double location_theta = 0.0;
    double epsilon = 0.0;
    GapRecord measured;
    std::optional<GapPrediction> predicted;
    std::optional<GapDeviation> deviation;
    std::optional<bool> pass;
};

struct GapReportDocument {
    static constexpr int schema_version = 1;
    std::string profile;
    double gap_tolerance = 0.2;
    std::vector<GapReportEntry> entries;

    bool all_passed() const;
};

GapDeviation gap_deviation(const GapRecord& measured, const GapPrediction& predicted);

std::string to_json(const GapReportDocument& doc);
// Rejects unknown fields and any schema_version other than 1.
GapReportDocument parse_gap_report(std::string_view text);

} // namespace dnoband
