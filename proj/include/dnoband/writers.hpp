#pragma once

#include "dnoband/band_structure.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dnoband {

// Shortest decimal form that round-trips to the same binary64 value.
std::string format_number(double v);

// Header "theta,lambda_0,...", one row per theta, LF line endings.
std::string bands_csv(const BandStructure& bands);

struct ParsedBands {
    std::vector<double> theta;
    std::vector<std::vector<double>> bands;  // bands[n][i]
};
ParsedBands parse_bands_csv(std::string_view text);

// Static SVG 1.1 chart of all bands over theta in [0, 1/2].
std::string bands_svg(const BandStructure& bands);

// Writes bytes verbatim, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

} // namespace dnoband
