#include "dnoband/writers.hpp"

#include "dnoband/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dnoband {

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string bands_csv(const BandStructure& b) {
    std::string s = "theta";
    for (int n = 0; n < b.n_bands(); ++n) s += ",lambda_" + std::to_string(n);
    s += '\n';
    const auto& th = b.theta_grid.values();
    for (std::size_t i = 0; i < th.size(); ++i) {
        s += format_number(th[i]);
        for (const auto& row : b.bands) s += ',' + format_number(row[i]);
        s += '\n';
    }
    return s;
}

ParsedBands parse_bands_csv(std::string_view text) {
    ParsedBands out;
    std::size_t pos = 0, line_no = 0;
    std::size_t columns = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::size_t c = 0;
        while (true) {
            const std::size_t comma = line.find(',', c);
            cells.push_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
            if (comma == std::string_view::npos) break;
            c = comma + 1;
        }
        if (line_no == 1) {
            if (cells.empty() || cells[0] != "theta") throw Error("bands csv: header must start with 'theta'");
            columns = cells.size();
            out.bands.assign(columns - 1, {});
            continue;
        }
        if (cells.size() != columns) throw Error("bands csv: ragged row " + std::to_string(line_no));
        std::vector<double> vals(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto r = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), vals[i]);
            if (r.ec != std::errc() || r.ptr != cells[i].data() + cells[i].size())
                throw Error("bands csv: bad number on row " + std::to_string(line_no));
        }
        out.theta.push_back(vals[0]);
        for (std::size_t n = 1; n < vals.size(); ++n) out.bands[n - 1].push_back(vals[n]);
    }
    return out;
}

std::string bands_svg(const BandStructure& b) {
    constexpr double width = 640, height = 480, left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    double ymax = 0.0;
    for (const auto& row : b.bands) ymax = std::max(ymax, *std::max_element(row.begin(), row.end()));
    ymax = ymax > 0.0 ? 1.05 * ymax : 1.0;
    auto fx = [&](double t) { return left + pw * t / 0.5; };
    auto fy = [&](double l) { return top + ph * (1.0 - std::max(l, 0.0) / ymax); };
    auto f2 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f2(width) + "\" height=\"" +
         f2(height) + "\" viewBox=\"0 0 " + f2(width) + " " + f2(height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + f2(width) + "\" height=\"" + f2(height) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + f2(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">bands, eps = " + format_number(b.epsilon) + "</text>\n";
    s += "<g stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + f2(left) + "\" y1=\"" + f2(top + ph) + "\" x2=\"" + f2(left + pw) + "\" y2=\"" +
         f2(top + ph) + "\"/>\n";
    s += "<line x1=\"" + f2(left) + "\" y1=\"" + f2(top) + "\" x2=\"" + f2(left) + "\" y2=\"" + f2(top + ph) +
         "\"/>\n</g>\n";
    s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = 0.1 * i;
        s += "<text x=\"" + f2(fx(t)) + "\" y=\"" + f2(top + ph + 16) + "\" text-anchor=\"middle\">" + f2(t) +
             "</text>\n";
        const double l = ymax * i / 5.0;
        s += "<text x=\"" + f2(left - 6) + "\" y=\"" + f2(fy(l) + 4) + "\" text-anchor=\"end\">" + f2(l) +
             "</text>\n";
    }
    s += "<text x=\"" + f2(left + pw / 2) + "\" y=\"" + f2(height - 12) + "\" text-anchor=\"middle\">theta</text>\n";
    s += "<text x=\"18\" y=\"" + f2(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         f2(top + ph / 2) + ")\">lambda</text>\n</g>\n";
    const auto& th = b.theta_grid.values();
    for (std::size_t n = 0; n < b.bands.size(); ++n) {
        s += "<polyline fill=\"none\" stroke=\"" + std::string(palette[n % 8]) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < th.size(); ++i) {
            if (i) s += ' ';
            s += f2(fx(th[i])) + ',' + f2(fy(b.bands[n][i]));
        }
        s += "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace dnoband
