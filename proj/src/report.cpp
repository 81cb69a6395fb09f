#include "dnoband/report.hpp"

#include "dnoband/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace dnoband {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("gap report: " + where + " is not an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError("gap report: unknown field '" + k + "' in " + where);
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError("gap report: missing field '" + std::string(key) + "' in " + where);
    return j.at(key);
}

double num(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_number()) throw ConfigError("gap report: field '" + std::string(key) + "' is not a number");
    return v.get<double>();
}

} // namespace

bool GapReportDocument::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass.value_or(true); });
}

GapDeviation gap_deviation(const GapRecord& m, const GapPrediction& p) {
    GapDeviation d;
    const double pw = 2.0 * p.half_width;
    d.width_abs = std::abs(m.width - pw);
    const double scale = std::max(m.width, pw);
    d.width_rel = scale > 0.0 ? d.width_abs / scale : 0.0;
    d.center_abs = std::abs(m.center - p.center);
    return d;
}

std::string to_json(const GapReportDocument& doc) {
    ojson j;
    j["schema_version"] = GapReportDocument::schema_version;
    j["profile"] = doc.profile;
    j["gap_tolerance"] = doc.gap_tolerance;
    j["entries"] = ojson::array();
    for (const auto& e : doc.entries) {
        ojson r;
        r["p"] = e.p;
        r["location_theta"] = e.location_theta;
        r["epsilon"] = e.epsilon;
        r["measured"] = {{"lower_max", e.measured.lower_max},   {"upper_min", e.measured.upper_min},
                         {"width", e.measured.width},           {"center", e.measured.center},
                         {"argmax_theta", e.measured.argmax_theta}, {"argmin_theta", e.measured.argmin_theta},
                         {"grid_bias_bound", e.measured.grid_bias_bound}};
        if (e.predicted) {
            const auto& p = *e.predicted;
            r["predicted"] = {{"order", p.order},           {"center", p.center},
                              {"half_width", p.half_width}, {"lower_edge", p.lower_edge},
                              {"upper_edge", p.upper_edge}, {"inconclusive", p.inconclusive}};
        } else {
            r["predicted"] = nullptr;
        }
        if (e.deviation)
            r["deviation"] = {{"width_abs", e.deviation->width_abs},
                              {"width_rel", e.deviation->width_rel},
                              {"center_abs", e.deviation->center_abs}};
        else
            r["deviation"] = nullptr;
        r["pass"] = e.pass ? ojson(*e.pass) : ojson(nullptr);
        j["entries"].push_back(r);
    }
    return j.dump(2) + "\n";
}

GapReportDocument parse_gap_report(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("gap report: malformed JSON at byte " + std::to_string(e.byte));
    }
    only_keys(j, "document", {"schema_version", "profile", "gap_tolerance", "entries"});
    const json& v = need(j, "schema_version", "document");
    if (!v.is_number_integer() || v.get<int>() != GapReportDocument::schema_version)
        throw ConfigError("gap report: unsupported schema_version");
    GapReportDocument doc;
    const json& prof = need(j, "profile", "document");
    if (!prof.is_string()) throw ConfigError("gap report: profile is not a string");
    doc.profile = prof.get<std::string>();
    doc.gap_tolerance = num(j, "gap_tolerance", "document");
    const json& es = need(j, "entries", "document");
    if (!es.is_array()) throw ConfigError("gap report: entries is not an array");
    for (const auto& r : es) {
        only_keys(r, "entry", {"p", "location_theta", "epsilon", "measured", "predicted", "deviation", "pass"});
        GapReportEntry e;
        const json& p = need(r, "p", "entry");
        if (!p.is_number_integer()) throw ConfigError("gap report: p is not an integer");
        e.p = p.get<int>();
        e.location_theta = num(r, "location_theta", "entry");
        e.epsilon = num(r, "epsilon", "entry");
        const json& m = need(r, "measured", "entry");
        only_keys(m, "measured",
                  {"lower_max", "upper_min", "width", "center", "argmax_theta", "argmin_theta", "grid_bias_bound"});
        e.measured.lower_max = num(m, "lower_max", "measured");
        e.measured.upper_min = num(m, "upper_min", "measured");
        e.measured.width = num(m, "width", "measured");
        e.measured.center = num(m, "center", "measured");
        e.measured.argmax_theta = num(m, "argmax_theta", "measured");
        e.measured.argmin_theta = num(m, "argmin_theta", "measured");
        e.measured.grid_bias_bound = num(m, "grid_bias_bound", "measured");
        const json& pr = need(r, "predicted", "entry");
        if (!pr.is_null()) {
            only_keys(pr, "predicted", {"order", "center", "half_width", "lower_edge", "upper_edge", "inconclusive"});
            GapPrediction g;
            g.p = e.p;
            g.location = e.location_theta == 0.0 ? GapLocation::zero : GapLocation::half;
            const json& o = need(pr, "order", "predicted");
            if (!o.is_number_integer()) throw ConfigError("gap report: order is not an integer");
            g.order = o.get<int>();
            g.center = num(pr, "center", "predicted");
            g.half_width = num(pr, "half_width", "predicted");
            g.lower_edge = num(pr, "lower_edge", "predicted");
            g.upper_edge = num(pr, "upper_edge", "predicted");
            const json& inc = need(pr, "inconclusive", "predicted");
            if (!inc.is_boolean()) throw ConfigError("gap report: inconclusive is not a boolean");
            g.inconclusive = inc.get<bool>();
            e.predicted = g;
        }
        const json& dv = need(r, "deviation", "entry");
        if (!dv.is_null()) {
            only_keys(dv, "deviation", {"width_abs", "width_rel", "center_abs"});
            e.deviation = GapDeviation{num(dv, "width_abs", "deviation"), num(dv, "width_rel", "deviation"),
                                       num(dv, "center_abs", "deviation")};
        }
        const json& ps = need(r, "pass", "entry");
        if (!ps.is_null()) {
            if (!ps.is_boolean()) throw ConfigError("gap report: pass is not a boolean");
            e.pass = ps.get<bool>();
        }
        doc.entries.push_back(e);
    }
    return doc;
}

} // namespace dnoband
