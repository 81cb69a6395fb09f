#include "dnoband/config.hpp"

#include "dnoband/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dnoband {

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError(where + ": unknown field '" + k + "'");
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(field + ": must be finite");
    return v;
}

int get_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& field) {
    if (!j.is_boolean()) throw ConfigError(field + ": expected a boolean");
    return j.get<bool>();
}

// [k, a, phase] or {"k", "amplitude", "phase"}.
CosineTerm cosine_term(const json& t, const std::string& where) {
    CosineTerm c{};
    if (t.is_array()) {
        if (t.size() < 2 || t.size() > 3) throw ConfigError(where + ": expected [k, amplitude, phase]");
        c.k = get_int(t[0], where + "[0]");
        c.amplitude = get_number(t[1], where + "[1]");
        c.phase = t.size() == 3 ? get_number(t[2], where + "[2]") : 0.0;
    } else {
        only_keys(t, where, {"k", "amplitude", "phase"});
        if (!t.contains("k") || !t.contains("amplitude")) throw ConfigError(where + ": needs k and amplitude");
        c.k = get_int(t["k"], where + ".k");
        c.amplitude = get_number(t["amplitude"], where + ".amplitude");
        c.phase = t.contains("phase") ? get_number(t["phase"], where + ".phase") : 0.0;
    }
    return c;
}

BathymetryProfile parse_bathymetry(const json& j) {
    only_keys(j, "bathymetry", {"cosine_series", "fourier"});
    if (j.size() != 1) throw ConfigError("bathymetry: give exactly one of cosine_series, fourier");
    try {
        if (j.contains("cosine_series")) {
            const json& a = j["cosine_series"];
            if (!a.is_array()) throw ConfigError("bathymetry.cosine_series: expected an array");
            std::vector<CosineTerm> terms;
            for (std::size_t i = 0; i < a.size(); ++i)
                terms.push_back(cosine_term(a[i], "bathymetry.cosine_series[" + std::to_string(i) + "]"));
            return BathymetryProfile::from_cosine_series(terms);
        }
        const json& a = j["fourier"];
        if (!a.is_array()) throw ConfigError("bathymetry.fourier: expected an array");
        std::map<int, cplx> modes;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string w = "bathymetry.fourier[" + std::to_string(i) + "]";
            const json& t = a[i];
            int k = 0;
            double re = 0.0, im = 0.0;
            if (t.is_array()) {
                if (t.size() != 3) throw ConfigError(w + ": expected [k, re, im]");
                k = get_int(t[0], w + "[0]");
                re = get_number(t[1], w + "[1]");
                im = get_number(t[2], w + "[2]");
            } else {
                only_keys(t, w, {"k", "re", "im"});
                if (!t.contains("k")) throw ConfigError(w + ": needs k");
                k = get_int(t["k"], w + ".k");
                re = t.contains("re") ? get_number(t["re"], w + ".re") : 0.0;
                im = t.contains("im") ? get_number(t["im"], w + ".im") : 0.0;
            }
            if (!modes.emplace(k, cplx(re, im)).second) throw ConfigError(w + ": duplicate k");
        }
        return BathymetryProfile::from_fourier(modes);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bathymetry: ") + e.what());
    }
}

GapPair gap_pair(const json& j, const std::string& where) {
    GapPair g;
    if (j.is_number_integer()) {
        g.p = j.get<int>();
    } else {
        only_keys(j, where, {"p", "location"});
        if (!j.contains("p")) throw ConfigError(where + ": needs p");
        g.p = get_int(j["p"], where + ".p");
        if (j.contains("location")) {
            const double loc = get_number(j["location"], where + ".location");
            if (loc == 0.0)
                g.location = GapLocation::zero;
            else if (loc == 0.5)
                g.location = GapLocation::half;
            else
                throw ConfigError(where + ".location: must be 0 or 0.5");
        }
    }
    if (g.location == GapLocation::zero && g.p < 1) throw ConfigError(where + ".p: must be >= 1 at theta = 0");
    if (g.location == GapLocation::half && g.p < 0) throw ConfigError(where + ".p: must be >= 0 at theta = 1/2");
    return g;
}

} // namespace

ThetaGrid ExperimentConfig::theta_grid() const {
    return theta_kind == "chebyshev" ? ThetaGrid::chebyshev(theta_count) : ThetaGrid::uniform(theta_count);
}

ExperimentConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    only_keys(j, "config",
              {"schema_version", "bathymetry", "epsilon_list", "theta_grid", "grid", "n_bands", "gap_pairs",
               "predictors", "outputs", "thread_count", "gap_tolerance", "parabolic_refinement", "quasimode",
               "tolerances"});
    ExperimentConfig c;
    if (j.contains("schema_version") && get_int(j["schema_version"], "schema_version") != 1)
        throw ConfigError("schema_version: only version 1 is supported");
    if (!j.contains("bathymetry")) throw ConfigError("bathymetry: required field missing");
    c.profile = parse_bathymetry(j["bathymetry"]);

    if (!j.contains("epsilon_list")) throw ConfigError("epsilon_list: required field missing");
    const json& el = j["epsilon_list"];
    if (!el.is_array() || el.empty()) throw ConfigError("epsilon_list: expected a non-empty array");
    for (std::size_t i = 0; i < el.size(); ++i)
        c.epsilon_list.push_back(get_number(el[i], "epsilon_list[" + std::to_string(i) + "]"));

    if (j.contains("theta_grid")) {
        const json& t = j["theta_grid"];
        only_keys(t, "theta_grid", {"kind", "count"});
        if (t.contains("kind")) {
            if (!t["kind"].is_string()) throw ConfigError("theta_grid.kind: expected a string");
            c.theta_kind = t["kind"].get<std::string>();
            if (c.theta_kind != "uniform" && c.theta_kind != "chebyshev")
                throw ConfigError("theta_grid.kind: must be 'uniform' or 'chebyshev'");
        }
        if (t.contains("count")) c.theta_count = get_int(t["count"], "theta_grid.count");
        if (c.theta_count < 9) throw ConfigError("theta_grid.count: must be >= 9");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        only_keys(g, "grid", {"n_x", "n_z", "oversample"});
        if (g.contains("n_x")) c.grid.n_x = get_int(g["n_x"], "grid.n_x");
        if (g.contains("n_z")) c.grid.n_z = get_int(g["n_z"], "grid.n_z");
        if (g.contains("oversample")) c.grid.oversample = get_int(g["oversample"], "grid.oversample");
    }
    try {
        c.grid.validate_for(c.profile);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("n_bands")) c.n_bands = get_int(j["n_bands"], "n_bands");
    if (c.n_bands < 2 || c.n_bands > c.grid.n_x / 2 - 2)
        throw ConfigError("n_bands: must lie in [2, n_x/2 - 2 = " + std::to_string(c.grid.n_x / 2 - 2) + "]");

    if (j.contains("gap_pairs")) {
        const json& g = j["gap_pairs"];
        if (!g.is_array()) throw ConfigError("gap_pairs: expected an array");
        c.gap_pairs.clear();
        for (std::size_t i = 0; i < g.size(); ++i)
            c.gap_pairs.push_back(gap_pair(g[i], "gap_pairs[" + std::to_string(i) + "]"));
    }
    for (const auto& g : c.gap_pairs) {
        const int upper = (g.location == GapLocation::zero ? 2 * g.p - 1 : 2 * g.p) + 1;
        if (upper >= c.n_bands)
            throw ConfigError("gap_pairs: p = " + std::to_string(g.p) + " needs n_bands > " + std::to_string(upper));
    }
    if (j.contains("predictors")) {
        const json& p = j["predictors"];
        only_keys(p, "predictors", {"order1", "order2"});
        if (p.contains("order1")) c.order1 = get_bool(p["order1"], "predictors.order1");
        if (p.contains("order2")) c.order2 = get_bool(p["order2"], "predictors.order2");
    }
    if (j.contains("outputs")) {
        if (!j["outputs"].is_string()) throw ConfigError("outputs: expected a path string");
        c.outputs = j["outputs"].get<std::string>();
    }
    if (j.contains("thread_count")) c.thread_count = get_int(j["thread_count"], "thread_count");
    if (c.thread_count < 0) throw ConfigError("thread_count: must be >= 0");
    if (j.contains("gap_tolerance")) c.gap_tolerance = get_number(j["gap_tolerance"], "gap_tolerance");
    if (c.gap_tolerance < 0.0) throw ConfigError("gap_tolerance: must be >= 0");
    if (j.contains("parabolic_refinement"))
        c.parabolic_refinement = get_bool(j["parabolic_refinement"], "parabolic_refinement");
    if (j.contains("quasimode")) {
        const json& q = j["quasimode"];
        only_keys(q, "quasimode", {"p", "delta"});
        if (q.contains("p")) c.quasimode_p = get_int(q["p"], "quasimode.p");
        if (q.contains("delta")) c.quasimode_delta = get_number(q["delta"], "quasimode.delta");
        if (c.quasimode_p < 1) throw ConfigError("quasimode.p: must be >= 1");
        if (c.quasimode_delta < 0.0) throw ConfigError("quasimode.delta: must be >= 0");
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        only_keys(t, "tolerances",
                  {"flat_exactness", "kernel", "evenness", "positivity", "appendix", "hermiticity",
                   "residual_ratio_min", "residual_ratio_max"});
        auto set = [&](const char* k, double& dst) {
            if (t.contains(k)) dst = get_number(t[k], std::string("tolerances.") + k);
        };
        set("flat_exactness", c.tolerances.flat_exactness);
        set("kernel", c.tolerances.kernel);
        set("evenness", c.tolerances.evenness);
        set("positivity", c.tolerances.positivity);
        set("appendix", c.tolerances.appendix);
        set("hermiticity", c.tolerances.hermiticity);
        set("residual_ratio_min", c.tolerances.residual_ratio_min);
        set("residual_ratio_max", c.tolerances.residual_ratio_max);
    }
    // Physics check last so schema problems are reported first.
    for (double e : c.epsilon_list) check_domain(c.profile, e);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace dnoband
