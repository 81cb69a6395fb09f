#include "dnoband/experiments.hpp"

#include "dnoband/errors.hpp"
#include "dnoband/flat_spectrum.hpp"
#include "dnoband/parallel.hpp"
#include "dnoband/quasimode.hpp"
#include "dnoband/writers.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace dnoband {

namespace {

using ojson = nlohmann::ordered_json;

ojson complex_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

const char* branch_name(Branch b) { return b == Branch::plus ? "+" : "-"; }

} // namespace

double flat_exactness_error(const SpectralGrid& grid, double theta, int kmax) {
    if (2 * kmax + 1 > grid.n_x) throw GridTooSmall("flat_exactness_error: kmax exceeds the trace modes");
    const DnoSpectrum s = assemble_dno(BathymetryProfile(), 0.0, theta, grid);
    std::vector<double> expect;
    for (int k = -kmax; k <= kmax; ++k) expect.push_back(kappa(k, theta));
    std::sort(expect.begin(), expect.end());
    double err = 0.0;
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const double d = std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - expect[i]);
        err = std::max(err, expect[i] > 0.0 ? d / expect[i] : d);
    }
    return err;
}

double evenness_error(const BathymetryProfile& profile, double epsilon, double theta,
                      const SpectralGrid& grid, int count) {
    const DnoSpectrum a = assemble_dno(profile, epsilon, theta, grid);
    const DnoSpectrum b = assemble_dno(profile, epsilon, -theta, grid);
    return (a.eigenvalues.head(count) - b.eigenvalues.head(count)).cwiseAbs().maxCoeff();
}

double flat_band_deviation(const BandStructure& bands, int n_max) {
    if (n_max >= bands.n_bands()) throw PreconditionError("flat_band_deviation: n_max >= n_bands");
    const auto& th = bands.theta_grid.values();
    double d = 0.0;
    for (int n = 0; n <= n_max; ++n)
        for (std::size_t i = 0; i < th.size(); ++i)
            d = std::max(d, std::abs(bands.bands[n][i] - lambda0(n, th[i])));
    return d;
}

std::optional<GapPrediction> predict_gap(const ExperimentConfig& cfg, const GapPair& pair, double epsilon) {
    if (pair.location == GapLocation::half) {
        if (!cfg.order1) return std::nullopt;
        return gap_edges_order1(pair.p, epsilon, cfg.profile, GapLocation::half);
    }
    const bool first_order = cfg.profile.fourier_coefficient(2 * pair.p) != cplx(0.0);
    if (!first_order && cfg.order2) return gap_edges_order2(pair.p, epsilon, cfg.profile);
    if (cfg.order1) return gap_edges_order1(pair.p, epsilon, cfg.profile, GapLocation::zero);
    return std::nullopt;
}

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
    ojson j;
    j["schema_version"] = 1;
    j["all_passed"] = all_passed();
    j["checks"] = ojson::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"measured", c.measured},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    return j.dump(2) + "\n";
}

std::string band_file_stem(double epsilon) { return "bands_eps_" + format_number(epsilon); }

std::vector<std::filesystem::path> run_bands(const ExperimentConfig& cfg) {
    std::vector<std::filesystem::path> files;
    for (double eps : cfg.epsilon_list) {
        const BandStructure b =
            sweep(cfg.profile, eps, cfg.grid, cfg.theta_grid(), cfg.n_bands, {cfg.thread_count});
        const auto stem = cfg.outputs / band_file_stem(eps);
        auto csv = stem, svg = stem;
        csv += ".csv";
        svg += ".svg";
        write_file(csv, bands_csv(b));
        write_file(svg, bands_svg(b));
        files.push_back(csv);
        files.push_back(svg);
    }
    return files;
}

GapReportDocument run_gaps(const ExperimentConfig& cfg) {
    GapReportDocument doc;
    doc.profile = cfg.profile.digest();
    doc.gap_tolerance = cfg.gap_tolerance;
    const GapOptions opts{cfg.parabolic_refinement};
    for (double eps : cfg.epsilon_list) {
        const BandStructure b =
            sweep(cfg.profile, eps, cfg.grid, cfg.theta_grid(), cfg.n_bands, {cfg.thread_count});
        for (const auto& pair : cfg.gap_pairs) {
            GapReportEntry e;
            e.p = pair.p;
            e.location_theta = pair.location == GapLocation::zero ? 0.0 : 0.5;
            e.epsilon = eps;
            const int lower = pair.location == GapLocation::zero ? 2 * pair.p - 1 : 2 * pair.p;
            e.measured = detect_gap(b, lower, opts);
            e.predicted = predict_gap(cfg, pair, eps);
            if (e.predicted) {
                e.deviation = gap_deviation(e.measured, *e.predicted);
                e.pass = e.deviation->width_rel <= cfg.gap_tolerance;
            }
            doc.entries.push_back(e);
        }
    }
    write_file(cfg.outputs / "gap_report.json", to_json(doc));
    return doc;
}

std::string run_predict(const ExperimentConfig& cfg) {
    ojson j;
    j["schema_version"] = 1;
    j["profile"] = cfg.profile.digest();
    j["predictions"] = ojson::array();
    for (const auto& pair : cfg.gap_pairs) {
        ojson r;
        r["p"] = pair.p;
        r["location_theta"] = pair.location == GapLocation::zero ? 0.0 : 0.5;
        if (pair.location == GapLocation::zero) {
            r["F_2p"] = F(2 * pair.p);
            r["K_p"] = K(pair.p);
            r["flat_band_slope"] = flat_band_slope(pair.p);
            r["J_p"] = j_sum(pair.p, cfg.profile);
            r["S_p"] = complex_json(s_sum(pair.p, cfg.profile));
            const auto [lm, lp] = lambda_prime(pair.p, 0.0, cfg.profile);
            const auto [sm, sp] = lambda_second(pair.p, 0.0, cfg.profile);
            r["lambda_prime"] = {lm, lp};
            r["lambda_second"] = {sm, sp};
        } else {
            r["F_2p+1"] = F(2 * pair.p + 1);
        }
        r["by_epsilon"] = ojson::array();
        for (double eps : cfg.epsilon_list) {
            ojson e;
            e["epsilon"] = eps;
            const auto g = predict_gap(cfg, pair, eps);
            if (g)
                e["prediction"] = {{"order", g->order},           {"center", g->center},
                                   {"half_width", g->half_width}, {"lower_edge", g->lower_edge},
                                   {"upper_edge", g->upper_edge}, {"inconclusive", g->inconclusive}};
            else
                e["prediction"] = nullptr;
            r["by_epsilon"].push_back(e);
        }
        j["predictions"].push_back(r);
    }
    const std::string text = j.dump(2) + "\n";
    write_file(cfg.outputs / "predictions.json", text);
    return text;
}

std::string run_quasimode(const ExperimentConfig& cfg) {
    ojson j;
    j["schema_version"] = 1;
    j["profile"] = cfg.profile.digest();
    j["p"] = cfg.quasimode_p;
    j["delta"] = cfg.quasimode_delta;
    j["quasimodes"] = ojson::array();
    for (double eps : cfg.epsilon_list) {
        const DnoSpectrum s = assemble_dno(cfg.profile, eps, cfg.quasimode_delta * eps, cfg.grid);
        for (Branch br : {Branch::plus, Branch::minus}) {
            const Quasimode qm = build_quasimode(cfg.quasimode_p, cfg.quasimode_delta, eps, cfg.profile, br);
            ojson r;
            r["epsilon"] = eps;
            r["branch"] = branch_name(br);
            r["alpha"] = {complex_json(qm.alpha_plus), complex_json(qm.alpha_minus)};
            r["degenerate"] = qm.degenerate;
            r["lambda_app"] = qm.lambda_app;
            r["tau_app"] = qm.tau_app;
            ojson coeffs = ojson::array();
            for (const auto& c : qm.uprime)
                coeffs.push_back({{"k", c.k}, {"beta", complex_json(c.beta)}, {"gamma", complex_json(c.gamma)}});
            r["uprime"] = coeffs;
            try {
                const Certification c = certify_eigenvalue(qm, s);
                r["residual"] = c.residual;
                r["certified"] = true;
                r["band_index"] = c.index;
                r["matched_lambda"] = c.matched_lambda;
                r["error_bound"] = c.error_bound;
                r["informative"] = c.informative;
            } catch (const CertificationFailure& e) {
                r["certified"] = false;
                r["reason"] = e.what();
            }
            j["quasimodes"].push_back(r);
        }
    }
    const std::string text = j.dump(2) + "\n";
    write_file(cfg.outputs / "quasimodes.json", text);
    return text;
}

ValidationReport run_validate(const ExperimentConfig& cfg) {
    ValidationReport rep;
    const Tolerances& tol = cfg.tolerances;
    const SpectralGrid& g = cfg.grid;
    const double eps0 = *std::max_element(cfg.epsilon_list.begin(), cfg.epsilon_list.end());
    auto add = [&](std::string name, double measured, double tolerance, bool passed, std::string detail = {}) {
        rep.checks.push_back({std::move(name), passed, measured, tolerance, std::move(detail)});
    };

    const int kmax = std::min(8, g.n_x / 4);
    double flat = 0.0;
    for (double th : {0.0, 0.17, 0.25, 0.5}) flat = std::max(flat, flat_exactness_error(g, th, kmax));
    add("flat_exactness", flat, tol.flat_exactness, flat <= tol.flat_exactness,
        "relative, |k| <= " + std::to_string(kmax) + ", theta in {0, 0.17, 0.25, 0.5}");

    const DnoSpectrum s0 = assemble_dno(cfg.profile, eps0, 0.0, g);
    add("kernel_mode", std::abs(s0.eigenvalues(0)), tol.kernel, std::abs(s0.eigenvalues(0)) <= tol.kernel,
        "|lambda_0| at theta = 0, eps = " + format_number(eps0));

    const int trusted = g.n_x / 2 - 2;
    double even = 0.0;
    for (double th : {0.1, 0.3}) even = std::max(even, evenness_error(cfg.profile, eps0, th, g, trusted));
    add("evenness", even, tol.evenness, even <= tol.evenness,
        "lowest " + std::to_string(trusted) + " eigenvalues, theta in {0.1, 0.3}");

    const DnoSpectrum sh = assemble_dno(cfg.profile, eps0, 0.5, g);
    const double low = std::min(s0.eigenvalues(0), sh.eigenvalues(0));
    add("positivity", low, tol.positivity, low >= -tol.positivity, "min lambda_0 over theta in {0, 1/2}");

    const DnoSpectrum s1 = assemble_dno(cfg.profile, eps0, 0.1, g);
    add("hermiticity", s1.hermiticity_defect, tol.hermiticity, s1.hermiticity_defect <= tol.hermiticity,
        "relative defect of R before symmetrization, theta = 0.1");

    for (int p : {1, 2}) {
        const AppendixIntegrals ai = appendix_integrals(p, cfg.profile);
        add("appendix_integrals_p" + std::to_string(p), ai.max_error(), tol.appendix, ai.max_error() <= tol.appendix);
        const AppendixIdentities id = appendix_identities(p, cfg.profile);
        const double m = std::max(id.laplacian_residual, id.claim_residual);
        add("appendix_identities_p" + std::to_string(p), m, tol.appendix, m <= tol.appendix,
            "max of laplacian and integral identity residuals");
        const Quasimode qm = build_quasimode(p, 0.0, eps0, cfg.profile, Branch::plus);
        const double u = std::max(uprime_pde_residual(qm), uprime_bottom_bc_residual(qm));
        add("uprime_equations_p" + std::to_string(p), u, tol.appendix, u <= tol.appendix,
            "interior PDE and bottom boundary defects of U'");
    }

    double res[3];
    for (int i = 0; i < 3; ++i) {
        const double e = eps0 / (1 << i);
        res[i] = residual(build_quasimode(cfg.quasimode_p, cfg.quasimode_delta, e, cfg.profile, Branch::plus), g);
    }
    if (res[0] < 1e-12) {
        add("residual_scaling", res[0], 1e-12, true, "residual vanishes (flat profile)");
    } else {
        const double r1 = res[0] / res[1], r2 = res[1] / res[2];
        const bool ok = r1 >= tol.residual_ratio_min && r1 <= tol.residual_ratio_max &&
                        r2 >= tol.residual_ratio_min && r2 <= tol.residual_ratio_max;
        add("residual_scaling", std::min(r1, r2), tol.residual_ratio_min, ok,
            "ratios " + format_number(r1) + ", " + format_number(r2) + " over eps0, eps0/2, eps0/4; accepted [" +
                format_number(tol.residual_ratio_min) + ", " + format_number(tol.residual_ratio_max) + "]");
    }

    write_file(cfg.outputs / "validation.json", rep.to_json());
    return rep;
}

} // namespace dnoband
