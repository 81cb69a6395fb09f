// dnoband: band structure, gap and quasimode experiments for the Bloch fibres
// of the Dirichlet-Neumann operator over a periodic bottom.
//
// Exit codes: 0 success, 1 validation or gap-tolerance failure,
//             2 configuration error, 3 runtime or I/O error.

#include "dnoband/errors.hpp"
#include "dnoband/experiments.hpp"
#include "dnoband/writers.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Band-structure solver and gap predictors for water waves over a periodic bottom"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides config 'outputs')");
        sub->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")
            ->check(CLI::NonNegativeNumber);
    };
    CLI::App* bands = app.add_subcommand("bands", "band table CSV and SVG chart per epsilon");
    CLI::App* gaps = app.add_subcommand("gaps", "measured vs predicted gaps (gap_report.json)");
    CLI::App* predict = app.add_subcommand("predict", "closed-form predictor values (predictions.json)");
    CLI::App* quasimode = app.add_subcommand("quasimode", "quasimode residuals and certification (quasimodes.json)");
    CLI::App* validate = app.add_subcommand("validate", "invariant checks (validation.json)");
    for (auto* s : {bands, gaps, predict, quasimode, validate}) add_common(s);

    CLI11_PARSE(app, argc, argv);

    dnoband::ExperimentConfig cfg;
    try {
        cfg = dnoband::load_config(config_path);
    } catch (const dnoband::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const dnoband::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty()) cfg.outputs = out_dir;
    if (threads >= 0) cfg.thread_count = threads;

    try {
        if (bands->parsed()) {
            for (const auto& f : dnoband::run_bands(cfg)) std::cout << f.string() << "\n";
        } else if (gaps->parsed()) {
            const auto doc = dnoband::run_gaps(cfg);
            for (const auto& e : doc.entries) {
                std::cout << "p=" << e.p << " theta=" << dnoband::format_number(e.location_theta)
                          << " eps=" << dnoband::format_number(e.epsilon)
                          << " width=" << dnoband::format_number(e.measured.width);
                if (e.predicted)
                    std::cout << " predicted=" << dnoband::format_number(2.0 * e.predicted->half_width)
                              << " order=" << e.predicted->order << (e.pass.value_or(true) ? " ok" : " FAIL");
                std::cout << "\n";
            }
            return doc.all_passed() ? 0 : 1;
        } else if (predict->parsed()) {
            std::cout << dnoband::run_predict(cfg);
        } else if (quasimode->parsed()) {
            std::cout << dnoband::run_quasimode(cfg);
        } else if (validate->parsed()) {
            const auto rep = dnoband::run_validate(cfg);
            for (const auto& c : rep.checks)
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " measured="
                          << dnoband::format_number(c.measured) << " tol=" << dnoband::format_number(c.tolerance)
                          << "\n";
            return rep.all_passed() ? 0 : 1;
        }
    } catch (const dnoband::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
