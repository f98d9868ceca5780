// csbench: generate signals, plan sample allocations, reconstruct, and run
// seeded experiment suites that compare URS / NRS / slicing schemes.

#include "csalloc/experiment.hpp"
#include "csalloc/fft.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace {

using namespace csalloc;
using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("output directory is not writable: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

void print_summary(const std::vector<SchemeSummary>& summary) {
    std::printf("%-8s %8s %14s %14s %10s\n", "scheme", "trials", "mean_rmse", "std_rmse",
                "converged");
    for (const SchemeSummary& s : summary)
        std::printf("%-8s %8zu %14.6g %14.6g %7zu/%zu\n", s.scheme.c_str(), s.trials,
                    s.mean_rmse, s.std_rmse, s.converged_count, s.trials);
}

int cmd_generate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir) {
    ExperimentConfig config = load_config(config_path);
    ensure_dir(out_dir);
    const std::uint64_t s = seed.value_or(config.base_seed);
    TrialSignal ts = make_trial_signal(config, s);

    std::string spectrum = "k,magnitude,re,im\n";
    for (std::size_t k = 0; k < config.n; ++k)
        spectrum += std::to_string(k) + "," + fmt(std::abs(ts.spectrum[k])) + "," +
                    fmt(ts.spectrum[k].real()) + "," + fmt(ts.spectrum[k].imag()) + "\n";
    std::string signal = "n,re,im\n";
    for (std::size_t i = 0; i < config.n; ++i)
        signal += std::to_string(i) + "," + fmt(ts.time_signal[i].real()) + "," +
                  fmt(ts.time_signal[i].imag()) + "\n";

    write_text(out_dir + "/" + config.name + "_spectrum.csv", spectrum);
    write_text(out_dir + "/" + config.name + "_signal.csv", signal);
    write_text(out_dir + "/" + config.name + "_config.json", config_to_json(config));
    std::cout << "wrote " << config.name << "_spectrum.csv, _signal.csv, _config.json in "
              << out_dir << "\n";
    return 0;
}

int cmd_plan(const std::string& config_path, const std::string& scheme,
             std::optional<std::uint64_t> seed, const std::string& out_dir) {
    ExperimentConfig config = load_config(config_path);
    ensure_dir(out_dir);
    const std::uint64_t s = seed.value_or(config.base_seed);
    TrialSignal ts = make_trial_signal(config, s);
    TrialRun run = run_scheme_trial(config, scheme, ts, s);

    json j;
    j["experiment"] = config.name;
    j["scheme"] = scheme;
    j["seed"] = s;
    j["M"] = config.budget;
    j["sample_indices"] = run.sample_indices;
    write_text(out_dir + "/" + config.name + "_" + scheme + "_plan.json", j.dump(2) + "\n");
    std::cout << "planned " << run.sample_indices.size() << " distinct samples for scheme "
              << scheme << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& config_path, const std::string& scheme,
                    std::optional<std::uint64_t> seed, const std::string& out_dir) {
    ExperimentConfig config = load_config(config_path);
    ensure_dir(out_dir);
    const std::uint64_t s = seed.value_or(config.base_seed);
    TrialSignal ts = make_trial_signal(config, s);
    TrialRun run = run_scheme_trial(config, scheme, ts, s);
    const double err = rmse(ts.time_signal, run.report.solution);

    std::string csv = "n,re,im,ref_re,ref_im\n";
    for (std::size_t i = 0; i < config.n; ++i)
        csv += std::to_string(i) + "," + fmt(run.report.solution[i].real()) + "," +
               fmt(run.report.solution[i].imag()) + "," + fmt(ts.time_signal[i].real()) + "," +
               fmt(ts.time_signal[i].imag()) + "\n";
    write_text(out_dir + "/" + config.name + "_" + scheme + "_solution.csv", csv);

    json j;
    j["experiment"] = config.name;
    j["scheme"] = scheme;
    j["seed"] = s;
    j["rmse"] = err;
    j["converged"] = run.report.converged;
    j["iterations"] = run.report.iterations_used;
    j["final_residual"] = run.report.final_residual;
    j["objective"] = run.report.objective;
    if (!run.per_stage_rmse.empty()) j["per_stage_rmse"] = run.per_stage_rmse;
    write_text(out_dir + "/" + config.name + "_" + scheme + "_report.json", j.dump(2) + "\n");

    PlotTrace trace;
    trace.experiment = config.name;
    trace.scheme = scheme;
    trace.inband_markers = scheme != "urs";
    trace.sample_indices = run.sample_indices;
    trace.original_time = ts.time_signal.values();
    trace.reconstructed_time = run.report.solution.values();
    const ComplexSignal rec_spectrum = dft(run.report.solution);
    trace.original_magnitude.resize(config.n);
    trace.reconstructed_magnitude.resize(config.n);
    for (std::size_t k = 0; k < config.n; ++k) {
        trace.original_magnitude[k] = std::abs(ts.spectrum[k]);
        trace.reconstructed_magnitude[k] = std::abs(rec_spectrum[k]);
    }
    for (const ComplexSignal& est : run.stage_estimates) {
        const ComplexSignal est_spectrum = dft(est);
        std::vector<double> e(config.n);
        for (std::size_t k = 0; k < config.n; ++k)
            e[k] = std::abs(ts.spectrum[k] - est_spectrum[k]);
        trace.stage_error_spectra.push_back(std::move(e));
    }
    emit_plots(trace, out_dir);

    std::cout << "scheme " << scheme << ": rmse=" << err
              << " converged=" << (run.report.converged ? "true" : "false")
              << " iterations=" << run.report.iterations_used << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, std::optional<std::uint64_t> seed,
                   std::optional<std::size_t> trials, const std::string& out_dir,
                   const std::vector<std::string>& schemes) {
    ExperimentConfig config = load_config(config_path);
    if (seed) config.base_seed = *seed;
    if (trials) config.trials = *trials;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!schemes.empty()) config.schemes = schemes;

    ExperimentOutcome outcome = run_experiment(config);
    print_summary(outcome.summary);
    std::cout << outcome.total_trials - outcome.failed_trials << "/" << outcome.total_trials
              << " trials completed; outputs in " << config.output_dir << "\n";
    if (outcome.failed_trials * 2 > outcome.total_trials) {
        std::cerr << "error: more than half of the trials failed\n";
        return 1;
    }
    return 0;
}

int cmd_report(const std::string& csv_path, const std::string& out_dir) {
    std::ifstream in(csv_path);
    if (!in.is_open()) throw std::runtime_error("cannot open trials CSV: " + csv_path);

    std::string line;
    std::getline(in, line); // header
    struct Key {
        std::string scheme;
        std::uint64_t seed;
        bool operator<(const Key& o) const {
            return scheme != o.scheme ? scheme < o.scheme : seed < o.seed;
        }
    };
    std::map<Key, TrialResult> latest;
    std::map<Key, int> max_stage;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string scheme, seed_s, rmse_s, stage_s, conv_s, wall_s;
        std::getline(ss, scheme, ',');
        std::getline(ss, seed_s, ',');
        std::getline(ss, rmse_s, ',');
        std::getline(ss, stage_s, ',');
        std::getline(ss, conv_s, ',');
        std::getline(ss, wall_s, ',');
        Key key{scheme, std::stoull(seed_s)};
        int stage = std::stoi(stage_s);
        if (max_stage.count(key) && stage <= max_stage[key]) continue;
        max_stage[key] = stage;
        TrialResult r;
        r.scheme = scheme;
        r.seed = key.seed;
        r.rmse = std::stod(rmse_s);
        r.converged = conv_s == "true";
        r.failed = !std::isfinite(r.rmse);
        r.wall_time_s = std::stod(wall_s);
        latest[key] = r;
    }
    std::vector<TrialResult> rows;
    rows.reserve(latest.size());
    for (auto& [key, r] : latest) rows.push_back(r);
    std::vector<SchemeSummary> summary = summarize(rows);
    print_summary(summary);
    if (!out_dir.empty()) {
        ensure_dir(out_dir);
        const std::string path =
            out_dir + "/" + std::filesystem::path(csv_path).stem().string() + "_summary.csv";
        write_text(path, summary_csv(summary));
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressive-sampling allocation benchmark harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", scheme = "nrs", csv_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::vector<std::string> schemes;

    CLI::App* generate = app.add_subcommand("generate", "generate a signal from a config");
    generate->add_option("--config", config_path, "experiment config JSON")->required();
    generate->add_option("--seed", seed, "trial seed (default: base_seed)");
    generate->add_option("--out", out_dir, "output directory");

    CLI::App* plan = app.add_subcommand("plan", "plan a sample allocation");
    plan->add_option("--config", config_path, "experiment config JSON")->required();
    plan->add_option("--scheme", scheme, "urs|nrs|vd|hd|hu|iter");
    plan->add_option("--seed", seed, "trial seed (default: base_seed)");
    plan->add_option("--out", out_dir, "output directory");

    CLI::App* reconstruct = app.add_subcommand("reconstruct", "run one reconstruction trial");
    reconstruct->add_option("--config", config_path, "experiment config JSON")->required();
    reconstruct->add_option("--scheme", scheme, "urs|nrs|vd|hd|hu|iter");
    reconstruct->add_option("--seed", seed, "trial seed (default: base_seed)");
    reconstruct->add_option("--out", out_dir, "output directory");

    CLI::App* experiment = app.add_subcommand("experiment", "run a seeded experiment suite");
    experiment->add_option("--config", config_path, "experiment config JSON")->required();
    experiment->add_option("--seed", seed, "override base_seed");
    experiment->add_option("--trials", trials, "override trial count");
    experiment->add_option("--out", out_dir, "output directory");
    experiment->add_option("--scheme", schemes, "override scheme list (repeatable)");

    std::string report_out;
    CLI::App* report = app.add_subcommand("report", "summarize a trials CSV");
    report->add_option("csv", csv_path, "trials CSV path")->required();
    report->add_option("--out", report_out, "write <stem>_summary.csv here (optional)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) return cmd_generate(config_path, seed, out_dir);
        if (*plan) return cmd_plan(config_path, scheme, seed, out_dir);
        if (*reconstruct) return cmd_reconstruct(config_path, scheme, seed, out_dir);
        if (*experiment) return cmd_experiment(config_path, seed, trials, out_dir, schemes);
        if (*report) return cmd_report(csv_path, report_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
