#ifndef CSALLOC_EXPERIMENT_HPP
#define CSALLOC_EXPERIMENT_HPP

#include "csalloc/allocation.hpp"
#include "csalloc/iterative.hpp"
#include "csalloc/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csalloc {

/// Root mean squared error between two equal-length complex signals,
/// sqrt((1/N) * sum |estimate - reference|^2).
double rmse(const ComplexSignal& reference, const ComplexSignal& estimate);

/// Amplitude calibration applied to the generated trial signal.
enum class Normalization {
    None,    // profile amplitudes taken literally
    UnitRms, // time-domain RMS scaled to 1
    UnitPeak // peak spectral magnitude scaled to 1 (the A0 = 1 convention)
};

/// One reproducible experiment: signal family, sample budget, schemes to
/// compare, and trial count. Loaded from JSON; see configs/ for examples.
struct ExperimentConfig {
    std::string name = "experiment";
    std::size_t n = 256;
    SpectrumProfile profile;
    bool randomize_band_start = false;
    Normalization normalize = Normalization::None;
    std::vector<std::string> schemes; // "urs", "nrs", "vd", "hd", "hu", "iter"
    std::size_t budget = 16;
    std::vector<std::size_t> per_slice_counts; // optional; overrides the allocation law
    std::size_t slices = 0;                    // B; 0 derives from per_slice_counts/levels
    SparsityDomain sparsity = SparsityDomain::Time;
    std::size_t trials = 10;
    std::uint64_t base_seed = 1;
    SolverConfig solver;
    bool timing = false; // real wall_time_s in the CSV; off keeps output byte-reproducible
    std::string output_dir = ".";
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// Deterministic per-trial signal: band placement resolved (randomized when
/// the config asks for it) and amplitude normalization applied.
struct TrialSignal {
    SpectrumProfile profile;
    ComplexSignal spectrum;
    ComplexSignal time_signal;
};

TrialSignal make_trial_signal(const ExperimentConfig& config, std::uint64_t seed);

/// One scheme's sampling plan and reconstruction on a trial signal.
struct TrialRun {
    SolutionReport report;
    std::vector<double> per_stage_rmse;
    std::vector<bool> per_stage_converged;
    std::vector<std::size_t> sample_indices;
    std::vector<ComplexSignal> stage_estimates;
};

TrialRun run_scheme_trial(const ExperimentConfig& config, const std::string& scheme,
                          const TrialSignal& ts, std::uint64_t seed);

/// Outcome of one reconstruction trial.
struct TrialResult {
    std::string scheme; // "urs", "nrs", ..., "iter"
    std::uint64_t seed = 0;
    double rmse = 0.0; // final-stage RMSE
    std::vector<double> per_stage_rmse;
    std::vector<bool> per_stage_converged;
    bool converged = false;
    bool failed = false; // solver threw or produced non-finite output
    double wall_time_s = 0.0;
};

struct SchemeSummary {
    std::string scheme;
    std::size_t trials = 0;
    double mean_rmse = 0.0;
    double std_rmse = 0.0;
    std::size_t converged_count = 0;
};

/// Per-trial capture used to regenerate the figure set.
struct PlotTrace {
    std::string experiment;
    std::string scheme;
    std::vector<double> original_magnitude;
    std::vector<double> reconstructed_magnitude;
    std::vector<std::size_t> sample_indices;
    bool inband_markers = false; // diamonds for support-restricted sampling, crosses for URS
    std::vector<Complex> original_time;
    std::vector<Complex> reconstructed_time;
    std::vector<std::vector<double>> stage_error_spectra;
};

struct ExperimentOutcome {
    std::vector<TrialResult> rows;      // sorted by (scheme, seed)
    std::vector<SchemeSummary> summary; // means over final-stage RMSE
    std::vector<PlotTrace> traces;      // first trial of each scheme
    std::size_t failed_trials = 0;
    std::size_t total_trials = 0;
    std::vector<std::string> written_files;
};

/// Run all (scheme, trial) cells, optionally writing <name>_trials.csv,
/// <name>_summary.csv, <name>_config.json and the SVG figure files under
/// config.output_dir. Trials run in parallel up to CS_ALLOC_THREADS.
ExperimentOutcome run_experiment(const ExperimentConfig& config, bool write_outputs = true);

/// Write the figure files for one captured trace; returns the paths written.
/// An empty stage trace simply produces no per-stage files.
std::vector<std::string> emit_plots(const PlotTrace& trace, const std::string& output_dir);

/// Render rows to the trials CSV text (header + one line per stage row).
std::string trials_csv(const std::vector<TrialResult>& rows);
std::string summary_csv(const std::vector<SchemeSummary>& summary);

/// Recompute per-scheme summaries from rows (final-stage RMSE only).
std::vector<SchemeSummary> summarize(const std::vector<TrialResult>& rows);

} // namespace csalloc

#endif
