#include "csalloc/experiment.hpp"

#include "csalloc/fft.hpp"
#include "csalloc/rng.hpp"
#include "csalloc/svg_plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace csalloc {

using nlohmann::json;

double rmse(const ComplexSignal& reference, const ComplexSignal& estimate) {
    if (reference.size() != estimate.size())
        throw std::invalid_argument("rmse: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i)
        acc += std::norm(estimate[i] - reference[i]);
    return std::sqrt(acc / static_cast<double>(reference.size()));
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SpectrumProfile parse_profile(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "flat_band")
        return flat_band(j.at("start").get<std::size_t>(), j.at("width").get<std::size_t>(),
                         j.value("amplitude", 1.0));
    if (kind == "triangular")
        return triangular(j.at("start").get<std::size_t>(), j.at("width").get<std::size_t>(),
                          j.value("peak", 1.0));
    if (kind == "power_law")
        return power_law(j.at("start").get<std::size_t>(), j.at("width").get<std::size_t>(),
                         j.value("peak", 1.0), j.at("exponent").get<double>());
    if (kind == "dyadic_stepwise")
        return dyadic_stepwise(j.at("start").get<std::size_t>(),
                               j.at("base_width").get<std::size_t>(),
                               j.at("bands").get<std::size_t>(), j.value("amplitude", 1.0));
    if (kind == "stepwise")
        return stepwise(j.at("start").get<std::size_t>(),
                        j.at("widths").get<std::vector<std::size_t>>(),
                        j.at("amplitudes").get<std::vector<double>>());
    if (kind == "multi_band") {
        SpectrumProfile profile;
        profile.kind = ProfileKind::MultiBand;
        for (const json& bj : j.at("bands"))
            profile.bands.push_back({bj.at("start").get<std::size_t>(),
                                     bj.at("width").get<std::size_t>(),
                                     bj.value("amplitude", 1.0)});
        return profile;
    }
    throw std::invalid_argument("unknown profile kind: " + kind);
}

json profile_to_json(const SpectrumProfile& profile) {
    json j;
    switch (profile.kind) {
    case ProfileKind::FlatBand: j["kind"] = "flat_band"; break;
    case ProfileKind::MultiBand: j["kind"] = "multi_band"; break;
    case ProfileKind::StepwisePower: j["kind"] = "stepwise"; break;
    case ProfileKind::Triangular: j["kind"] = "triangular"; break;
    case ProfileKind::PowerLaw: j["kind"] = "power_law"; break;
    }
    if (profile.kind == ProfileKind::Triangular || profile.kind == ProfileKind::PowerLaw) {
        const BandSpec& b = profile.bands.front();
        j["start"] = b.start;
        j["width"] = b.width;
        j["peak"] = b.amplitude;
        if (profile.kind == ProfileKind::PowerLaw) j["exponent"] = profile.exponent;
    } else if (profile.kind == ProfileKind::StepwisePower) {
        j["start"] = profile.bands.front().start;
        json widths = json::array(), amplitudes = json::array();
        for (const BandSpec& b : profile.bands) {
            widths.push_back(b.width);
            amplitudes.push_back(b.amplitude);
        }
        j["widths"] = widths;
        j["amplitudes"] = amplitudes;
    } else {
        json bands = json::array();
        for (const BandSpec& b : profile.bands)
            bands.push_back({{"start", b.start}, {"width", b.width}, {"amplitude", b.amplitude}});
        j["bands"] = bands;
        if (profile.kind == ProfileKind::FlatBand) {
            j["start"] = profile.bands.front().start;
            j["width"] = profile.bands.front().width;
            j["amplitude"] = profile.bands.front().amplitude;
            j.erase("bands");
        }
    }
    return j;
}

const std::vector<std::string> kKnownSchemes = {"urs", "nrs", "vd", "hd", "hu", "iter"};

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    ExperimentConfig config;
    config.name = j.value("name", config.name);
    config.n = j.value("N", config.n);
    config.profile = parse_profile(j.at("profile"));
    config.randomize_band_start = j.value("randomize_band_start", false);
    const std::string norm = j.value("normalize", std::string("none"));
    if (norm == "none")
        config.normalize = Normalization::None;
    else if (norm == "unit_rms")
        config.normalize = Normalization::UnitRms;
    else if (norm == "unit_peak")
        config.normalize = Normalization::UnitPeak;
    else
        throw std::invalid_argument("config: normalize must be none, unit_rms, or unit_peak");
    config.schemes = j.value("schemes", std::vector<std::string>{"urs", "nrs"});
    for (const std::string& s : config.schemes)
        if (std::find(kKnownSchemes.begin(), kKnownSchemes.end(), s) == kKnownSchemes.end())
            throw std::invalid_argument("unknown scheme in config: " + s);
    config.budget = j.value("M", config.budget);
    config.per_slice_counts =
        j.value("per_slice_counts", std::vector<std::size_t>{});
    config.slices = j.value("slices", std::size_t{0});
    config.sparsity = j.value("sparsity_domain", std::string("time")) == std::string("frequency")
                          ? SparsityDomain::Frequency
                          : SparsityDomain::Time;
    config.trials = j.value("trials", config.trials);
    config.base_seed = j.value("base_seed", config.base_seed);
    if (j.contains("solver")) {
        const json& s = j["solver"];
        config.solver.tolerance = s.value("tolerance", config.solver.tolerance);
        config.solver.max_iterations = s.value("max_iterations", config.solver.max_iterations);
        config.solver.rho = s.value("rho", config.solver.rho);
        config.solver.relaxation = s.value("relaxation", config.solver.relaxation);
    }
    config.timing = j.value("timing", false);
    config.output_dir = j.value("output_dir", config.output_dir);
    if (config.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (config.budget < 1) throw std::invalid_argument("config: M must be >= 1");
    if (!config.per_slice_counts.empty()) {
        std::size_t sum = 0;
        for (std::size_t c : config.per_slice_counts) sum += c;
        if (sum > config.budget)
            throw std::invalid_argument("config: per_slice_counts exceed the budget M");
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
    json j;
    j["name"] = config.name;
    j["N"] = config.n;
    j["profile"] = profile_to_json(config.profile);
    j["randomize_band_start"] = config.randomize_band_start;
    j["normalize"] = config.normalize == Normalization::None      ? "none"
                     : config.normalize == Normalization::UnitRms ? "unit_rms"
                                                                  : "unit_peak";
    j["schemes"] = config.schemes;
    j["M"] = config.budget;
    if (!config.per_slice_counts.empty()) j["per_slice_counts"] = config.per_slice_counts;
    if (config.slices != 0) j["slices"] = config.slices;
    j["sparsity_domain"] =
        config.sparsity == SparsityDomain::Frequency ? "frequency" : "time";
    j["trials"] = config.trials;
    j["base_seed"] = config.base_seed;
    j["solver"] = {{"tolerance", config.solver.tolerance},
                   {"max_iterations", config.solver.max_iterations},
                   {"rho", config.solver.rho},
                   {"relaxation", config.solver.relaxation}};
    j["timing"] = config.timing;
    j["output_dir"] = config.output_dir;
    return j.dump(2) + "\n";
}

TrialSignal make_trial_signal(const ExperimentConfig& config, std::uint64_t seed) {
    TrialSignal ts{config.profile, ComplexSignal::zeros(1, Domain::Frequency),
                   ComplexSignal::zeros(1, Domain::Time)};
    if (config.randomize_band_start) {
        std::size_t lo = config.n, hi = 0;
        for (const BandSpec& b : ts.profile.bands) {
            lo = std::min(lo, b.start);
            hi = std::max(hi, b.end());
        }
        const std::size_t span = hi - lo;
        Rng rng(mix_seed(seed, 0xBA2D));
        const std::size_t new_lo =
            static_cast<std::size_t>(rng.uniform_below(config.n - span + 1));
        for (BandSpec& b : ts.profile.bands) b.start = b.start - lo + new_lo;
    }
    ts.spectrum = generate_spectrum(ts.profile, config.n);
    ts.time_signal = idft(ts.spectrum);
    double scale = 1.0;
    if (config.normalize == Normalization::UnitRms) {
        const double e = energy(ts.time_signal);
        if (e > 0.0) scale = std::sqrt(static_cast<double>(config.n) / e);
    } else if (config.normalize == Normalization::UnitPeak) {
        const double peak = ts.profile.peak();
        if (peak > 0.0) scale = 1.0 / peak;
    }
    if (scale != 1.0) {
        for (Complex& v : ts.spectrum.values()) v *= scale;
        for (Complex& v : ts.time_signal.values()) v *= scale;
    }
    return ts;
}

namespace {

// Per-slot weights of the three allocation laws, normalized to the budget.
std::vector<std::size_t> derive_counts(const std::string& scheme, std::size_t slots,
                                       std::size_t budget,
                                       const std::vector<std::size_t>& capacity) {
    std::vector<double> weights(slots, 1.0);
    for (std::size_t i = 0; i < slots; ++i) {
        if (scheme == "vd")
            weights[i] = (i <= 1) ? 1.0 : std::pow(2.0, -static_cast<double>(i - 1));
        else if (scheme == "hd")
            weights[i] = std::pow(2.0, -static_cast<double>(i));
        else // hu, iter: new-sample law
            weights[i] = (i == 0) ? 1.0 : std::pow(2.0, -static_cast<double>(i + 1));
    }
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<std::size_t> counts(slots, 0);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < slots; ++i) {
        counts[i] = static_cast<std::size_t>(
            std::floor(static_cast<double>(budget) * weights[i] / total + 0.5));
        counts[i] = std::min(counts[i], capacity[i]);
        assigned += counts[i];
    }
    // the largest slot absorbs any rounding residual
    for (std::size_t i = 0; i < slots && assigned != budget; ++i) {
        if (assigned < budget) {
            std::size_t room = capacity[i] - counts[i];
            std::size_t add = std::min<std::size_t>(room, budget - assigned);
            counts[i] += add;
            assigned += add;
        } else {
            std::size_t cut = std::min<std::size_t>(counts[i], assigned - budget);
            counts[i] -= cut;
            assigned -= cut;
        }
    }
    if (assigned != budget)
        throw std::invalid_argument("allocation: budget does not fit slice capacities");
    return counts;
}

std::vector<BandSpec> vertical_bands_for_counts(const SpectrumProfile& profile,
                                                std::size_t wanted) {
    if (profile.bands.size() == wanted || wanted == 0)
        return profile.bands;
    if (profile.bands.size() == 1) {
        // split a single continuous support into equal-width vertical chunks
        const BandSpec& b = profile.bands.front();
        if (wanted > b.width)
            throw std::invalid_argument("more vertical bands than support bins");
        std::vector<BandSpec> out;
        std::size_t base = b.width / wanted, rem = b.width % wanted;
        std::size_t cursor = b.start;
        for (std::size_t i = 0; i < wanted; ++i) {
            std::size_t w = base + (i + 1 == wanted ? rem : 0);
            out.push_back({cursor, w, b.amplitude});
            cursor += w;
        }
        return out;
    }
    throw std::invalid_argument("per_slice_counts does not match the number of bands");
}

std::size_t slice_count(const ExperimentConfig& config) {
    if (config.slices != 0) return config.slices;
    if (!config.per_slice_counts.empty()) return config.per_slice_counts.size();
    std::vector<double> levels;
    for (const BandSpec& b : config.profile.bands) levels.push_back(b.amplitude);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels.size();
}

} // namespace

TrialRun run_scheme_trial(const ExperimentConfig& config, const std::string& scheme,
                          const TrialSignal& ts, std::uint64_t seed) {
    const std::size_t n = config.n;
    const std::size_t m = config.budget;
    const std::uint64_t stream =
        mix_seed(seed, static_cast<std::uint64_t>(
                           std::find(kKnownSchemes.begin(), kKnownSchemes.end(), scheme) -
                           kKnownSchemes.begin()) +
                           1);

    TrialRun run;
    if (scheme == "urs") {
        IndexSet idx = sample_urs(n, m, stream);
        std::vector<Complex> b;
        b.reserve(idx.size());
        for (std::size_t k : idx.indices()) b.push_back(ts.spectrum[k]);
        BasisPursuitProblem problem(ProjectionOperator(idx),
                                    ComplexSignal(std::move(b), Domain::Frequency),
                                    config.sparsity);
        run.report = solve_l1(problem, config.solver);
        run.sample_indices = idx.indices();
        return run;
    }

    const IndexSet support(ts.profile.support(), n);

    AllocationPlan plan;
    SliceSchedule schedule;
    if (scheme == "nrs" || scheme == "vd") {
        std::vector<BandSpec> bands =
            vertical_bands_for_counts(ts.profile, config.per_slice_counts.size());
        if (!config.per_slice_counts.empty()) {
            plan = sample_per_band(bands, n, config.per_slice_counts, stream);
        } else if (scheme == "nrs") {
            plan = sample_inband(bands, n, m, stream);
        } else {
            std::vector<std::size_t> capacity;
            for (const BandSpec& b : bands) capacity.push_back(b.width);
            plan = sample_per_band(bands, n, derive_counts(scheme, bands.size(), m, capacity),
                                   stream);
        }
    } else { // hd, hu, iter
        schedule = horizontal_slices(ts.profile, n, slice_count(config));
        std::vector<std::size_t> counts = config.per_slice_counts;
        if (counts.empty()) {
            std::vector<std::size_t> capacity;
            IndexSet prev = IndexSet::empty(n);
            for (const Slice& s : schedule.slices) {
                capacity.push_back(scheme == "hd" ? s.support.size()
                                                  : s.support.size() - prev.size());
                prev = s.support;
            }
            counts = derive_counts(scheme, schedule.stages(), m, capacity);
        }
        plan = (scheme == "hd") ? sample_hd(schedule, n, counts, stream)
                                : sample_hu(schedule, n, counts, stream);
    }

    if (scheme == "iter") {
        std::vector<double> factors = stage_factors_from_profile(ts.profile, n, schedule);
        IterativeResult result =
            run_iterative(ts.spectrum, schedule, plan, factors, config.solver, config.sparsity,
                          ResidualUpdate::RetainedFraction, &ts.time_signal);
        run.report = std::move(result.final);
        for (const StageTrace& st : result.stages) {
            run.per_stage_rmse.push_back(st.rmse);
            run.per_stage_converged.push_back(st.converged);
            run.stage_estimates.push_back(st.estimate);
        }
        run.sample_indices = plan.cumulative_sets.back().indices();
        return run;
    }

    IndexSet selected = plan.all_samples();
    std::vector<Complex> b;
    b.reserve(selected.size());
    for (std::size_t k : selected.indices()) b.push_back(ts.spectrum[k]);
    ComplexSignal measurements =
        extend_vector(ComplexSignal(std::move(b), Domain::Frequency),
                      selected.size() + (n - support.size()));
    BasisPursuitProblem problem(ProjectionOperator(selected, complement(support)),
                                std::move(measurements), config.sparsity);
    run.report = solve_l1(problem, config.solver);
    run.sample_indices = selected.indices();
    return run;
}

namespace {

bool finite_signal(const ComplexSignal& s) {
    for (const Complex& v : s.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

std::size_t thread_cap(std::size_t tasks) {
    std::size_t threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CS_ALLOC_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && v > 0) threads = std::min<std::size_t>(threads, v);
    }
    return std::min(threads, std::max<std::size_t>(1, tasks));
}

} // namespace

std::vector<SchemeSummary> summarize(const std::vector<TrialResult>& rows) {
    std::vector<SchemeSummary> out;
    for (const std::string& scheme : kKnownSchemes) {
        SchemeSummary s;
        s.scheme = scheme;
        std::vector<double> values;
        for (const TrialResult& r : rows) {
            if (r.scheme != scheme) continue;
            if (r.failed || !std::isfinite(r.rmse)) continue;
            values.push_back(r.rmse);
            if (r.converged) ++s.converged_count;
        }
        if (values.empty()) continue;
        s.trials = values.size();
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        s.mean_rmse = mean;
        s.std_rmse = values.size() > 1
                         ? std::sqrt(var / static_cast<double>(values.size() - 1))
                         : 0.0;
        out.push_back(s);
    }
    return out;
}

std::string trials_csv(const std::vector<TrialResult>& rows) {
    std::string csv = "scheme,seed,rmse,stage,converged,wall_time_s\n";
    for (const TrialResult& r : rows) {
        if (r.per_stage_rmse.empty()) {
            csv += r.scheme + "," + std::to_string(r.seed) + "," + fmt_double(r.rmse) + ",1," +
                   (r.converged ? "true" : "false") + "," + fmt_double(r.wall_time_s) + "\n";
        } else {
            for (std::size_t s = 0; s < r.per_stage_rmse.size(); ++s)
                csv += r.scheme + "," + std::to_string(r.seed) + "," +
                       fmt_double(r.per_stage_rmse[s]) + "," + std::to_string(s + 1) + "," +
                       (r.per_stage_converged[s] ? "true" : "false") + "," +
                       fmt_double(r.wall_time_s) + "\n";
        }
    }
    return csv;
}

std::string summary_csv(const std::vector<SchemeSummary>& summary) {
    std::string csv = "scheme,trials,mean_rmse,std_rmse,converged\n";
    for (const SchemeSummary& s : summary)
        csv += s.scheme + "," + std::to_string(s.trials) + "," + fmt_double(s.mean_rmse) + "," +
               fmt_double(s.std_rmse) + "," + std::to_string(s.converged_count) + "\n";
    return csv;
}

std::vector<std::string> emit_plots(const PlotTrace& trace, const std::string& output_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (!fs::is_directory(output_dir))
        throw std::runtime_error("output directory is not writable: " + output_dir);

    std::vector<std::string> written;
    const std::string stem = output_dir + "/" + trace.experiment + "_" + trace.scheme + "_";
    const std::size_t n = trace.original_magnitude.size();
    std::vector<double> bins(n);
    for (std::size_t i = 0; i < n; ++i) bins[i] = static_cast<double>(i);

    {
        plot::Figure fig;
        fig.title = trace.experiment + " spectrum (" + trace.scheme + ")";
        fig.xlabel = "frequency bin";
        fig.ylabel = "|S(k)|";
        fig.series.push_back({bins, trace.original_magnitude, "original", "#333333", true,
                              plot::Marker::None, 1.2});
        fig.series.push_back({bins, trace.reconstructed_magnitude, "reconstructed", "#d62728",
                              true, plot::Marker::None, 1.2});
        plot::Series samples;
        samples.label = trace.inband_markers ? "samples (in-band)" : "samples (URS)";
        samples.color = trace.inband_markers ? "#2ca02c" : "#1f77b4";
        samples.line = false;
        samples.marker = trace.inband_markers ? plot::Marker::Diamond : plot::Marker::Cross;
        for (std::size_t k : trace.sample_indices) {
            samples.x.push_back(static_cast<double>(k));
            samples.y.push_back(trace.original_magnitude[k]);
        }
        fig.series.push_back(std::move(samples));
        const std::string path = stem + "spectrum.svg";
        plot::write_svg(fig, path);
        written.push_back(path);
    }

    for (int part = 0; part < 2; ++part) {
        plot::Figure fig;
        fig.title = trace.experiment + (part == 0 ? " real part (" : " imaginary part (") +
                    trace.scheme + ")";
        fig.xlabel = "time index";
        fig.ylabel = part == 0 ? "Re s(n)" : "Im s(n)";
        std::vector<double> orig(n), rec(n), resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            double o = part == 0 ? trace.original_time[i].real() : trace.original_time[i].imag();
            double r = part == 0 ? trace.reconstructed_time[i].real()
                                 : trace.reconstructed_time[i].imag();
            orig[i] = o;
            rec[i] = r;
            resid[i] = r - o;
        }
        fig.series.push_back({bins, orig, "original", "#333333", true, plot::Marker::None, 1.2});
        fig.series.push_back(
            {bins, rec, "reconstructed", "#d62728", true, plot::Marker::None, 1.2});
        fig.series.push_back({bins, resid, "residual", "#9467bd", true, plot::Marker::None, 1.0});
        const std::string path = stem + (part == 0 ? "signal_real.svg" : "signal_imag.svg");
        plot::write_svg(fig, path);
        written.push_back(path);
    }

    for (std::size_t s = 0; s < trace.stage_error_spectra.size(); ++s) {
        plot::Figure fig;
        fig.title = trace.experiment + " error spectrum, stage " + std::to_string(s + 1);
        fig.xlabel = "frequency bin";
        fig.ylabel = "|S(k) - S_hat(k)|";
        fig.series.push_back({bins, trace.stage_error_spectra[s], "stage " + std::to_string(s + 1),
                              "#d62728", true, plot::Marker::None, 1.2});
        const std::string path = stem + "error_spectrum_stage" + std::to_string(s + 1) + ".svg";
        plot::write_svg(fig, path);
        written.push_back(path);
    }
    return written;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, bool write_outputs) {
    if (config.schemes.empty())
        throw std::invalid_argument("run_experiment: no schemes configured");

    ExperimentOutcome outcome;
    const std::size_t cells = config.schemes.size() * config.trials;
    outcome.total_trials = cells;
    outcome.rows.resize(cells);
    outcome.traces.resize(config.schemes.size());

    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= cells) return;
            const std::size_t scheme_idx = cell / config.trials;
            const std::size_t trial = cell % config.trials;
            const std::string& scheme = config.schemes[scheme_idx];
            const std::uint64_t seed = config.base_seed + trial;

            TrialResult row;
            row.scheme = scheme;
            row.seed = seed;
            const auto start = std::chrono::steady_clock::now();
            try {
                TrialSignal ts = make_trial_signal(config, seed);
                TrialRun run = run_scheme_trial(config, scheme, ts, seed);
                row.rmse = rmse(ts.time_signal, run.report.solution);
                row.converged = run.report.converged;
                row.per_stage_rmse = run.per_stage_rmse;
                row.per_stage_converged = run.per_stage_converged;
                if (!finite_signal(run.report.solution) || !std::isfinite(row.rmse)) {
                    row.failed = true;
                    row.rmse = std::nan("");
                }
                if (trial == 0) {
                    PlotTrace& trace = outcome.traces[scheme_idx];
                    trace.experiment = config.name;
                    trace.scheme = scheme;
                    trace.inband_markers = scheme != "urs";
                    trace.sample_indices = run.sample_indices;
                    trace.original_time = ts.time_signal.values();
                    trace.reconstructed_time = run.report.solution.values();
                    trace.original_magnitude.resize(config.n);
                    trace.reconstructed_magnitude.resize(config.n);
                    const ComplexSignal rec_spectrum = dft(run.report.solution);
                    for (std::size_t k = 0; k < config.n; ++k) {
                        trace.original_magnitude[k] = std::abs(ts.spectrum[k]);
                        trace.reconstructed_magnitude[k] = std::abs(rec_spectrum[k]);
                    }
                    for (const ComplexSignal& est : run.stage_estimates) {
                        const ComplexSignal est_spectrum = dft(est);
                        std::vector<double> err(config.n);
                        for (std::size_t k = 0; k < config.n; ++k)
                            err[k] = std::abs(ts.spectrum[k] - est_spectrum[k]);
                        trace.stage_error_spectra.push_back(std::move(err));
                    }
                }
            } catch (const std::exception&) {
                row.failed = true;
                row.converged = false;
                row.rmse = std::nan("");
            }
            if (config.timing) {
                row.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
            }
            outcome.rows[cell] = std::move(row);
        }
    };

    const std::size_t threads = thread_cap(cells);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    outcome.failed_trials = 0;
    for (const TrialResult& r : outcome.rows)
        if (r.failed) ++outcome.failed_trials;

    std::sort(outcome.rows.begin(), outcome.rows.end(),
              [](const TrialResult& a, const TrialResult& b) {
                  if (a.scheme != b.scheme) return a.scheme < b.scheme;
                  return a.seed < b.seed;
              });
    outcome.summary = summarize(outcome.rows);

    if (write_outputs) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        if (!fs::is_directory(config.output_dir))
            throw std::runtime_error("output directory is not writable: " + config.output_dir);

        const std::string base = config.output_dir + "/" + config.name;
        auto write_file = [&](const std::string& path, const std::string& text) {
            std::ofstream out(path, std::ios::binary);
            if (!out.is_open()) throw std::runtime_error("cannot write file: " + path);
            out << text;
            outcome.written_files.push_back(path);
        };
        write_file(base + "_trials.csv", trials_csv(outcome.rows));
        write_file(base + "_summary.csv", summary_csv(outcome.summary));
        write_file(base + "_config.json", config_to_json(config));
        for (const PlotTrace& trace : outcome.traces) {
            if (trace.original_magnitude.empty()) continue; // failed capture
            std::vector<std::string> files = emit_plots(trace, config.output_dir);
            outcome.written_files.insert(outcome.written_files.end(), files.begin(),
                                         files.end());
        }
    }
    return outcome;
}

} // namespace csalloc
