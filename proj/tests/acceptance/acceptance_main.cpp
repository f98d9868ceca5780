// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria with runtime budgets measure and enforce them.

#include "csalloc/experiment.hpp"
#include "csalloc/fft.hpp"
#include "csalloc/iterative.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace csalloc;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %2d %-28s %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<Complex> random_complex(std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> out(n);
    for (Complex& v : out) v = Complex(dist(gen), dist(gen));
    return out;
}

ComplexSignal gather(const ComplexSignal& spectrum, const ProjectionOperator& op) {
    std::vector<Complex> b;
    b.reserve(op.rows());
    for (std::size_t k : op.selected().indices()) b.push_back(spectrum[k]);
    b.resize(op.rows());
    return ComplexSignal(std::move(b), Domain::Frequency);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- criterion 1: transform fidelity --------------------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    const std::vector<std::size_t> sizes = {8, 64, 128, 1024};
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        for (int rep = 0; rep < 25; ++rep) {
            auto raw = random_complex(sizes[si], static_cast<std::uint32_t>(100 * si + rep));
            ComplexSignal s(raw, Domain::Time);
            ComplexSignal back = idft(dft(s));
            for (std::size_t i = 0; i < raw.size(); ++i)
                worst = std::max(worst, std::abs(back[i] - raw[i]));
        }
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max_err=%.3g (<1e-10), elapsed=%.2fs (<1s)", worst,
                  elapsed);
    report(1, "transform-fidelity", worst < 1e-10 && elapsed < 1.0, detail);
}

// ---- criterion 2: closed-form match ----------------------------------------

void criterion_2() {
    // Independent evaluation of the band-kernel closed form: for a width-W
    // band at k0 the kernel numerator is sin(pi*W*n/N) with phase center
    // k0 + (W-1)/2, limit W at n = 0, all under the 1/sqrt(N) convention.
    const std::size_t n = 128, k0 = 32;
    double worst = 0.0;
    for (std::size_t w : {std::size_t{5}, std::size_t{31}, std::size_t{77}}) {
        ComplexSignal signal = idft(generate_spectrum(flat_band(k0, w), n));
        const double center = static_cast<double>(k0) + (static_cast<double>(w) - 1.0) / 2.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double x = static_cast<double>(t);
            double kernel =
                (t == 0) ? static_cast<double>(w)
                         : std::sin(std::numbers::pi * static_cast<double>(w) * x / 128.0) /
                               std::sin(std::numbers::pi * x / 128.0);
            const double angle = 2.0 * std::numbers::pi * x * center / 128.0;
            Complex expected = kernel / std::sqrt(128.0) *
                               Complex(std::cos(angle), std::sin(angle));
            worst = std::max(worst, std::abs(signal[t] - expected));
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max_err=%.3g (<1e-9), W in {5,31,77}", worst);
    report(2, "closed-form-match", worst < 1e-9, detail);
}

// ---- criterion 3: dyadic allocation totals ---------------------------------

void criterion_3() {
    auto total = [](const std::vector<std::size_t>& v) {
        std::size_t t = 0;
        for (std::size_t c : v) t += c;
        return t;
    };
    const std::size_t vd = total(allocate_dyadic(16, Scheme::VD));
    const std::size_t hd = total(allocate_dyadic(16, Scheme::HD));
    const std::size_t hu = total(allocate_dyadic(16, Scheme::HU));
    char detail[96];
    std::snprintf(detail, sizeof(detail), "totals vd=%zu hd=%zu hu=%zu (44/30/23)", vd, hd, hu);
    report(3, "allocation-totals", vd == 44 && hd == 30 && hu == 23, detail);
}

// ---- criteria 4 and 5: band suppression experiments -------------------------

ExperimentConfig band_config(const char* json) { return parse_config(json); }

void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config = band_config(R"({
      "name": "single_band",
      "N": 128,
      "profile": {"kind": "flat_band", "start": 32, "width": 77, "amplitude": 1.0},
      "randomize_band_start": true,
      "normalize": "none",
      "schemes": ["urs", "nrs"],
      "M": 20,
      "trials": 50,
      "base_seed": 4101,
      "solver": {"tolerance": 1e-7, "max_iterations": 5000}
    })");

    double urs_sum = 0.0, nrs_sum = 0.0;
    double worst_outband = 0.0;
    std::size_t converged_nrs = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = config.base_seed + t;
        TrialSignal ts = make_trial_signal(config, seed);
        TrialRun urs = run_scheme_trial(config, "urs", ts, seed);
        TrialRun nrs = run_scheme_trial(config, "nrs", ts, seed);
        urs_sum += rmse(ts.time_signal, urs.report.solution);
        nrs_sum += rmse(ts.time_signal, nrs.report.solution);
        if (nrs.report.converged) {
            ++converged_nrs;
            const IndexSet support(ts.profile.support(), config.n);
            const IndexSet outband = complement(support);
            const ComplexSignal spectrum = dft(nrs.report.solution);
            for (std::size_t k : outband.indices())
                worst_outband = std::max(worst_outband, std::abs(spectrum[k]));
        }
    }
    const double urs_mean = urs_sum / 50.0, nrs_mean = nrs_sum / 50.0;
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "mean nrs=%.4f < urs=%.4f, outband=%.2e (<=1e-5, %zu conv), %.1fs (<120s)",
                  nrs_mean, urs_mean, worst_outband, converged_nrs, elapsed);
    report(4, "single-band-suppression",
           nrs_mean < urs_mean && worst_outband <= 1e-5 && elapsed < 120.0 && converged_nrs > 0,
           detail);
}

void criterion_5() {
    ExperimentConfig config = band_config(R"({
      "name": "two_band",
      "N": 128,
      "profile": {"kind": "multi_band",
                  "bands": [{"start": 20, "width": 38, "amplitude": 1.0},
                            {"start": 70, "width": 25, "amplitude": 1.0}]},
      "randomize_band_start": true,
      "schemes": ["urs", "nrs"],
      "M": 11,
      "per_slice_counts": [7, 4],
      "trials": 50,
      "base_seed": 4205,
      "solver": {"tolerance": 1e-7, "max_iterations": 5000}
    })");

    double urs_sum = 0.0, nrs_sum = 0.0;
    for (std::size_t t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = config.base_seed + t;
        TrialSignal ts = make_trial_signal(config, seed);
        urs_sum += rmse(ts.time_signal, run_scheme_trial(config, "urs", ts, seed).report.solution);
        nrs_sum += rmse(ts.time_signal, run_scheme_trial(config, "nrs", ts, seed).report.solution);
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "mean nrs=%.4f < urs=%.4f over 50 trials",
                  nrs_sum / 50.0, urs_sum / 50.0);
    report(5, "two-band-split", nrs_sum < urs_sum, detail);
}

// ---- criterion 6: tone exactness --------------------------------------------

void criterion_6() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 128;
    int total = 0, exact = 0;
    for (std::size_t k_count : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
        for (int rep = 0; rep < 10; ++rep) {
            std::mt19937 gen(static_cast<std::uint32_t>(600 + 10 * k_count + rep));
            std::vector<std::size_t> peaks;
            while (peaks.size() < k_count) {
                std::size_t k = gen() % n;
                bool dup = false;
                for (std::size_t p : peaks) dup |= (p == k);
                if (!dup) peaks.push_back(k);
            }
            ComplexSignal spectrum = ComplexSignal::zeros(n, Domain::Frequency);
            std::uniform_real_distribution<double> amp(0.5, 2.0);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            for (std::size_t p : peaks) {
                double a = amp(gen), th = phase(gen);
                spectrum[p] = a * Complex(std::cos(th), std::sin(th));
            }
            ComplexSignal truth = idft(spectrum);

            ProjectionOperator op = extend(ProjectionOperator(IndexSet(peaks, n)));
            BasisPursuitProblem problem(op, gather(spectrum, op), SparsityDomain::Frequency);
            SolutionReport rep_out = solve_l1(problem);
            ++total;
            if (rmse(truth, rep_out.solution) < 1e-6) ++exact;
        }
    }
    const double elapsed = seconds_since(start);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d/%d trials exact (rmse<1e-6), %.2fs (<10s)", exact,
                  total, elapsed);
    report(6, "tone-exactness", exact == total && elapsed < 10.0, detail);
}

// ---- criteria 7 and 8: staged-slicing benchmark reproductions ----------------

// Grid length pinned at 128 so the 120-bin support nearly fills it; the
// unit-peak calibration fixes the absolute error scale the thresholds below
// assume.
const char* kStepwiseConfig = R"({
  "name": "stepwise3",
  "N": 128,
  "profile": {"kind": "stepwise", "start": 4, "widths": [30, 30, 60],
              "amplitudes": [7, 3, 1]},
  "normalize": "unit_peak",
  "schemes": ["urs", "nrs", "iter"],
  "M": 16,
  "per_slice_counts": [12, 3, 1],
  "trials": 10,
  "base_seed": 2025,
  "solver": {"tolerance": 1e-7, "max_iterations": 20000}
})";

void criterion_7() {
    ExperimentOutcome outcome = run_experiment(parse_config(kStepwiseConfig), false);
    double urs = 0, nrs = 0, iter = 0;
    for (const SchemeSummary& s : outcome.summary) {
        if (s.scheme == "urs") urs = s.mean_rmse;
        if (s.scheme == "nrs") nrs = s.mean_rmse;
        if (s.scheme == "iter") iter = s.mean_rmse;
    }
    const bool ordering = iter < nrs && nrs < urs;
    // reference pattern 0.094 < 0.167 < 0.206; absolute means within a factor of 3
    const bool close = iter > 0.094 / 3 && iter < 0.094 * 3 && nrs > 0.167 / 3 &&
                       nrs < 0.167 * 3 && urs > 0.206 / 3 && urs < 0.206 * 3;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "mean iter=%.4f nrs=%.4f urs=%.4f (ref 0.094/0.167/0.206, x3 band)", iter, nrs,
                  urs);
    report(7, "stepwise-threeband", ordering && close, detail);
}

void criterion_8() {
    ExperimentOutcome outcome = run_experiment(parse_config(R"({
      "name": "triangular2",
      "N": 256,
      "profile": {"kind": "triangular", "start": 40, "width": 120, "peak": 1.0},
      "normalize": "unit_peak",
      "schemes": ["urs", "nrs", "iter"],
      "M": 15,
      "per_slice_counts": [12, 3],
      "trials": 10,
      "base_seed": 420,
      "solver": {"tolerance": 1e-7, "max_iterations": 20000}
    })"),
                                               false);
    double urs = 0, nrs = 0, iter = 0;
    for (const SchemeSummary& s : outcome.summary) {
        if (s.scheme == "urs") urs = s.mean_rmse;
        if (s.scheme == "nrs") nrs = s.mean_rmse;
        if (s.scheme == "iter") iter = s.mean_rmse;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "mean iter=%.4f nrs=%.4f urs=%.4f (ref pattern .017/.0201/.0234)",
                  iter, nrs, urs);
    report(8, "triangular-staged", iter < nrs && nrs < urs, detail);
}

// ---- criterion 9: l0 oracle agreement ----------------------------------------

void criterion_9() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 16, m = 8;
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937 gen(static_cast<std::uint32_t>(900 + trial));
        const std::size_t k = 1 + gen() % 2;
        std::vector<std::size_t> positions;
        while (positions.size() < k) {
            std::size_t p = gen() % n;
            bool dup = false;
            for (std::size_t q : positions) dup |= (q == p);
            if (!dup) positions.push_back(p);
        }
        ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
        std::uniform_real_distribution<double> amp(0.5, 1.5);
        for (std::size_t p : positions)
            truth[p] = Complex(amp(gen), amp(gen) - 1.0);
        ComplexSignal spectrum = dft(truth);

        ProjectionOperator op(sample_urs(n, m, static_cast<std::uint64_t>(7000 + trial)));
        BasisPursuitProblem problem(op, gather(spectrum, op), SparsityDomain::Time);
        SolutionReport l1 = solve_l1(problem);
        SolutionReport l0 = solve_l0_bruteforce(problem, 2);
        if (!l0.converged) continue;

        auto support = [n](const ComplexSignal& s) {
            double peak = 0.0;
            for (const Complex& v : s.values()) peak = std::max(peak, std::abs(v));
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(s[i]) > 1e-4 * peak) out.push_back(i);
            return out;
        };
        if (support(l1.solution) == support(l0.solution)) ++agree;
    }
    const double elapsed = seconds_since(start);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "support match %d/100 (>=90), %.2fs (<60s)", agree,
                  elapsed);
    report(9, "l0-oracle-agreement", agree >= 90 && elapsed < 60.0, detail);
}

// ---- criterion 10: main-lobe width property -----------------------------------

void criterion_10() {
    const std::size_t n = 128, k0 = 20;
    bool pass = true;
    std::string detail;
    for (std::size_t w : {std::size_t{15}, std::size_t{31}, std::size_t{63}}) {
        ComplexSignal s = idft(generate_spectrum(flat_band(k0, w), n));
        const double center = static_cast<double>(k0) + (static_cast<double>(w) - 1.0) / 2.0;
        auto kernel = [&](std::size_t t) {
            double angle = -2.0 * std::numbers::pi * static_cast<double>(t) * center / n;
            return (s[t] * Complex(std::cos(angle), std::sin(angle))).real();
        };
        // grid-located zero crossing: last sample before the first sign change
        std::size_t lower = 0;
        for (std::size_t t = 1; t + 1 < n; ++t) {
            if (kernel(t) > 0.0 && kernel(t + 1) <= 0.0) {
                lower = t;
                break;
            }
        }
        const double measured_width = 2.0 * static_cast<double>(lower);
        const double expected = main_lobe_width(w, n); // 2N/(W+1)
        if (std::abs(measured_width - expected) > 1.0) pass = false;
        char part[48];
        std::snprintf(part, sizeof(part), "W=%zu: %g vs %g; ", w, measured_width, expected);
        detail += part;
    }
    report(10, "main-lobe-width", pass, detail + "(within 1 sample)");
}

// ---- criterion 11: iterative degeneracy ----------------------------------------

void criterion_11() {
    const std::size_t n = 128;
    SpectrumProfile profile = flat_band(30, 61, 1.0);
    SliceSchedule schedule = horizontal_slices(profile, n, 1);
    ComplexSignal spectrum = generate_spectrum(profile, n);

    bool identical = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        AllocationPlan plan = sample_hu(schedule, n, {14}, seed);
        IterativeResult staged = run_iterative(spectrum, schedule, plan, {1.0}, SolverConfig{});

        ProjectionOperator op(plan.cumulative_sets[0], complement(schedule.slices[0].support));
        std::vector<Complex> b;
        for (std::size_t k : plan.cumulative_sets[0].indices()) b.push_back(spectrum[k]);
        b.resize(op.rows());
        SolutionReport direct =
            solve_l1(BasisPursuitProblem(op, ComplexSignal(std::move(b), Domain::Frequency),
                                         SparsityDomain::Time),
                     SolverConfig{});
        if (std::memcmp(staged.final.solution.values().data(), direct.solution.values().data(),
                        n * sizeof(Complex)) != 0)
            identical = false;
    }
    report(11, "iterative-degeneracy", identical, "B=1, f=1 equals solve_l1 on 10 seeds");
}

// ---- criterion 12: reproducibility ----------------------------------------------

void criterion_12() {
    namespace fs = std::filesystem;
    ExperimentConfig config = parse_config(kStepwiseConfig);
    const std::string dir_a = (fs::temp_directory_path() / "csalloc_acc_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "csalloc_acc_b").string();
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    config.output_dir = dir_a;
    run_experiment(config);
    config.output_dir = dir_b;
    run_experiment(config);

    const std::string trials_a = read_file(dir_a + "/stepwise3_trials.csv");
    const std::string trials_b = read_file(dir_b + "/stepwise3_trials.csv");
    const std::string summary_a = read_file(dir_a + "/stepwise3_summary.csv");
    const std::string summary_b = read_file(dir_b + "/stepwise3_summary.csv");
    const bool pass = !trials_a.empty() && trials_a == trials_b && summary_a == summary_b;
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    report(12, "csv-reproducibility", pass, "two identical stepwise runs are byte-identical");
}

} // namespace

int main() {
    std::printf("csalloc acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
