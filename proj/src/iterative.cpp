#include "csalloc/iterative.hpp"

#include "csalloc/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csalloc {

double scale_factor(double beta) {
    if (beta <= 0.0) throw std::invalid_argument("scale_factor: beta must be positive");
    return 1.0 - std::pow(2.0, -beta);
}

namespace {

double rmse_against(const ComplexSignal& reference, const ComplexSignal& estimate) {
    double acc = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i)
        acc += std::norm(estimate[i] - reference[i]);
    return std::sqrt(acc / static_cast<double>(reference.size()));
}

} // namespace

IterativeResult run_iterative(const ComplexSignal& true_spectrum, const SliceSchedule& schedule,
                              const AllocationPlan& plan,
                              const std::vector<double>& stage_factors,
                              const SolverConfig& config, SparsityDomain sparsity,
                              ResidualUpdate update_rule, const ComplexSignal* reference) {
    const std::size_t n = true_spectrum.size();
    const std::size_t stages = schedule.stages();
    if (true_spectrum.domain() != Domain::Frequency)
        throw std::invalid_argument("run_iterative: measurement source must be a spectrum");
    if (stage_factors.size() != stages)
        throw std::invalid_argument("run_iterative: one stage factor per slice required");
    if (plan.cumulative_sets.size() != stages)
        throw std::invalid_argument("run_iterative: plan slices must align with the schedule");
    for (double f : stage_factors)
        if (f <= 0.0 || f > 1.0)
            throw std::invalid_argument("run_iterative: stage factors must lie in (0, 1]");
    if (reference && reference->size() != n)
        throw std::invalid_argument("run_iterative: reference length mismatch");

    IterativeResult result;
    result.stages.reserve(stages);

    // Residual spectrum bookkeeping on all bins the plan may touch.
    std::vector<Complex> residual = true_spectrum.values();
    ComplexSignal estimate = ComplexSignal::zeros(n, Domain::Time);

    double energy_remaining = energy(true_spectrum);

    for (std::size_t m = 0; m < stages; ++m) {
        const IndexSet& samples = plan.cumulative_sets[m];
        const IndexSet& support = schedule.slices[m].support;
        if (samples.size() == 0)
            throw std::invalid_argument("run_iterative: empty cumulative sample set at stage " +
                                        std::to_string(m + 1));
        if (!support.contains_all(samples))
            throw std::invalid_argument("run_iterative: samples leave slice support at stage " +
                                        std::to_string(m + 1));

        // Suppress everything outside this slice's support.
        ProjectionOperator op(samples, complement(support));

        std::vector<Complex> b(op.rows());
        std::size_t r = 0;
        for (std::size_t k : samples.indices()) b[r++] = residual[k];

        BasisPursuitProblem problem(op, ComplexSignal(std::move(b), Domain::Frequency), sparsity);
        SolutionReport stage_report = solve_l1(problem, config);
        if (stages == 1 && stage_factors[0] == 1.0) {
            // Degenerate schedule: the report is exactly the single solve's.
            result.final = stage_report;
            if (!stage_report.converged) result.failed_stage = 1;
            const ComplexSignal stage_spectrum = dft(stage_report.solution);
            for (std::size_t i = 0; i < n; ++i) residual[i] -= stage_spectrum[i];
            StageTrace trace;
            trace.stage = 1;
            trace.stage_solution = stage_report.solution;
            trace.estimate = stage_report.solution;
            trace.rmse = reference ? rmse_against(*reference, stage_report.solution) : 0.0;
            trace.residual_energy = energy(ComplexSignal(residual, Domain::Frequency));
            trace.energy_remaining = 0.0;
            trace.iterations_used = stage_report.iterations_used;
            trace.converged = stage_report.converged;
            result.stages.push_back(std::move(trace));
            return result;
        }
        if (!stage_report.converged && result.failed_stage == 0)
            result.failed_stage = static_cast<int>(m + 1);

        const double f = stage_factors[m];
        for (std::size_t i = 0; i < n; ++i) estimate[i] += f * stage_report.solution[i];

        const ComplexSignal stage_spectrum = dft(stage_report.solution);
        const double removal = (update_rule == ResidualUpdate::RetainedFraction) ? f : 1.0 - f;
        for (std::size_t i = 0; i < n; ++i) residual[i] -= removal * stage_spectrum[i];

        energy_remaining *= (1.0 - f);

        StageTrace trace;
        trace.stage = static_cast<int>(m + 1);
        trace.stage_solution = stage_report.solution;
        trace.estimate = estimate;
        trace.rmse = reference ? rmse_against(*reference, estimate) : 0.0;
        trace.residual_energy = energy(ComplexSignal(residual, Domain::Frequency));
        trace.energy_remaining = energy_remaining;
        trace.iterations_used = stage_report.iterations_used;
        trace.converged = stage_report.converged;
        result.stages.push_back(std::move(trace));

        if (m + 1 == stages) {
            result.final = std::move(stage_report);
            result.final.solution = estimate;
            if (result.failed_stage != 0) result.final.converged = false;
        }
    }

    return result;
}

} // namespace csalloc
