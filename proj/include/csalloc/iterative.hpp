#ifndef CSALLOC_ITERATIVE_HPP
#define CSALLOC_ITERATIVE_HPP

#include "csalloc/allocation.hpp"
#include "csalloc/solver.hpp"

#include <vector>

namespace csalloc {

/// Fraction of the remaining energy captured by one dyadic slice of a
/// power-law spectrum: 1 - 2^(-beta).
double scale_factor(double beta);

/// How the residual measurements are updated after a stage. RetainedFraction
/// subtracts what the estimate actually absorbed, f_m * measured; the
/// ComplementFraction compatibility rule subtracts (1 - f_m) * measured
/// instead. The two coincide up to solver error when the stage constraints
/// hold exactly.
enum class ResidualUpdate { RetainedFraction, ComplementFraction };

struct StageTrace {
    int stage = 0;                    // 1-based
    ComplexSignal stage_solution;     // time domain, before scaling by f_m
    ComplexSignal estimate;           // accumulated estimate after this stage
    double rmse = 0.0;                // against the reference, when provided
    double residual_energy = 0.0;     // measured energy of the residual spectrum
    double energy_remaining = 0.0;    // predicted bookkeeping, E_m = (1 - f_m) E_{m-1}
    int iterations_used = 0;
    bool converged = false;
};

struct IterativeResult {
    SolutionReport final;
    std::vector<StageTrace> stages;
    int failed_stage = 0; // first stage whose solve did not converge, 0 if none
};

/// Staged reconstruction over nested horizontal slices with sample reuse.
/// Stage m solves L1 restricted to slice m's support (everything outside is
/// suppressed) using the plan's cumulative samples against the current
/// residual spectrum, then folds f_m of the stage solution into the running
/// estimate. Stage factors must lie in (0, 1], one per slice.
///
/// `true_spectrum` acts as the measurement source; only sampled bins are read.
/// `reference` (time domain), when given, fills the per-stage RMSE trace.
IterativeResult run_iterative(const ComplexSignal& true_spectrum, const SliceSchedule& schedule,
                              const AllocationPlan& plan,
                              const std::vector<double>& stage_factors,
                              const SolverConfig& config,
                              SparsityDomain sparsity = SparsityDomain::Time,
                              ResidualUpdate update_rule = ResidualUpdate::RetainedFraction,
                              const ComplexSignal* reference = nullptr);

} // namespace csalloc

#endif
