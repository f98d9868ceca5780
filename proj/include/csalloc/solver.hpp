#ifndef CSALLOC_SOLVER_HPP
#define CSALLOC_SOLVER_HPP

#include "csalloc/projection.hpp"
#include "csalloc/signal.hpp"

#include <vector>

namespace csalloc {

/// Domain in which the L1 objective is applied. Band signals minimize |s|_1
/// in time; tone signals minimize |dft(s)|_1.
enum class SparsityDomain { Time, Frequency };

struct SolverConfig {
    double tolerance = 1e-7; // split residual, relative to measurement norm
    int max_iterations = 5000;
    double rho = 1.0;        // penalty; shrinkage threshold is 1/(rho*sqrt(N))
    double relaxation = 1.0; // over-relaxation in (0, 2)
    bool record_objective_trace = false;
};

struct SolutionReport {
    ComplexSignal solution; // time domain
    int iterations_used = 0;
    double final_residual = 0.0;
    double objective = 0.0; // sum of moduli in the sparsity domain
    bool converged = false;
    bool residual_stalled = false;
    std::vector<double> objective_trace; // per iteration, when recording is on
};

/// Equality-constrained L1 problem: find the minimum-L1 coefficient vector
/// consistent with the measured rows (selected entries of the spectrum plus
/// explicit zeros on the suppressed block).
class BasisPursuitProblem {
public:
    BasisPursuitProblem(ProjectionOperator op, ComplexSignal measurements,
                        SparsityDomain domain);

    const ProjectionOperator& op() const { return op_; }
    const ComplexSignal& measurements() const { return measurements_; }
    SparsityDomain sparsity_domain() const { return domain_; }
    std::size_t ambient() const { return op_.ambient(); }

private:
    ProjectionOperator op_;
    ComplexSignal measurements_;
    SparsityDomain domain_;
};

/// Basis pursuit via operator splitting: alternate exact projection onto the
/// affine constraint set (cheap, the constraint rows are orthonormal rows of
/// the unitary transform) with complex soft-thresholding. Non-convergence is
/// reported, never silently ignored.
SolutionReport solve_l1(const BasisPursuitProblem& problem, const SolverConfig& config = {});

/// Exhaustive minimum-support search over the sparsity domain for tiny
/// instances (N <= 24, k_max <= 3). Supports are tried in lexicographic
/// order per cardinality; the first feasible one wins.
SolutionReport solve_l0_bruteforce(const BasisPursuitProblem& problem, std::size_t k_max,
                                   const SolverConfig& config = {});

} // namespace csalloc

#endif
