#include "csalloc/allocation.hpp"
#include "csalloc/fft.hpp"
#include "csalloc/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace csalloc;

namespace {

ComplexSignal gather_measurements(const ComplexSignal& spectrum, const ProjectionOperator& op) {
    std::vector<Complex> b;
    b.reserve(op.rows());
    for (std::size_t k : op.selected().indices()) b.push_back(spectrum[k]);
    b.resize(op.rows());
    return ComplexSignal(std::move(b), Domain::Frequency);
}

std::vector<std::size_t> support_of(const ComplexSignal& s, double threshold) {
    double peak = 0.0;
    for (const Complex& v : s.values()) peak = std::max(peak, std::abs(v));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s[i]) > threshold * peak) out.push_back(i);
    return out;
}

double signal_rmse(const ComplexSignal& a, const ComplexSignal& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

} // namespace

TEST_CASE("single tone recovers exactly from one extended measurement") {
    const std::size_t n = 64, k = 17;
    ComplexSignal spectrum = ComplexSignal::zeros(n, Domain::Frequency);
    spectrum[k] = Complex(1.4, -0.6);
    ComplexSignal truth = idft(spectrum);

    ProjectionOperator op = extend(ProjectionOperator(IndexSet({k}, n)));
    BasisPursuitProblem problem(op, gather_measurements(spectrum, op),
                                SparsityDomain::Frequency);
    SolutionReport report = solve_l1(problem);
    CHECK(report.converged);
    CHECK(signal_rmse(truth, report.solution) < 1e-6);
}

TEST_CASE("fully determined system returns the inverse transform") {
    auto raw = oracle::random_signal(32, 5);
    ComplexSignal s(raw, Domain::Time);
    ComplexSignal spectrum = dft(s);

    ProjectionOperator full(IndexSet::full(32));
    BasisPursuitProblem problem(full, spectrum, SparsityDomain::Time);
    SolutionReport report = solve_l1(problem);
    CHECK(report.converged);
    CHECK(oracle::max_abs_diff(report.solution.values(), raw) < 1e-6);
}

TEST_CASE("1-sparse impulse matches the brute-force oracle") {
    const std::size_t n = 16;
    ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
    truth[11] = Complex(0.8, 1.1);
    ComplexSignal spectrum = dft(truth);

    ProjectionOperator op(sample_urs(n, 8, 424242));
    BasisPursuitProblem problem(op, gather_measurements(spectrum, op), SparsityDomain::Time);

    SolutionReport l1 = solve_l1(problem);
    SolutionReport l0 = solve_l0_bruteforce(problem, 1);
    REQUIRE(l1.converged);
    REQUIRE(l0.converged);
    CHECK(support_of(l0.solution, 1e-4) == std::vector<std::size_t>{11});
    CHECK(support_of(l1.solution, 1e-4) == std::vector<std::size_t>{11});
    CHECK(oracle::max_abs_diff(l1.solution.values(), l0.solution.values()) < 1e-6);
}

TEST_CASE("l0 oracle pinpoints a tiny impulse") {
    const std::size_t n = 8;
    ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
    truth[5] = Complex(-2.0, 0.3);
    ComplexSignal spectrum = dft(truth);

    ProjectionOperator op(sample_urs(n, 4, 7));
    BasisPursuitProblem problem(op, gather_measurements(spectrum, op), SparsityDomain::Time);
    SolutionReport report = solve_l0_bruteforce(problem, 1);
    REQUIRE(report.converged);
    CHECK(std::abs(report.solution[5] - Complex(-2.0, 0.3)) < 1e-9);
}

TEST_CASE("l0 oracle returns the zero solution for zero measurements") {
    ProjectionOperator op(IndexSet({1, 3, 5}, 12));
    BasisPursuitProblem problem(op, ComplexSignal::zeros(3, Domain::Frequency),
                                SparsityDomain::Time);
    SolutionReport report = solve_l0_bruteforce(problem, 2);
    CHECK(report.converged);
    for (std::size_t i = 0; i < 12; ++i) CHECK(report.solution[i] == Complex(0.0));
}

TEST_CASE("l0 oracle reports infeasibility when the sparsity cap is too low") {
    const std::size_t n = 12;
    ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
    truth[1] = 1.0;
    truth[4] = 1.0;
    truth[9] = 1.0; // 3-sparse, cap at 1
    ComplexSignal spectrum = dft(truth);
    ProjectionOperator op(IndexSet::full(n));
    BasisPursuitProblem problem(op, spectrum, SparsityDomain::Time);
    CHECK_FALSE(solve_l0_bruteforce(problem, 1).converged);
}

TEST_CASE("l0 guard rejects large instances") {
    ProjectionOperator op(IndexSet({0}, 32));
    BasisPursuitProblem problem(op, ComplexSignal::zeros(1, Domain::Frequency),
                                SparsityDomain::Time);
    CHECK_THROWS_AS(solve_l0_bruteforce(problem, 1), std::invalid_argument);
}

TEST_CASE("l1 and l0 agree on 2-sparse supports in most seeded trials") {
    const std::size_t n = 12, m = 7;
    int agree = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937 gen(900 + trial);
        std::size_t p1 = gen() % n, p2 = (p1 + 1 + gen() % (n - 1)) % n;
        ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
        truth[p1] = Complex(1.0 + (gen() % 100) / 100.0, 0.3);
        truth[p2] = Complex(-0.9, 0.5 + (gen() % 100) / 200.0);
        ComplexSignal spectrum = dft(truth);

        ProjectionOperator op(sample_urs(n, m, 5000 + trial));
        BasisPursuitProblem problem(op, gather_measurements(spectrum, op), SparsityDomain::Time);
        SolutionReport l1 = solve_l1(problem);
        SolutionReport l0 = solve_l0_bruteforce(problem, 2);
        if (!l1.converged || !l0.converged) continue;
        if (support_of(l1.solution, 1e-4) == support_of(l0.solution, 1e-4)) ++agree;
    }
    CHECK(agree >= 95);
}

TEST_CASE("feasibility of converged solutions") {
    const std::size_t n = 64;
    ComplexSignal spectrum = generate_spectrum(flat_band(20, 31), n);
    ComplexSignal truth = idft(spectrum);

    ProjectionOperator op =
        ProjectionOperator(sample_inband({{20, 31, 1.0}}, n, 12, 3).all_samples(),
                           complement(IndexSet(flat_band(20, 31).support(), n)));
    BasisPursuitProblem problem(op, gather_measurements(dft(truth), op), SparsityDomain::Time);
    SolverConfig config;
    SolutionReport report = solve_l1(problem, config);
    REQUIRE(report.converged);

    ComplexSignal remeasured = measure(op, report.solution);
    double worst = 0.0;
    for (std::size_t i = 0; i < remeasured.size(); ++i)
        worst = std::max(worst, std::abs(remeasured[i] - problem.measurements()[i]));
    CHECK(worst <= 10.0 * config.tolerance);
}

TEST_CASE("suppressed bins of the solution are forced to zero") {
    const std::size_t n = 64;
    ComplexSignal spectrum = generate_spectrum(flat_band(10, 21), n);
    ComplexSignal truth = idft(spectrum);

    ProjectionOperator op(sample_inband({{10, 21, 1.0}}, n, 9, 11).all_samples(),
                          complement(IndexSet(flat_band(10, 21).support(), n)));
    BasisPursuitProblem problem(op, gather_measurements(dft(truth), op), SparsityDomain::Time);
    SolverConfig config;
    SolutionReport report = solve_l1(problem, config);
    REQUIRE(report.converged);

    ComplexSignal rec_spectrum = dft(report.solution);
    for (std::size_t k : op.suppressed().indices())
        CHECK(std::abs(rec_spectrum[k]) <= 10.0 * config.tolerance);
}

TEST_CASE("objective sequence is nonincreasing after burn-in") {
    const std::size_t n = 64;
    ComplexSignal spectrum = generate_spectrum(flat_band(12, 41), n);
    ComplexSignal truth = idft(spectrum);

    ProjectionOperator op(sample_inband({{12, 41, 1.0}}, n, 15, 77).all_samples(),
                          complement(IndexSet(flat_band(12, 41).support(), n)));
    BasisPursuitProblem problem(op, gather_measurements(dft(truth), op), SparsityDomain::Time);

    SolverConfig config;
    config.record_objective_trace = true;
    SolutionReport report = solve_l1(problem, config);
    REQUIRE(report.objective_trace.size() > 20);
    for (std::size_t i = 11; i < report.objective_trace.size(); ++i)
        CHECK(report.objective_trace[i] <=
              report.objective_trace[i - 1] * (1.0 + 1e-7) + 1e-12);
}

TEST_CASE("solutions scale with the measurements") {
    const std::size_t n = 32;
    ComplexSignal truth = ComplexSignal::zeros(n, Domain::Time);
    truth[3] = Complex(1.0, 0.2);
    truth[20] = Complex(0.0, -1.3);
    ComplexSignal spectrum = dft(truth);

    ProjectionOperator op(sample_urs(n, 14, 31337));
    ComplexSignal b = gather_measurements(spectrum, op);

    const Complex c(2.0, -3.0);
    std::vector<Complex> scaled = b.values();
    for (Complex& v : scaled) v *= c;

    SolutionReport base = solve_l1(BasisPursuitProblem(op, b, SparsityDomain::Time));
    SolutionReport scaled_report = solve_l1(
        BasisPursuitProblem(op, ComplexSignal(scaled, Domain::Frequency), SparsityDomain::Time));
    REQUIRE(base.converged);
    REQUIRE(scaled_report.converged);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(scaled_report.solution[i] - c * base.solution[i]));
    CHECK(worst < 1e-5);
}

TEST_CASE("non-convergence is reported, never silent") {
    const std::size_t n = 64;
    auto raw = oracle::random_signal(n, 77); // dense target, few samples
    ComplexSignal spectrum = dft(ComplexSignal(raw, Domain::Time));

    ProjectionOperator op(sample_urs(n, 6, 1));
    BasisPursuitProblem problem(op, gather_measurements(spectrum, op), SparsityDomain::Time);
    SolverConfig config;
    config.max_iterations = 3;
    SolutionReport report = solve_l1(problem, config);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations_used == 3);
    CHECK(report.solution.size() == n);
}

TEST_CASE("nonzero suppressed measurements are rejected up front") {
    ProjectionOperator ext = extend(ProjectionOperator(IndexSet({2}, 8)));
    std::vector<Complex> bad(8, Complex(0.0));
    bad[0] = Complex(1.0);
    bad[5] = Complex(0.25); // inside the suppressed block
    CHECK_THROWS_AS(BasisPursuitProblem(ext, ComplexSignal(bad, Domain::Frequency),
                                        SparsityDomain::Time),
                    std::invalid_argument);
}

TEST_CASE("zero measurements give the zero solution immediately") {
    ProjectionOperator op(IndexSet({1, 2, 3}, 16));
    BasisPursuitProblem problem(op, ComplexSignal::zeros(3, Domain::Frequency),
                                SparsityDomain::Time);
    SolutionReport report = solve_l1(problem);
    CHECK(report.converged);
    CHECK(report.iterations_used == 0);
    for (std::size_t i = 0; i < 16; ++i) CHECK(report.solution[i] == Complex(0.0));
}
