#include "csalloc/solver.hpp"

#include "csalloc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csalloc {

namespace {

using Vec = std::vector<Complex>;

double l2_norm(const Vec& v) {
    double acc = 0.0;
    for (const Complex& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

double l1_norm(const Vec& v) {
    double acc = 0.0;
    for (const Complex& x : v) acc += std::abs(x);
    return acc;
}

double linf_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Modulus shrinkage; preserves phase.
void soft_threshold(const Vec& in, double kappa, Vec& out) {
    for (std::size_t i = 0; i < in.size(); ++i) {
        double mag = std::abs(in[i]);
        out[i] = (mag > kappa) ? in[i] * ((mag - kappa) / mag) : Complex(0.0);
    }
}

// Constraint map in sparsity-domain coordinates. The rows are orthonormal by
// construction, so projection onto {v : A v = b} is v + A^H (b - A v).
struct ConstraintMap {
    const std::vector<std::size_t>& rows;
    std::size_t n;
    bool through_transform; // time sparsity: gather after forward transform

    Vec forward(const Vec& v) const {
        Vec out(rows.size());
        if (through_transform) {
            Vec spectrum = detail::unitary_fft(v, -1);
            for (std::size_t r = 0; r < rows.size(); ++r) out[r] = spectrum[rows[r]];
        } else {
            for (std::size_t r = 0; r < rows.size(); ++r) out[r] = v[rows[r]];
        }
        return out;
    }

    Vec adjoint(const Vec& y) const {
        Vec scattered(n);
        for (std::size_t r = 0; r < rows.size(); ++r) scattered[rows[r]] = y[r];
        if (through_transform) return detail::unitary_fft(scattered, +1);
        return scattered;
    }
};

ComplexSignal coords_to_time(Vec v, SparsityDomain domain) {
    if (domain == SparsityDomain::Frequency)
        return idft(ComplexSignal(std::move(v), Domain::Frequency));
    return ComplexSignal(std::move(v), Domain::Time);
}

} // namespace

BasisPursuitProblem::BasisPursuitProblem(ProjectionOperator op, ComplexSignal measurements,
                                         SparsityDomain domain)
    : op_(std::move(op)), measurements_(std::move(measurements)), domain_(domain) {
    if (measurements_.size() != op_.rows())
        throw std::invalid_argument("BasisPursuitProblem: measurement length != operator rows");
    // Suppressed rows carry the out-band zeros; anything else is inconsistent
    // with the extended-measurement structure.
    for (std::size_t i = op_.selected().size(); i < measurements_.size(); ++i)
        if (measurements_[i] != Complex(0.0))
            throw std::invalid_argument("BasisPursuitProblem: suppressed block must be zero");
}

SolutionReport solve_l1(const BasisPursuitProblem& problem, const SolverConfig& config) {
    if (config.tolerance <= 0.0 || config.max_iterations < 1 || config.rho <= 0.0 ||
        config.relaxation <= 0.0 || config.relaxation >= 2.0)
        throw std::invalid_argument("solve_l1: invalid solver configuration");

    const std::size_t n = problem.ambient();
    const std::vector<std::size_t> rows = problem.op().constrained_rows();
    const ConstraintMap map{rows, n, problem.sparsity_domain() == SparsityDomain::Time};

    const Vec& b_raw = problem.measurements().values();
    const double scale = l2_norm(b_raw);

    SolutionReport report;
    if (scale == 0.0 || rows.empty()) {
        report.solution = coords_to_time(Vec(n), problem.sparsity_domain());
        report.converged = true;
        return report;
    }

    Vec b(b_raw.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = b_raw[i] / scale;

    const double kappa = 1.0 / (config.rho * std::sqrt(static_cast<double>(n)));
    const double alpha = config.relaxation;

    Vec x(n), z(n), u(n), w(n), xhat(n), residual_rows(rows.size());
    double split_residual = 0.0;

    // Every projected iterate is exactly feasible; the incumbent is the one
    // with the smallest L1 objective seen so far and is what gets returned.
    Vec best_x;
    double best_objective = 0.0;

    // Stall window for flagging runs whose residual stopped improving.
    const int window = 100;
    std::vector<double> recent;
    recent.reserve(static_cast<std::size_t>(config.max_iterations));

    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) w[i] = z[i] - u[i];

        // Exact projection onto the affine constraint set.
        Vec aw = map.forward(w);
        for (std::size_t r = 0; r < rows.size(); ++r) residual_rows[r] = b[r] - aw[r];
        Vec correction = map.adjoint(residual_rows);
        for (std::size_t i = 0; i < n; ++i) x[i] = w[i] + correction[i];

        for (std::size_t i = 0; i < n; ++i) xhat[i] = alpha * x[i] + (1.0 - alpha) * z[i];
        for (std::size_t i = 0; i < n; ++i) w[i] = xhat[i] + u[i];
        soft_threshold(w, kappa, z);
        for (std::size_t i = 0; i < n; ++i) u[i] += xhat[i] - z[i];

        const double objective = l1_norm(x);
        if (best_x.empty() || objective < best_objective) {
            best_objective = objective;
            best_x = x;
        }
        if (config.record_objective_trace)
            report.objective_trace.push_back(best_objective * scale);

        split_residual = linf_diff(x, z);
        recent.push_back(split_residual);
        if (split_residual <= config.tolerance) {
            ++iter;
            break;
        }
    }

    report.iterations_used = iter;
    report.final_residual = split_residual;
    report.converged = split_residual <= config.tolerance;
    report.objective = best_objective * scale;
    if (!report.converged && static_cast<int>(recent.size()) > window) {
        double past = recent[recent.size() - 1 - window];
        report.residual_stalled = split_residual >= 0.999 * past;
    }

    for (std::size_t i = 0; i < n; ++i) best_x[i] *= scale;
    report.solution = coords_to_time(std::move(best_x), problem.sparsity_domain());
    return report;
}

namespace {

// Least squares for a tiny complex system via normal equations with
// partial-pivot elimination. Columns are orthonormal-ish rows of the
// transform, so conditioning is benign at these sizes.
Vec least_squares(const std::vector<Vec>& columns, const Vec& b, double& residual_out) {
    const std::size_t s = columns.size();
    const std::size_t m = b.size();
    std::vector<Vec> gram(s, Vec(s));
    Vec rhs(s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            Complex acc = 0.0;
            for (std::size_t r = 0; r < m; ++r) acc += std::conj(columns[i][r]) * columns[j][r];
            gram[i][j] = acc;
        }
        Complex acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += std::conj(columns[i][r]) * b[r];
        rhs[i] = acc;
    }

    std::vector<std::size_t> perm(s);
    for (std::size_t i = 0; i < s; ++i) perm[i] = i;
    for (std::size_t col = 0; col < s; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < s; ++r)
            if (std::abs(gram[r][col]) > std::abs(gram[pivot][col])) pivot = r;
        std::swap(gram[col], gram[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        if (std::abs(gram[col][col]) < 1e-14) {
            residual_out = l2_norm(b); // singular support, treat as infeasible
            return Vec(s);
        }
        for (std::size_t r = col + 1; r < s; ++r) {
            Complex factor = gram[r][col] / gram[col][col];
            for (std::size_t c = col; c < s; ++c) gram[r][c] -= factor * gram[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    Vec coeff(s);
    for (std::size_t i = s; i-- > 0;) {
        Complex acc = rhs[i];
        for (std::size_t j = i + 1; j < s; ++j) acc -= gram[i][j] * coeff[j];
        coeff[i] = acc / gram[i][i];
    }

    Vec fitted(m);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t r = 0; r < m; ++r) fitted[r] += coeff[i] * columns[i][r];
    double acc = 0.0;
    for (std::size_t r = 0; r < m; ++r) acc += std::norm(fitted[r] - b[r]);
    residual_out = std::sqrt(acc);
    return coeff;
}

Vec basis_column(std::size_t position, const std::vector<std::size_t>& rows, std::size_t n,
                 bool through_transform) {
    Vec column(rows.size());
    if (through_transform) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double angle = -2.0 * std::numbers::pi * static_cast<double>(rows[r]) *
                           static_cast<double>(position) / static_cast<double>(n);
            column[r] = scale * Complex(std::cos(angle), std::sin(angle));
        }
    } else {
        for (std::size_t r = 0; r < rows.size(); ++r)
            column[r] = (rows[r] == position) ? 1.0 : 0.0;
    }
    return column;
}

} // namespace

SolutionReport solve_l0_bruteforce(const BasisPursuitProblem& problem, std::size_t k_max,
                                   const SolverConfig& config) {
    const std::size_t n = problem.ambient();
    if (n > 24 || k_max > 3)
        throw std::invalid_argument("solve_l0_bruteforce: guard is N <= 24 and k_max <= 3");

    const std::vector<std::size_t> rows = problem.op().constrained_rows();
    const bool through_transform = problem.sparsity_domain() == SparsityDomain::Time;
    const Vec& b = problem.measurements().values();
    const double feas_tol = std::max(config.tolerance, 1e-9) * (1.0 + l2_norm(b));

    SolutionReport report;
    report.solution = coords_to_time(Vec(n), problem.sparsity_domain());

    if (l2_norm(b) <= feas_tol) {
        report.converged = true;
        return report;
    }

    std::vector<Vec> all_columns(n);
    for (std::size_t i = 0; i < n; ++i)
        all_columns[i] = basis_column(i, rows, n, through_transform);

    int tried = 0;
    for (std::size_t size = 1; size <= k_max; ++size) {
        // lexicographic enumeration of supports of this cardinality
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            std::vector<Vec> columns;
            columns.reserve(size);
            for (std::size_t i : idx) columns.push_back(all_columns[i]);
            double residual = 0.0;
            Vec coeff = least_squares(columns, b, residual);
            ++tried;
            if (residual <= feas_tol) {
                Vec sparse(n);
                double obj = 0.0;
                for (std::size_t i = 0; i < size; ++i) {
                    sparse[idx[i]] = coeff[i];
                    obj += std::abs(coeff[i]);
                }
                report.solution = coords_to_time(std::move(sparse), problem.sparsity_domain());
                report.converged = true;
                report.final_residual = residual;
                report.objective = obj;
                report.iterations_used = tried;
                return report;
            }
            // next combination
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
    }

    report.converged = false; // no feasible support within k_max
    report.iterations_used = tried;
    report.final_residual = l2_norm(b);
    return report;
}

} // namespace csalloc
