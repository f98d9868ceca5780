#include "csalloc/experiment.hpp"
#include "csalloc/fft.hpp"
#include "csalloc/iterative.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace csalloc;

namespace {

using CVec = std::vector<Complex>;

SparsityDomain parse_domain(const std::string& name) {
    if (name == "time") return SparsityDomain::Time;
    if (name == "frequency") return SparsityDomain::Frequency;
    throw std::invalid_argument("sparsity domain must be 'time' or 'frequency'");
}

ProjectionOperator make_operator(const std::vector<std::size_t>& selected, std::size_t n,
                                 bool extended) {
    ProjectionOperator op{IndexSet(selected, n)};
    return extended ? extend(op) : op;
}

py::dict report_to_dict(const SolutionReport& report) {
    py::dict d;
    d["solution"] = report.solution.values();
    d["iterations_used"] = report.iterations_used;
    d["final_residual"] = report.final_residual;
    d["objective"] = report.objective;
    d["converged"] = report.converged;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "frequency-domain compressive sampling and sample allocation";
    m.attr("__version__") = "1.0.0";

    py::class_<BandSpec>(m, "BandSpec")
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("start"), py::arg("width"),
             py::arg("amplitude") = 1.0)
        .def_readwrite("start", &BandSpec::start)
        .def_readwrite("width", &BandSpec::width)
        .def_readwrite("amplitude", &BandSpec::amplitude);

    py::class_<SpectrumProfile>(m, "SpectrumProfile")
        .def_readonly("bands", &SpectrumProfile::bands)
        .def_property_readonly("peak", &SpectrumProfile::peak)
        .def("support", &SpectrumProfile::support);

    m.def("flat_band", &flat_band, py::arg("start"), py::arg("width"),
          py::arg("amplitude") = 1.0);
    m.def("multi_band", [](const std::vector<BandSpec>& bands) {
        SpectrumProfile profile;
        profile.kind = ProfileKind::MultiBand;
        profile.bands = bands;
        return profile;
    });
    m.def("stepwise", &stepwise, py::arg("start"), py::arg("widths"), py::arg("amplitudes"));
    m.def("dyadic_stepwise", &dyadic_stepwise, py::arg("start"), py::arg("base_width"),
          py::arg("num_bands"), py::arg("amplitude") = 1.0);
    m.def("triangular", &triangular, py::arg("start"), py::arg("width"), py::arg("peak") = 1.0);
    m.def("power_law", &power_law, py::arg("start"), py::arg("width"), py::arg("peak"),
          py::arg("exponent"));

    m.def(
        "dft", [](const CVec& signal) { return dft(ComplexSignal(signal, Domain::Time)).values(); },
        "unitary forward transform of a time-domain vector");
    m.def("idft", [](const CVec& spectrum) {
        return idft(ComplexSignal(spectrum, Domain::Frequency)).values();
    });
    m.def("energy", [](const CVec& v) { return energy(ComplexSignal(v, Domain::Time)); });
    m.def(
        "generate_spectrum",
        [](const SpectrumProfile& profile, std::size_t n, bool random_phase,
           std::uint64_t phase_seed) {
            return generate_spectrum(profile, n,
                                     random_phase ? PhaseMode::Random : PhaseMode::Zero,
                                     phase_seed)
                .values();
        },
        py::arg("profile"), py::arg("n"), py::arg("random_phase") = false,
        py::arg("phase_seed") = 0);
    m.def("main_lobe_width", &main_lobe_width, py::arg("band_width"), py::arg("n"));
    m.def(
        "flat_band_closed_form",
        [](std::size_t n, std::size_t k0, std::size_t width, double amplitude) {
            return flat_band_closed_form(n, k0, width, amplitude).values();
        },
        py::arg("n"), py::arg("k0"), py::arg("width"), py::arg("amplitude") = 1.0);

    m.def(
        "complement",
        [](const std::vector<std::size_t>& sel, std::size_t n) {
            return complement(IndexSet(sel, n)).indices();
        },
        py::arg("indices"), py::arg("n"));
    m.def(
        "measure",
        [](const std::vector<std::size_t>& selected, std::size_t n, bool extended,
           const CVec& signal) {
            return measure(make_operator(selected, n, extended),
                           ComplexSignal(signal, Domain::Time))
                .values();
        },
        py::arg("selected"), py::arg("n"), py::arg("extended"), py::arg("signal"));
    m.def(
        "apply_adjoint",
        [](const std::vector<std::size_t>& selected, std::size_t n, bool extended,
           const CVec& y) {
            return apply_adjoint(make_operator(selected, n, extended),
                                 ComplexSignal(y, Domain::Frequency))
                .values();
        },
        py::arg("selected"), py::arg("n"), py::arg("extended"), py::arg("y"));

    m.def(
        "sample_urs",
        [](std::size_t n, std::size_t m, std::uint64_t seed) {
            return sample_urs(n, m, seed).indices();
        },
        py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def(
        "sample_inband",
        [](const std::vector<BandSpec>& bands, std::size_t n, std::size_t m,
           std::uint64_t seed) {
            AllocationPlan plan = sample_inband(bands, n, m, seed);
            py::dict d;
            d["per_band_counts"] = plan.per_band_counts;
            std::vector<std::vector<std::size_t>> sets;
            for (const IndexSet& s : plan.sampled_sets) sets.push_back(s.indices());
            d["sampled_sets"] = sets;
            d["all"] = plan.all_samples().indices();
            return d;
        },
        py::arg("bands"), py::arg("n"), py::arg("m"), py::arg("seed"));
    m.def(
        "allocate_dyadic",
        [](std::size_t m, const std::string& scheme) {
            return allocate_dyadic(m, scheme_from_name(scheme));
        },
        py::arg("m"), py::arg("scheme"));
    m.def(
        "density_profile",
        [](std::size_t m0, std::size_t k_max, const std::string& law) {
            if (law == "inverse_linear")
                return density_profile(m0, k_max, DensityLaw::InverseLinear);
            if (law == "inverse_square")
                return density_profile(m0, k_max, DensityLaw::InverseSquare);
            throw std::invalid_argument("law must be 'inverse_linear' or 'inverse_square'");
        },
        py::arg("m0"), py::arg("k_max"), py::arg("law") = "inverse_square");
    m.def(
        "horizontal_slices",
        [](const SpectrumProfile& profile, std::size_t n, std::size_t b) {
            SliceSchedule schedule = horizontal_slices(profile, n, b);
            py::list out;
            for (const Slice& s : schedule.slices) {
                py::dict d;
                d["support"] = s.support.indices();
                d["floor"] = s.floor;
                d["ceiling"] = s.ceiling;
                out.append(d);
            }
            return out;
        },
        py::arg("profile"), py::arg("n"), py::arg("b"));
    m.def("estimate_min_samples", &estimate_min_samples, py::arg("k"), py::arg("n"),
          py::arg("c") = 2.0);
    m.def("scale_factor", &scale_factor, py::arg("beta"));

    m.def(
        "solve_l1",
        [](const std::vector<std::size_t>& selected, std::size_t n, bool extended,
           const CVec& measurements, const std::string& sparsity, double tolerance,
           int max_iterations) {
            SolverConfig config;
            config.tolerance = tolerance;
            config.max_iterations = max_iterations;
            BasisPursuitProblem problem(make_operator(selected, n, extended),
                                        ComplexSignal(measurements, Domain::Frequency),
                                        parse_domain(sparsity));
            return report_to_dict(solve_l1(problem, config));
        },
        py::arg("selected"), py::arg("n"), py::arg("extended"), py::arg("measurements"),
        py::arg("sparsity") = "time", py::arg("tolerance") = 1e-7,
        py::arg("max_iterations") = 5000);
    m.def(
        "solve_l0_bruteforce",
        [](const std::vector<std::size_t>& selected, std::size_t n, const CVec& measurements,
           std::size_t k_max, const std::string& sparsity) {
            BasisPursuitProblem problem(make_operator(selected, n, false),
                                        ComplexSignal(measurements, Domain::Frequency),
                                        parse_domain(sparsity));
            return report_to_dict(solve_l0_bruteforce(problem, k_max));
        },
        py::arg("selected"), py::arg("n"), py::arg("measurements"), py::arg("k_max"),
        py::arg("sparsity") = "time");

    m.def("rmse", [](const CVec& reference, const CVec& estimate) {
        return rmse(ComplexSignal(reference, Domain::Time),
                    ComplexSignal(estimate, Domain::Time));
    });

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& output_dir) {
            ExperimentConfig config = parse_config(config_json);
            const bool write = !output_dir.empty();
            if (write) config.output_dir = output_dir;
            ExperimentOutcome outcome = run_experiment(config, write);
            py::list summary;
            for (const SchemeSummary& s : outcome.summary) {
                py::dict d;
                d["scheme"] = s.scheme;
                d["trials"] = s.trials;
                d["mean_rmse"] = s.mean_rmse;
                d["std_rmse"] = s.std_rmse;
                d["converged"] = s.converged_count;
                summary.append(d);
            }
            py::dict out;
            out["summary"] = summary;
            out["failed_trials"] = outcome.failed_trials;
            out["total_trials"] = outcome.total_trials;
            out["written_files"] = outcome.written_files;
            return out;
        },
        py::arg("config_json"), py::arg("output_dir") = "",
        "run a full experiment from a JSON config string; writes CSV/SVG artifacts when "
        "output_dir is given");
}
