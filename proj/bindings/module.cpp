#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ionqec/analytics.hpp"
#include "ionqec/estimator.hpp"

namespace py = pybind11;
using namespace ionqec;

PYBIND11_MODULE(_core, m) {
    m.doc() = "trapped-ion QEC crosstalk simulation core";

    py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y).value("Z", Axis::Z);
    py::enum_<Basis>(m, "Basis").value("Plus", Basis::Plus).value("Zero", Basis::Zero);
    py::enum_<BackendKind>(m, "BackendKind")
        .value("Tableau", BackendKind::Tableau)
        .value("Dense", BackendKind::Dense)
        .value("Paths", BackendKind::Paths);
    py::enum_<CrosstalkMode>(m, "CrosstalkMode")
        .value("Off", CrosstalkMode::Off)
        .value("EntanglingCoherent", CrosstalkMode::EntanglingCoherent)
        .value("EntanglingIncoherent", CrosstalkMode::EntanglingIncoherent)
        .value("StarkCoherent", CrosstalkMode::StarkCoherent)
        .value("StarkIncoherent", CrosstalkMode::StarkIncoherent);
    py::enum_<RefocusMode>(m, "RefocusMode")
        .value("Structural", RefocusMode::Structural)
        .value("Residual", RefocusMode::Residual);

    py::class_<Rng>(m, "Rng")
        .def(py::init<uint64_t>(), py::arg("seed"))
        .def_static("for_trial", &Rng::for_trial, py::arg("master_seed"), py::arg("trial_index"))
        .def("uniform", &Rng::uniform)
        .def("bit", &Rng::bit);

    py::class_<PauliString>(m, "PauliString")
        .def(py::init<size_t>(), py::arg("n"))
        .def_static("from_str", &PauliString::from_str)
        .def("__str__", &PauliString::str)
        .def("__mul__", [](const PauliString& a, const PauliString& b) { return a * b; })
        .def("commutes_with", &PauliString::commutes_with)
        .def("weight", &PauliString::weight)
        .def_property_readonly("num_qubits", &PauliString::num_qubits);

    py::class_<MeasureResult>(m, "MeasureResult")
        .def_readonly("outcome", &MeasureResult::outcome)
        .def_readonly("was_random", &MeasureResult::was_random);

    py::class_<StabilizerTableau>(m, "StabilizerTableau")
        .def(py::init<size_t>(), py::arg("n"))
        .def("h", &StabilizerTableau::h)
        .def("s", &StabilizerTableau::s)
        .def("x", &StabilizerTableau::x)
        .def("y", &StabilizerTableau::y)
        .def("z", &StabilizerTableau::z)
        .def("cnot", &StabilizerTableau::cnot)
        .def("ms", &StabilizerTableau::ms, py::arg("a"), py::arg("b"), py::arg("positive") = true)
        .def("apply_pauli", &StabilizerTableau::apply_pauli)
        .def("measure_z", &StabilizerTableau::measure_z)
        .def("expectation", &StabilizerTableau::expectation)
        .def("check_invariants", &StabilizerTableau::check_invariants);

    py::class_<DenseState>(m, "DenseState")
        .def(py::init<size_t>(), py::arg("n"))
        .def("rotate", &DenseState::rotate)
        .def("xx", &DenseState::xx)
        .def("h", &DenseState::h)
        .def("cnot", &DenseState::cnot)
        .def("apply_pauli", &DenseState::apply_pauli)
        .def("branch_probs", &DenseState::branch_probs)
        .def("measure_z", &DenseState::measure_z)
        .def("project", &DenseState::project)
        .def("norm", &DenseState::norm)
        .def("fidelity", &DenseState::fidelity)
        .def_property_readonly("amplitudes",
                               [](const DenseState& s) { return s.amplitudes(); });

    py::class_<NoiseParams>(m, "NoiseParams")
        .def(py::init<>())
        .def_readwrite("p_1q", &NoiseParams::p_1q)
        .def_readwrite("p_ms", &NoiseParams::p_ms)
        .def_readwrite("p_c", &NoiseParams::p_c)
        .def_readwrite("crosstalk_mode", &NoiseParams::crosstalk_mode)
        .def_readwrite("refocussing", &NoiseParams::refocussing)
        .def_readwrite("refocus_mode", &NoiseParams::refocus_mode)
        .def_readwrite("p_sp", &NoiseParams::p_sp)
        .def_readwrite("p_m", &NoiseParams::p_m)
        .def_readwrite("t1_s", &NoiseParams::t1_s)
        .def_readwrite("t2_s", &NoiseParams::t2_s)
        .def_readwrite("p_sg", &NoiseParams::p_sg)
        .def_readwrite("idle_noise", &NoiseParams::idle_noise)
        .def("validate", &NoiseParams::validate)
        .def("crosstalk_angle", &NoiseParams::crosstalk_angle)
        .def("stark_mu", &NoiseParams::stark_mu);

    py::class_<TrialOutcome>(m, "TrialOutcome")
        .def_readonly("logical_failure", &TrialOutcome::logical_failure)
        .def_readonly("flags_raised", &TrialOutcome::flags_raised)
        .def_readonly("rounds_run", &TrialOutcome::rounds_run)
        .def_readonly("prep_restarts", &TrialOutcome::prep_restarts);

    py::class_<LogicalErrorEstimate>(m, "LogicalErrorEstimate")
        .def_readonly("p_log", &LogicalErrorEstimate::p_log)
        .def_readonly("err", &LogicalErrorEstimate::err)
        .def_readonly("n_samples", &LogicalErrorEstimate::n_samples)
        .def_readonly("n_failures", &LogicalErrorEstimate::n_failures)
        .def_readonly("cap_hit", &LogicalErrorEstimate::cap_hit)
        .def_readonly("exact", &LogicalErrorEstimate::exact)
        .def("__repr__", [](const LogicalErrorEstimate& e) {
            char buf[96];
            snprintf(buf, sizeof buf, "LogicalErrorEstimate(p_log=%g, err=%g, n=%llu)", e.p_log,
                     e.err, static_cast<unsigned long long>(e.n_samples));
            return std::string(buf);
        });

    py::class_<SteaneExperiment>(m, "SteaneExperiment")
        .def(py::init([](Basis basis, const NoiseParams& np, BackendKind backend) {
                 return SteaneExperiment(basis, np, backend);
             }),
             py::arg("basis"), py::arg("noise"), py::arg("backend"))
        .def("run_trial", [](const SteaneExperiment& e, uint64_t master_seed, uint64_t trial) {
            Rng rng = Rng::for_trial(master_seed, trial);
            return e.run_trial(rng);
        });

    m.def("monte_carlo", &monte_carlo, py::arg("experiment"), py::arg("n_samples"),
          py::arg("master_seed"), py::arg("jobs") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("adaptive_sample", &adaptive_sample, py::arg("experiment"), py::arg("rel_target"),
          py::arg("abs_target"), py::arg("cap"), py::arg("master_seed"), py::arg("jobs") = 0,
          py::arg("first_batch") = 4096, py::call_guard<py::gil_scoped_release>());
    m.def(
        "enumerate_paths",
        [](const SteaneExperiment& e) {
            double wsum = 0;
            uint64_t leaves = 0;
            double p;
            {
                py::gil_scoped_release release;
                p = enumerate_paths(e, &wsum, &leaves);
            }
            return py::make_tuple(p, wsum, leaves);
        },
        py::arg("experiment"));
    m.def("log_grid", &log_grid);

    m.def("eps_ct_ms", &eps_ct_ms);
    m.def("eps_ct_off", &eps_ct_off);
    m.def("eps_ct_dw", &eps_ct_dw);
    m.def("eps_ct_loops", &eps_ct_loops);
    m.def("eps_ct_deph", &eps_ct_deph);
    m.def("eps_ct_int", &eps_ct_int);
    m.def("chi", &chi);
    m.def("single_qubit_ct_angle", &single_qubit_ct_angle);
    m.def("channel_rates", [](double eps_ms, double eps_ct, int n, int msp) {
        ChannelRates r = channel_rates(eps_ms, eps_ct, n, msp);
        return py::make_tuple(r.p_ms, r.p_ct, r.n_ms, r.n_ct);
    });
}
