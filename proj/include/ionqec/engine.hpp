#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ionqec/circuit.hpp"
#include "ionqec/dense.hpp"
#include "ionqec/noise.hpp"
#include "ionqec/tableau.hpp"

namespace ionqec {

enum class OpKind : uint8_t { Idle, Prep, Rot, Ms, Measure, Repump };

/// One crosstalk insertion attached to an MS event. For the entangling
/// model, (g, n) with the XX rotation argument and the incoherent flip
/// probability; for the Stark model g is unused and angle is the Z rotation
/// argument.
struct CtEntry {
    int g = 0;
    int n = 0;
    double angle = 0.0;
    double p_incoh = 0.0;
};

struct PlanOp {
    OpKind kind;
    RotAxis axis = RotAxis::X;
    int cliff = 0;          // quarter turns: +-1, 2 = pi, 0 = identity, 9 = dense-only
    int a = 0, b = 0;       // ion positions (1-based)
    int cbit = -1;
    double theta = 0.0;
    int aux = -1;           // Idle: idle-rate index; Ms: first CtEntry
    int aux2 = 0;           // Ms: CtEntry count
    int ms_channel = -1;    // index into channels
    int noise_draws = 0;    // Ms: channel draws at this op
    bool apply_gate = true; // false for the deferred first half of a fused pair
    double fused_theta = 0; // gate angle actually applied when fused
};

/// A circuit lowered against a noise model: gate ops interleaved with idle
/// noise, SPAM, crosstalk and channel draws, with all probabilities and
/// Clifford codes resolved up front so running a trial only samples and
/// applies.
struct ExecPlan {
    int num_ions = 0;
    int num_cbits = 0;
    CrosstalkMode ct_mode = CrosstalkMode::Off;
    bool residual_refocus = false;
    int residual_channel = -1;
    double leak_frac = 0.0;
    std::vector<PlanOp> ops;
    std::vector<IdleRates> idle_tbl;
    std::vector<CtEntry> ct;
    std::vector<KrausChannel> channels;  // [0] = depolarizing_1q
    NoiseParams params;
};

/// Lower a compiled circuit. When for_tableau is set, every rotation must be
/// a Clifford angle and every MS fully entangling (or one of a fusable
/// refocussed half pair); anything else throws "requires dense backend".
ExecPlan build_plan(const Circuit& compiled, const NoiseParams& np, const IonLayout& layout,
                    bool for_tableau);

struct FaultInjection {
    enum Kind { PauliAfter, MeasFlip, PrepFlip } kind = PauliAfter;
    size_t op_index = 0;
    int pa = 0, pb = 0;  // pauli codes 0..3 on op qubits a (and b for MS)
};

struct TableauBackend {
    StabilizerTableau sim;
    explicit TableauBackend(int num_ions) : sim(num_ions) {}
    static constexpr bool is_dense() { return false; }
    void prep0(int pos, Rng& rng) { sim.reset_qubit(pos - 1, rng); }
    void clifford_rot(RotAxis axis, int cliff, int pos);
    void rot(RotAxis, double, int) { throw std::logic_error("requires dense backend"); }
    void ms(double theta, int pa, int pb);
    void xx(double, int, int) { throw std::logic_error("requires dense backend"); }
    void zrot(double, int) { throw std::logic_error("requires dense backend"); }
    void pauli1(int code, int pos);
    void pauli2(int ca, int posa, int cb, int posb);
    bool measure(int pos, Rng& rng) { return sim.measure_z(pos - 1, rng).outcome; }
};

struct DenseBackend {
    DenseState sim;
    explicit DenseBackend(int num_ions) : sim(num_ions) {}
    static constexpr bool is_dense() { return true; }
    void prep0(int pos, Rng& rng) { sim.reset_qubit(pos - 1, rng); }
    void clifford_rot(RotAxis axis, int cliff, int pos);
    void rot(RotAxis axis, double theta, int pos) {
        sim.rotate(axis == RotAxis::X ? Axis::X : axis == RotAxis::Y ? Axis::Y : Axis::Z,
                   theta, pos - 1);
    }
    void ms(double theta, int pa, int pb) { sim.xx(theta, pa - 1, pb - 1); }
    void xx(double arg, int pa, int pb) { sim.xx(arg, pa - 1, pb - 1); }
    void zrot(double arg, int pos) { sim.rotate(Axis::Z, arg, pos - 1); }
    void pauli1(int code, int pos);
    void pauli2(int ca, int posa, int cb, int posb);
    bool measure(int pos, Rng& rng) { return sim.measure_z(pos - 1, rng); }
};

struct SampleResolver {
    template <class Backend>
    bool resolve(Backend& b, int pos, Rng& rng) {
        return b.measure(pos, rng);
    }
};

namespace detail {
template <class Backend>
void apply_ms_crosstalk(const ExecPlan& plan, const PlanOp& op, Backend& backend,
                        LeakRegistry& leak, Rng& rng) {
    for (int k = 0; k < op.aux2; ++k) {
        const CtEntry& e = plan.ct[op.aux + k];
        if (leak.leaked(e.n)) continue;
        switch (plan.ct_mode) {
            case CrosstalkMode::Off:
                break;
            case CrosstalkMode::EntanglingCoherent:
                backend.xx(e.angle, e.g, e.n);
                break;
            case CrosstalkMode::EntanglingIncoherent:
                if (e.p_incoh > 0 && rng.bernoulli(e.p_incoh)) backend.pauli2(1, e.g, 1, e.n);
                break;
            case CrosstalkMode::StarkCoherent:
                backend.zrot(e.angle, e.n);
                break;
            case CrosstalkMode::StarkIncoherent:
                if (e.p_incoh > 0 && rng.bernoulli(e.p_incoh)) backend.pauli1(3, e.n);
                break;
        }
    }
}

template <class Backend>
void apply_residual_refocus(const ExecPlan& plan, const PlanOp& op, Backend& backend,
                            LeakRegistry& leak, Rng& rng) {
    const KrausChannel& ch = plan.channels[plan.residual_channel];
    for (int k = 0; k < op.aux2; ++k) {
        const CtEntry& e = plan.ct[op.aux + k];
        if (leak.leaked(e.n)) continue;
        const auto& br = ch.branches[ch.sample(rng)];
        if (br.pauli[0] != 0) backend.pauli1(br.pauli[0], e.n);
        if (br.crosstalk_unitary) {
            if constexpr (Backend::is_dense()) {
                backend.xx(e.angle, e.n, e.g);
            } else {
                if (rng.bernoulli(e.p_incoh)) backend.pauli2(1, e.n, 1, e.g);
            }
        }
    }
}
}  // namespace detail

/// Run a plan against a backend. Measurement outcomes land in `cbits`;
/// `fault`, when set, injects one deterministic fault (used by the decode
/// table construction and the fault-tolerance suites).
template <class Backend, class Resolver = SampleResolver>
void run_plan(const ExecPlan& plan, Backend& backend, LeakRegistry& leak, Rng& rng,
              std::vector<uint8_t>& cbits, Resolver& resolver,
              const FaultInjection* fault = nullptr) {
    const NoiseParams& np = plan.params;
    const bool depol = np.p_1q > 0;
    for (size_t i = 0; i < plan.ops.size(); ++i) {
        const PlanOp& op = plan.ops[i];
        switch (op.kind) {
            case OpKind::Idle: {
                if (leak.leaked(op.a)) break;
                const IdleRates& r = plan.idle_tbl[op.aux];
                if (r.p_dephase > 0 && rng.bernoulli(r.p_dephase)) backend.pauli1(3, op.a);
                if (r.p_decay > 0 && rng.bernoulli(r.p_decay)) {
                    if (backend.measure(op.a, rng)) {
                        backend.pauli1(1, op.a);
                        if (rng.uniform() < plan.leak_frac) leak.set(op.a, true);
                    }
                }
                break;
            }
            case OpKind::Prep: {
                backend.prep0(op.a, rng);
                leak.set(op.a, false);
                if (np.p_sp > 0 && rng.bernoulli(np.p_sp)) {
                    if (np.prep_leak_fraction > 0 && rng.uniform() < np.prep_leak_fraction) {
                        leak.set(op.a, true);
                    } else {
                        backend.pauli1(1, op.a);
                    }
                }
                if (fault && fault->kind == FaultInjection::PrepFlip && fault->op_index == i) {
                    backend.pauli1(1, op.a);
                }
                break;
            }
            case OpKind::Rot: {
                if (leak.leaked(op.a)) break;
                if constexpr (Backend::is_dense()) {
                    backend.rot(op.axis, op.theta, op.a);
                } else {
                    backend.clifford_rot(op.axis, op.cliff, op.a);
                }
                if (depol) {
                    const auto& br = plan.channels[0].branches[plan.channels[0].sample(rng)];
                    if (br.pauli[0] != 0) backend.pauli1(br.pauli[0], op.a);
                }
                if (fault && fault->kind == FaultInjection::PauliAfter && fault->op_index == i) {
                    backend.pauli1(fault->pa, op.a);
                }
                break;
            }
            case OpKind::Ms: {
                if (leak.leaked(op.a) || leak.leaked(op.b)) break;
                if (op.apply_gate) {
                    backend.ms(op.fused_theta != 0 ? op.fused_theta : op.theta, op.a, op.b);
                }
                if (plan.residual_refocus) {
                    detail::apply_residual_refocus(plan, op, backend, leak, rng);
                } else {
                    detail::apply_ms_crosstalk(plan, op, backend, leak, rng);
                }
                for (int d = 0; d < op.noise_draws; ++d) {
                    const KrausChannel& ch = plan.channels[op.ms_channel];
                    const auto& br = ch.branches[ch.sample(rng)];
                    if (br.pauli[0] != 0 || br.pauli[1] != 0) {
                        backend.pauli2(br.pauli[0], op.a, br.pauli[1], op.b);
                    }
                }
                if (fault && fault->kind == FaultInjection::PauliAfter && fault->op_index == i) {
                    backend.pauli2(fault->pa, op.a, fault->pb, op.b);
                }
                break;
            }
            case OpKind::Measure: {
                bool out;
                if (leak.leaked(op.a)) {
                    out = false;  // leaked ions read out dark, like |0>
                    leak.set(op.a, false);
                } else {
                    if (np.p_m > 0 && rng.bernoulli(np.p_m)) backend.pauli1(1, op.a);
                    out = resolver.resolve(backend, op.a, rng);
                }
                if (fault && fault->kind == FaultInjection::MeasFlip && fault->op_index == i) {
                    out = !out;
                }
                cbits[op.cbit] = out ? 1 : 0;
                break;
            }
            case OpKind::Repump: {
                const double psg = np.p_sg;
                if (leak.leaked(op.a)) {
                    if (!(psg > 0 && rng.bernoulli(2 * psg))) {
                        leak.set(op.a, false);
                        if (rng.bit()) backend.pauli1(1, op.a);  // reinit |0> or |1>
                    }
                } else if (psg > 0) {
                    double u = rng.uniform();
                    if (u < psg) {
                        if (backend.measure(op.a, rng)) {
                            backend.pauli1(1, op.a);
                            leak.set(op.a, true);
                        }
                    } else if (u < 1.5 * psg) {
                        if (backend.measure(op.a, rng)) backend.pauli1(1, op.a);
                    } else if (u < 2 * psg) {
                        backend.pauli1(3, op.a);
                    }
                }
                break;
            }
        }
    }
}

/// Pauli-frame propagation of a single injected fault through a (noiseless)
/// plan: exact error propagation plus the measurement flips it causes. Used
/// to build decode tables and to search circuit orderings.
struct FrameResult {
    uint32_t xmask = 0;  // residual frame over ion positions (bit = pos-1)
    uint32_t zmask = 0;
    std::vector<uint8_t> meas_flips;  // per classical bit
};
FrameResult propagate_frame(const ExecPlan& plan, const FaultInjection& fault,
                            uint32_t xin = 0, uint32_t zin = 0);

}  // namespace ionqec
