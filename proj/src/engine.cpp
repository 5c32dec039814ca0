#include "ionqec/engine.hpp"

#include <cmath>
#include <map>

namespace ionqec {

namespace {
constexpr double kPi = 3.14159265358979323846;

/// Classify a rotation angle as quarter turns: 0 identity, +-1 quarter,
/// 2 half turn, 9 anything else.
int classify_angle(double theta) {
    double t = std::remainder(theta, 2 * kPi);  // in (-pi, pi]
    for (int k : {-1, 0, 1, 2}) {
        if (std::abs(t - k * kPi / 2) < 1e-9) return k;
    }
    if (std::abs(t + kPi) < 1e-9) return 2;
    return 9;
}
}  // namespace

void TableauBackend::clifford_rot(RotAxis axis, int cliff, int pos) {
    size_t q = pos - 1;
    if (cliff == 0) return;
    if (cliff == 9) throw std::logic_error("requires dense backend");
    switch (axis) {
        case RotAxis::X:
            if (cliff == 2) sim.x(q); else sim.rx(q, cliff > 0);
            break;
        case RotAxis::Y:
            if (cliff == 2) sim.y(q); else sim.ry(q, cliff > 0);
            break;
        case RotAxis::Z:
            if (cliff == 2) sim.z(q); else sim.rz(q, cliff > 0);
            break;
    }
}

void TableauBackend::ms(double theta, int pa, int pb) {
    if (std::abs(std::abs(theta) - kPi / 2) > 1e-9) {
        throw std::logic_error("requires dense backend");
    }
    sim.ms(pa - 1, pb - 1, theta > 0);
}

void TableauBackend::pauli1(int code, int pos) {
    size_t q = pos - 1;
    uint64_t xm = (code == 1 || code == 2) ? uint64_t(1) << q : 0;
    uint64_t zm = (code == 2 || code == 3) ? uint64_t(1) << q : 0;
    sim.apply_pauli_xz(xm, zm);
}

void TableauBackend::pauli2(int ca, int posa, int cb, int posb) {
    uint64_t xm = 0, zm = 0;
    auto add = [&](int code, int pos) {
        uint64_t bit = uint64_t(1) << (pos - 1);
        if (code == 1 || code == 2) xm |= bit;
        if (code == 2 || code == 3) zm |= bit;
    };
    add(ca, posa);
    add(cb, posb);
    sim.apply_pauli_xz(xm, zm);
}

void DenseBackend::pauli1(int code, int pos) {
    size_t q = pos - 1;
    uint64_t xm = (code == 1 || code == 2) ? uint64_t(1) << q : 0;
    uint64_t zm = (code == 2 || code == 3) ? uint64_t(1) << q : 0;
    sim.apply_pauli_xz(xm, zm);
}

void DenseBackend::pauli2(int ca, int posa, int cb, int posb) {
    uint64_t xm = 0, zm = 0;
    auto add = [&](int code, int pos) {
        uint64_t bit = uint64_t(1) << (pos - 1);
        if (code == 1 || code == 2) xm |= bit;
        if (code == 2 || code == 3) zm |= bit;
    };
    add(ca, posa);
    add(cb, posb);
    sim.apply_pauli_xz(xm, zm);
}

ExecPlan build_plan(const Circuit& compiled, const NoiseParams& np, const IonLayout& layout,
                    bool for_tableau) {
    np.validate();
    if (for_tableau && np.needs_dense_backend()) {
        throw std::invalid_argument("coherent crosstalk requires dense backend");
    }
    ExecPlan plan;
    plan.num_ions = compiled.num_ions;
    plan.num_cbits = compiled.num_cbits;
    plan.params = np;
    plan.leak_frac = leak_fraction(np);
    plan.residual_refocus = np.refocussing && np.refocus_mode == RefocusMode::Residual &&
                            np.crosstalk_mode != CrosstalkMode::Off;
    if (plan.residual_refocus &&
        (np.crosstalk_mode == CrosstalkMode::StarkCoherent ||
         np.crosstalk_mode == CrosstalkMode::StarkIncoherent)) {
        throw std::invalid_argument("residual refocussing applies to the entangling model only");
    }
    plan.ct_mode = np.crosstalk_mode;
    plan.channels.push_back(depolarizing_1q(np.p_1q));

    Schedule sched = schedule(compiled, np.durations);

    const double theta_c = np.crosstalk_angle();
    const double mu = np.stark_mu();

    std::map<double, int> ms_channel_idx;
    auto ms_channel_for = [&](double scale) {
        auto it = ms_channel_idx.find(scale);
        if (it != ms_channel_idx.end()) return it->second;
        plan.channels.push_back(ms_pauli_channel(np.p_ms * scale));
        int idx = int(plan.channels.size()) - 1;
        ms_channel_idx.emplace(scale, idx);
        return idx;
    };
    if (plan.residual_refocus) {
        // weights depend only on p_1q; per-pair angles live in the CtEntry
        plan.channels.push_back(refocus_residual_channel(np.p_1q, kPi / 2, theta_c / (kPi / 2)));
        plan.residual_channel = int(plan.channels.size()) - 1;
    }

    std::map<double, int> idle_idx;
    auto idle_for = [&](double dt) {
        auto it = idle_idx.find(dt);
        if (it != idle_idx.end()) return it->second;
        plan.idle_tbl.push_back(idle_rates(dt, np));
        int idx = int(plan.idle_tbl.size()) - 1;
        idle_idx.emplace(dt, idx);
        return idx;
    };

    // pair up refocussed half gates for the tableau backend
    std::vector<int> fuse_partner(compiled.events.size(), -1);
    if (for_tableau) {
        std::vector<bool> used(compiled.events.size(), false);
        for (size_t i = 0; i < compiled.events.size(); ++i) {
            const Event& e = compiled.events[i];
            if (e.kind != EventKind::Ms || used[i]) continue;
            if (std::abs(std::abs(e.theta) - kPi / 2) < 1e-9) continue;
            if (std::abs(std::abs(e.theta) - kPi / 4) > 1e-9) {
                throw std::invalid_argument("requires dense backend");
            }
            bool found = false;
            for (size_t j = i + 1; j < compiled.events.size(); ++j) {
                const Event& f = compiled.events[j];
                if (f.kind != EventKind::Ms || used[j]) continue;
                if (((f.a == e.a && f.b == e.b) || (f.a == e.b && f.b == e.a)) &&
                    std::abs(f.theta - e.theta) < 1e-9) {
                    fuse_partner[i] = int(j);
                    fuse_partner[j] = int(i);
                    used[i] = used[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::invalid_argument("requires dense backend");
        }
    }

    auto emit_ct_entries = [&](const Event& e, PlanOp& op) {
        op.aux = int(plan.ct.size());
        if (np.crosstalk_mode == CrosstalkMode::Off || np.p_c <= 0) {
            op.aux2 = 0;
            return;
        }
        double scale = std::abs(e.theta) / (kPi / 2);
        auto spectators = layout.gate_neighbors(e.a, e.b);
        bool stark = np.crosstalk_mode == CrosstalkMode::StarkCoherent ||
                     np.crosstalk_mode == CrosstalkMode::StarkIncoherent;
        if (stark) {
            for (int n : spectators) {
                CtEntry ce;
                ce.n = n;
                double phase = mu * (kPi / 4) * scale;  // exp(-i phase Z_n)
                ce.angle = 2 * phase;
                ce.p_incoh = std::sin(phase) * std::sin(phase);
                plan.ct.push_back(ce);
            }
        } else {
            for (int g : {e.a, e.b}) {
                for (int n : spectators) {
                    CtEntry ce;
                    ce.g = g;
                    ce.n = n;
                    double arg = theta_c * scale * (layout.is_doubled(n, e.a, e.b) ? 2.0 : 1.0);
                    ce.angle = arg;  // XX(arg) = exp(-i arg/2 X X)
                    ce.p_incoh = std::sin(arg / 2) * std::sin(arg / 2);
                    plan.ct.push_back(ce);
                }
            }
        }
        op.aux2 = int(plan.ct.size()) - op.aux;
    };

    size_t idle_cursor = 0;
    auto emit_idles_before = [&](size_t event_idx) {
        while (idle_cursor < sched.idles.size() && sched.idles[idle_cursor].before_event == event_idx) {
            const IdleInterval& iv = sched.idles[idle_cursor++];
            if (np.idle_noise) {
                PlanOp op;
                op.kind = OpKind::Idle;
                op.a = iv.ion;
                op.aux = idle_for(iv.dt_us);
                plan.ops.push_back(op);
            }
        }
    };

    for (size_t idx = 0; idx < compiled.events.size(); ++idx) {
        emit_idles_before(idx);
        const Event& e = compiled.events[idx];
        PlanOp op;
        switch (e.kind) {
            case EventKind::Barrier:
                continue;
            case EventKind::Prepare0:
                op.kind = OpKind::Prep;
                op.a = e.a;
                break;
            case EventKind::MeasureZ:
                op.kind = OpKind::Measure;
                op.a = e.a;
                op.cbit = e.cbit;
                break;
            case EventKind::RepumpLeak:
                op.kind = OpKind::Repump;
                op.a = e.a;
                break;
            case EventKind::Rotation:
                op.kind = OpKind::Rot;
                op.axis = e.axis;
                op.theta = e.theta;
                op.cliff = classify_angle(e.theta);
                if (for_tableau && op.cliff == 9) {
                    throw std::invalid_argument("requires dense backend");
                }
                op.a = e.a;
                break;
            case EventKind::Ms: {
                op.kind = OpKind::Ms;
                op.a = e.a;
                op.b = e.b;
                op.theta = e.theta;
                double scale = std::abs(e.theta) / (kPi / 2);
                emit_ct_entries(e, op);
                if (for_tableau && fuse_partner[idx] >= 0) {
                    if (fuse_partner[idx] > int(idx)) {
                        op.apply_gate = false;  // deferred to the partner half
                        op.noise_draws = 0;
                    } else {
                        op.apply_gate = true;
                        op.fused_theta = 2 * e.theta;
                        op.noise_draws = 2;
                        op.ms_channel = ms_channel_for(scale);
                    }
                } else {
                    op.apply_gate = true;
                    op.noise_draws = 1;
                    op.ms_channel = ms_channel_for(scale);
                }
                break;
            }
        }
        plan.ops.push_back(op);
    }
    emit_idles_before(compiled.events.size());
    return plan;
}

FrameResult propagate_frame(const ExecPlan& plan, const FaultInjection& fault,
                            uint32_t xin, uint32_t zin) {
    FrameResult res;
    res.meas_flips.assign(plan.num_cbits, 0);
    uint32_t x = xin, z = zin;
    for (size_t i = 0; i < plan.ops.size(); ++i) {
        const PlanOp& op = plan.ops[i];
        uint32_t abit = op.a >= 1 ? uint32_t(1) << (op.a - 1) : 0;
        switch (op.kind) {
            case OpKind::Idle:
                break;
            case OpKind::Prep:
                x &= ~abit;
                z &= ~abit;
                if (fault.kind == FaultInjection::PrepFlip && fault.op_index == i) x |= abit;
                break;
            case OpKind::Rot: {
                if (op.cliff == 1 || op.cliff == -1) {
                    bool xb = x & abit, zb = z & abit;
                    switch (op.axis) {
                        case RotAxis::X: if (zb) x ^= abit; break;            // Y <-> Z
                        case RotAxis::Y: {                                     // X <-> Z
                            if (xb != zb) { x ^= abit; z ^= abit; }
                            break;
                        }
                        case RotAxis::Z: if (xb) z ^= abit; break;            // X <-> Y
                    }
                }
                if (fault.kind == FaultInjection::PauliAfter && fault.op_index == i) {
                    if (fault.pa == 1 || fault.pa == 2) x ^= abit;
                    if (fault.pa == 2 || fault.pa == 3) z ^= abit;
                }
                break;
            }
            case OpKind::Ms: {
                uint32_t bbit = uint32_t(1) << (op.b - 1);
                bool anti = bool(z & abit) != bool(z & bbit);
                if (anti) x ^= abit | bbit;
                if (fault.kind == FaultInjection::PauliAfter && fault.op_index == i) {
                    if (fault.pa == 1 || fault.pa == 2) x ^= abit;
                    if (fault.pa == 2 || fault.pa == 3) z ^= abit;
                    if (fault.pb == 1 || fault.pb == 2) x ^= bbit;
                    if (fault.pb == 2 || fault.pb == 3) z ^= bbit;
                }
                break;
            }
            case OpKind::Measure: {
                bool flip = x & abit;
                if (fault.kind == FaultInjection::MeasFlip && fault.op_index == i) flip = !flip;
                res.meas_flips[op.cbit] = flip ? 1 : 0;
                x &= ~abit;
                z &= ~abit;
                break;
            }
            case OpKind::Repump:
                break;
        }
    }
    res.xmask = x;
    res.zmask = z;
    return res;
}

}  // namespace ionqec
