#include "ionqec/steane.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ionqec {

namespace {
constexpr double kPi = 3.14159265358979323846;

uint8_t pack_bits(const std::vector<uint8_t>& v, int count, int offset = 0) {
    uint8_t out = 0;
    for (int i = 0; i < count; ++i) out |= (v[offset + i] & 1) << i;
    return out;
}
}  // namespace

// ---------------------------------------------------------------------------
// SteaneCode

uint8_t SteaneCode::syndrome(uint8_t err) const {
    uint8_t s = 0;
    for (int i = 0; i < 3; ++i) s |= (std::popcount(unsigned(err & plaquette[i])) & 1) << i;
    return s;
}

int SteaneCode::correction_qubit(uint8_t syn) const {
    if (syn == 0) return 0;
    for (int q = 1; q <= 7; ++q) {
        if (syndrome(uint8_t(1) << (q - 1)) == syn) return q;
    }
    return 0;  // unreachable for the standard checks
}

bool SteaneCode::in_check_group(uint8_t mask) const {
    for (int g = 0; g < 8; ++g) {
        uint8_t m = 0;
        for (int i = 0; i < 3; ++i) {
            if ((g >> i) & 1) m ^= plaquette[i];
        }
        if (m == mask) return true;
    }
    return false;
}

bool SteaneCode::trivial(uint8_t x, uint8_t z) const {
    return in_check_group(x) && in_check_group(z);
}

int SteaneCode::distance() const {
    int best = 8;
    for (int x = 0; x < 128; ++x) {
        for (int z = 0; z < 128; ++z) {
            if (syndrome(uint8_t(x)) != 0 || syndrome(uint8_t(z)) != 0) continue;
            if (trivial(uint8_t(x), uint8_t(z))) continue;
            best = std::min(best, std::popcount(unsigned(x | z)));
        }
    }
    return best;
}

std::pair<uint8_t, uint8_t> SteaneCode::reduce(uint8_t x, uint8_t z, bool mod_logical_x,
                                               bool mod_logical_z) const {
    uint8_t bx = x, bz = z;
    int bw = std::popcount(unsigned(x | z));
    int nx = mod_logical_x ? 16 : 8;
    int nz = mod_logical_z ? 16 : 8;
    for (int gx = 0; gx < nx; ++gx) {
        uint8_t mx = (gx & 8) ? logical : 0;
        for (int i = 0; i < 3; ++i) {
            if ((gx >> i) & 1) mx ^= plaquette[i];
        }
        for (int gz = 0; gz < nz; ++gz) {
            uint8_t mz = (gz & 8) ? logical : 0;
            for (int i = 0; i < 3; ++i) {
                if ((gz >> i) & 1) mz ^= plaquette[i];
            }
            uint8_t cx = x ^ mx, cz = z ^ mz;
            int w = std::popcount(unsigned(cx | cz));
            if (w < bw || (w == bw && (cx << 8 | cz) < (bx << 8 | bz))) {
                bx = cx;
                bz = cz;
                bw = w;
            }
        }
    }
    return {bx, bz};
}

// ---------------------------------------------------------------------------
// Flagged readout schedules.
//
// The interleaving below was found by search over CNOT orderings (see
// tools/find_flag_schedule.cpp) and is pinned by the decode-table
// construction and the exhaustive single-fault suites: any ordering change
// must keep those green.

FlagSchedule group_a_schedule() {
    FlagSchedule fs;
    fs.stab_mask = {0x0F, 0x36, 0x6C};  // Sx1, Sz2, Sz3
    fs.x_type = {true, false, false};
    fs.qubit_order = {{{1, 2, 4, 3}, {6, 5, 2, 3}, {3, 4, 7, 6}}};
    fs.interleave = {2, 2, 2, 0, 1, 1, 0, 0, 0, 2, 1, 1};
    return fs;
}

FlagSchedule group_b_schedule() {
    FlagSchedule fs;
    fs.stab_mask = {0x0F, 0x36, 0x6C};  // Sz1, Sx2, Sx3
    fs.x_type = {false, true, true};
    fs.qubit_order = {{{1, 2, 3, 4}, {6, 5, 3, 2}, {6, 7, 3, 4}}};
    fs.interleave = {1, 2, 2, 2, 0, 0, 2, 0, 1, 0, 1, 1};
    return fs;
}

bool flag_schedule_sound(const FlagSchedule& fs) {
    // time index of each ancilla's CNOT per data qubit
    int when[3][8];
    for (auto& row : when) std::fill(std::begin(row), std::end(row), -1);
    std::array<int, 3> next = {0, 0, 0};
    for (int slot = 0; slot < 12; ++slot) {
        int anc = fs.interleave[slot];
        when[anc][fs.qubit_order[anc][next[anc]++]] = slot;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!fs.x_type[i] || fs.x_type[j]) continue;  // need (X, Z) pairs
            int crossings = 0;
            for (int q = 1; q <= 7; ++q) {
                uint8_t bit = uint8_t(1) << (q - 1);
                if ((fs.stab_mask[i] & bit) && (fs.stab_mask[j] & bit) && when[i][q] < when[j][q]) {
                    ++crossings;
                }
            }
            if (crossings % 2 != 0) return false;
        }
    }
    return true;
}

Circuit build_flag_group_circuit(const FlagSchedule& fs, const IonLayout& layout) {
    Circuit c(layout.num_ions);
    for (int a = 0; a < 3; ++a) c.prepare0(layout.ancilla_position(a + 1));
    for (int a = 0; a < 3; ++a) {
        if (fs.x_type[a]) c.rotation(RotAxis::Y, kPi / 2, layout.ancilla_position(a + 1));
    }
    // Ancilla-ancilla coupling: each X-type ancilla is CNOT-coupled to each
    // Z-type ancilla before and after the data block. The clean couplings
    // cancel, but an X hook on the X-type ancilla lands on the Z-type one at
    // the closing CNOT and a Z hook travels the other way, so the ancillas
    // flag each other's dangerous faults.
    // The closing couplings run with the opposite MS sign so that their
    // coherent crosstalk amplitudes echo out against the opening ones.
    auto sandwich = [&](bool ms_positive) {
        for (int i = 0; i < 3; ++i) {
            if (!fs.x_type[i]) continue;
            for (int j = 0; j < 3; ++j) {
                if (fs.x_type[j]) continue;
                c.cnot(layout.ancilla_position(i + 1), layout.ancilla_position(j + 1), ms_positive);
            }
        }
    };
    sandwich(true);
    std::array<int, 3> next = {0, 0, 0};
    for (int anc : fs.interleave) {
        int dq = fs.qubit_order[anc][next[anc]++];
        int apos = layout.ancilla_position(anc + 1);
        int dpos = layout.data_position(dq);
        if (fs.x_type[anc]) c.cnot(apos, dpos);
        else c.cnot(dpos, apos);
    }
    sandwich(false);
    for (int a = 0; a < 3; ++a) {
        if (fs.x_type[a]) c.rotation(RotAxis::Y, -kPi / 2, layout.ancilla_position(a + 1));
    }
    for (int a = 0; a < 3; ++a) c.measure_z(layout.ancilla_position(a + 1));
    return c;
}

namespace {

/// Flag-verified encoding circuit. Pivot qubits start in |+>, the spreading
/// CNOT order is chosen so that every dangerous target-side (resp.
/// control-side) hook anticommutes with the verification operator, which a
/// single flag ancilla then measures.
Circuit build_prep_circuit(Basis basis, const IonLayout& layout) {
    Circuit c(layout.num_ions);
    for (int ion = 1; ion <= layout.num_ions; ++ion) c.prepare0(ion);
    const int a1 = layout.ancilla_position(1);
    if (basis == Basis::Plus) {
        for (int q : {1, 2, 3, 5}) c.rotation(RotAxis::Y, kPi / 2, layout.data_position(q));
        const int cnots[9][2] = {{3, 4}, {2, 4}, {1, 4}, {2, 6}, {3, 6}, {5, 6}, {1, 7}, {3, 7}, {5, 7}};
        for (auto& ct : cnots) c.cnot(layout.data_position(ct[0]), layout.data_position(ct[1]));
        // verify X3 X4 X5
        c.rotation(RotAxis::Y, kPi / 2, a1);
        for (int q : {3, 4, 5}) c.cnot(a1, layout.data_position(q));
        c.rotation(RotAxis::Y, -kPi / 2, a1);
    } else {
        for (int q : {1, 2, 3}) c.rotation(RotAxis::Y, kPi / 2, layout.data_position(q));
        const int cnots[9][2] = {{1, 6}, {1, 4}, {1, 5}, {2, 7}, {2, 5}, {2, 4}, {3, 4}, {3, 7}, {3, 6}};
        for (auto& ct : cnots) c.cnot(layout.data_position(ct[0]), layout.data_position(ct[1]));
        // verify Z3 Z4 Z5
        for (int q : {3, 4, 5}) c.cnot(layout.data_position(q), a1);
    }
    c.measure_z(a1);
    return c;
}

Circuit build_repump_circuit(const IonLayout& layout) {
    Circuit c(layout.num_ions);
    for (int ion = 1; ion <= layout.num_ions; ++ion) c.repump(ion);
    return c;
}

Circuit build_readout_circuit(Basis basis, const IonLayout& layout) {
    Circuit c(layout.num_ions);
    if (basis == Basis::Plus) {
        for (int q = 1; q <= 7; ++q) c.rotation(RotAxis::Y, -kPi / 2, layout.data_position(q));
    }
    for (int q = 1; q <= 7; ++q) c.measure_z(layout.data_position(q));
    return c;
}

}  // namespace

ProtocolCircuits build_protocol_circuits_with(Basis basis, const IonLayout& layout,
                                              const FlagSchedule& ga, const FlagSchedule& gb) {
    ProtocolCircuits pc;
    pc.prep = build_prep_circuit(basis, layout);
    pc.repump = build_repump_circuit(layout);
    pc.group_a = build_flag_group_circuit(ga, layout);
    pc.group_b = build_flag_group_circuit(gb, layout);
    pc.unflagged = build_flag_group_circuit(ga, layout);
    pc.unflagged.append(build_flag_group_circuit(gb, layout));
    pc.readout = build_readout_circuit(basis, layout);
    return pc;
}

ProtocolCircuits build_protocol_circuits(Basis basis, const IonLayout& layout) {
    return build_protocol_circuits_with(basis, layout, group_a_schedule(), group_b_schedule());
}

// ---------------------------------------------------------------------------
// DecodeTable

Correction DecodeTable::lookup(uint8_t bits1, uint8_t s2, const SteaneCode& code) const {
    uint16_t key = uint16_t(bits1 & 0x3F) | (uint16_t(s2 & 0x3F) << 6);
    if (known_[key]) return entries_[key];
    return naive(s2, code);
}

Correction DecodeTable::naive(uint8_t syn6, const SteaneCode& code) const {
    // bit order: sx1, sz2, sz3, sz1, sx2, sx3
    uint8_t xsyn = (syn6 & 1) | ((syn6 >> 4) & 1) << 1 | ((syn6 >> 5) & 1) << 2;
    uint8_t zsyn = ((syn6 >> 3) & 1) | ((syn6 >> 1) & 1) << 1 | ((syn6 >> 2) & 1) << 2;
    Correction c;
    int qz = code.correction_qubit(xsyn);  // X-type checks flag Z errors
    int qx = code.correction_qubit(zsyn);  // Z-type checks flag X errors
    if (qz) c.z = uint8_t(1) << (qz - 1);
    if (qx) c.x = uint8_t(1) << (qx - 1);
    return c;
}

size_t DecodeTable::num_known() const {
    size_t n = 0;
    for (uint8_t k : known_) n += k;
    return n;
}

// ---------------------------------------------------------------------------
// Decode table construction by exact single-fault propagation

std::vector<FaultInjection> enumerate_fault_set(const ExecPlan& plan) {
    std::vector<FaultInjection> out;
    for (size_t i = 0; i < plan.ops.size(); ++i) {
        const PlanOp& op = plan.ops[i];
        switch (op.kind) {
            case OpKind::Rot:
                for (int p = 1; p <= 3; ++p) out.push_back({FaultInjection::PauliAfter, i, p, 0});
                break;
            case OpKind::Ms:
                for (int pa = 0; pa <= 3; ++pa) {
                    for (int pb = 0; pb <= 3; ++pb) {
                        if (pa == 0 && pb == 0) continue;
                        out.push_back({FaultInjection::PauliAfter, i, pa, pb});
                    }
                }
                break;
            case OpKind::Prep:
                out.push_back({FaultInjection::PrepFlip, i, 0, 0});
                break;
            case OpKind::Measure:
                out.push_back({FaultInjection::MeasFlip, i, 0, 0});
                break;
            default:
                break;
        }
    }
    return out;
}

namespace {

bool decode_flips_fail(const SteaneCode& code, uint8_t flip_mask) {
    uint8_t syn = code.syndrome(flip_mask);
    int cq = code.correction_qubit(syn);
    int parity = std::popcount(unsigned(flip_mask & code.logical)) & 1;
    if (cq && ((code.logical >> (cq - 1)) & 1)) parity ^= 1;
    return parity != 0;
}

uint8_t data_mask(uint32_t frame_mask) { return uint8_t((frame_mask >> 1) & 0x7F); }

constexpr FaultInjection kNoFault{FaultInjection::PauliAfter, size_t(-1), 0, 0};

}  // namespace

DecodeTable build_decode_table(const SteaneCode& code, Basis basis, const ExecPlan& prep,
                               const ExecPlan& group_a, const ExecPlan& group_b,
                               const ExecPlan& unflagged, const ExecPlan& readout) {
    // residuals are equivalent modulo the stabiliser group of the prepared
    // state, which includes the logical operator of the run basis
    const bool mod_lx = basis == Basis::Plus;
    const bool mod_lz = basis == Basis::Zero;
    DecodeTable table;
    auto process = [&](const ExecPlan& plan, int stage) {
        for (const FaultInjection& inj : enumerate_fault_set(plan)) {
            FrameResult fr = propagate_frame(plan, inj);
            uint8_t bits_a = 0, bits_b = 0;
            uint32_t x = fr.xmask, z = fr.zmask;
            if (stage == 0) {
                if (fr.meas_flips[0]) continue;  // flag raised: state discarded
                FrameResult fa = propagate_frame(group_a, kNoFault, x, z);
                bits_a = pack_bits(fa.meas_flips, 3);
                x = fa.xmask; z = fa.zmask;
                FrameResult fb = propagate_frame(group_b, kNoFault, x, z);
                bits_b = pack_bits(fb.meas_flips, 3);
                x = fb.xmask; z = fb.zmask;
            } else if (stage == 1) {
                bits_a = pack_bits(fr.meas_flips, 3);
                FrameResult fb = propagate_frame(group_b, kNoFault, x, z);
                bits_b = pack_bits(fb.meas_flips, 3);
                x = fb.xmask; z = fb.zmask;
            } else {
                bits_b = pack_bits(fr.meas_flips, 3);
            }
            uint8_t bits1 = bits_a | uint8_t(bits_b << 3);
            if (bits1 == 0) {
                FrameResult fro = propagate_frame(readout, kNoFault, x, z);
                uint8_t flips = pack_bits(fro.meas_flips, 7);
                if (decode_flips_fail(code, flips)) {
                    throw std::runtime_error("flagged circuits not FT: silent single fault causes failure");
                }
                continue;
            }
            FrameResult fu = propagate_frame(unflagged, kNoFault, x, z);
            uint8_t s2 = pack_bits(fu.meas_flips, 6);
            auto [cx, cz] = code.reduce(data_mask(fu.xmask), data_mask(fu.zmask), mod_lx, mod_lz);
            Correction corr{cx, cz};
            uint16_t key = uint16_t(bits1) | (uint16_t(s2) << 6);
            if (table.knows(key)) {
                if (!(table.at(key) == corr)) {
                    throw std::runtime_error("flagged circuits not FT: signature collision");
                }
            } else {
                table.insert(key, corr);
            }
        }
    };
    process(prep, 0);
    process(group_a, 1);
    process(group_b, 2);
    return table;
}

// ---------------------------------------------------------------------------
// SteaneExperiment

SteaneExperiment::SteaneExperiment(Basis basis, const NoiseParams& noise, BackendKind backend,
                                   RetriggerPolicy retrigger, IonLayout layout,
                                   const ProtocolCircuits* circuits_override)
    : basis_(basis), noise_(noise), backend_(backend), retrigger_(retrigger), layout_(layout) {
    noise_.validate();
    if (backend_ == BackendKind::Tableau && noise_.needs_dense_backend()) {
        throw std::invalid_argument("coherent crosstalk requires dense backend");
    }
    if (backend_ == BackendKind::Paths && !noise_.coherent_only()) {
        throw std::invalid_argument("enumeration valid for coherent-only models");
    }
    table_circuits_ = circuits_override ? *circuits_override
                                        : build_protocol_circuits(basis_, layout_);
    circuits_ = table_circuits_;
    if (noise_.refocussing && noise_.refocus_mode == RefocusMode::Structural) {
        circuits_.prep = insert_refocussing(table_circuits_.prep, layout_);
        circuits_.group_a = insert_refocussing(table_circuits_.group_a, layout_);
        circuits_.group_b = insert_refocussing(table_circuits_.group_b, layout_);
        circuits_.unflagged = insert_refocussing(table_circuits_.unflagged, layout_);
    }
    bool for_tableau = backend_ == BackendKind::Tableau;
    prep_p_ = build_plan(circuits_.prep, noise_, layout_, for_tableau);
    repump_p_ = build_plan(circuits_.repump, noise_, layout_, for_tableau);
    ga_p_ = build_plan(circuits_.group_a, noise_, layout_, for_tableau);
    gb_p_ = build_plan(circuits_.group_b, noise_, layout_, for_tableau);
    unf_p_ = build_plan(circuits_.unflagged, noise_, layout_, for_tableau);
    ro_p_ = build_plan(circuits_.readout, noise_, layout_, for_tableau);

    NoiseParams clean;  // all rates zero for exact fault propagation
    clean.p_1q = clean.p_ms = clean.p_c = clean.p_sp = clean.p_m = clean.p_sg = 0;
    clean.crosstalk_mode = CrosstalkMode::Off;
    clean.idle_noise = false;
    ExecPlan tp = build_plan(table_circuits_.prep, clean, layout_, true);
    ExecPlan ta = build_plan(table_circuits_.group_a, clean, layout_, true);
    ExecPlan tb = build_plan(table_circuits_.group_b, clean, layout_, true);
    ExecPlan tu = build_plan(table_circuits_.unflagged, clean, layout_, true);
    ExecPlan tr = build_plan(table_circuits_.readout, clean, layout_, true);
    table_ = build_decode_table(code_, basis_, tp, ta, tb, tu, tr);
}

bool SteaneExperiment::decode_readout(const std::vector<uint8_t>& bits) const {
    uint8_t mask = 0;
    for (int q = 1; q <= 7; ++q) mask |= (bits[q - 1] & 1) << (q - 1);
    return decode_flips_fail(code_, mask);
}

template <class Backend>
TrialOutcome SteaneExperiment::run_trial_impl(Rng& rng, int fault_segment,
                                              const FaultInjection* inj) const {
    Backend backend(layout_.num_ions);
    LeakRegistry leak(layout_.num_ions);
    SampleResolver res;
    TrialOutcome out;
    auto fault_for = [&](int seg) { return fault_segment == seg ? inj : nullptr; };

    std::vector<uint8_t> cbp(prep_p_.num_cbits, 0);
    bool first_attempt = true;
    for (;;) {
        run_plan(prep_p_, backend, leak, rng, cbp, res, first_attempt ? fault_for(SegPrep) : nullptr);
        first_attempt = false;
        if (!cbp[0]) break;
        if (++out.prep_restarts > 1000000) throw std::runtime_error("prep restart bound exceeded");
    }
    std::vector<uint8_t> cbr(repump_p_.num_cbits, 0);
    run_plan(repump_p_, backend, leak, rng, cbr, res, fault_for(SegRepump));

    std::vector<uint8_t> cba(3, 0), cbb(3, 0);
    run_plan(ga_p_, backend, leak, rng, cba, res, fault_for(SegGroupA));
    run_plan(gb_p_, backend, leak, rng, cbb, res, fault_for(SegGroupB));
    uint8_t bits1 = pack_bits(cba, 3) | uint8_t(pack_bits(cbb, 3) << 3);
    out.flags_raised = bits1 != 0;

    Correction corr{};
    if (bits1 != 0) {
        if (retrigger_ == RetriggerPolicy::Always) {
            out.rounds_run = 2;
            std::vector<uint8_t> cbu(6, 0);
            run_plan(unf_p_, backend, leak, rng, cbu, res, fault_for(SegUnflagged));
            corr = table_.lookup(bits1, pack_bits(cbu, 6), code_);
        } else {
            corr = table_.naive(bits1, code_);
        }
    }
    apply_correction(backend, corr);

    std::vector<uint8_t> cro(7, 0);
    run_plan(ro_p_, backend, leak, rng, cro, res, fault_for(SegReadout));
    out.logical_failure = decode_readout(cro);
    return out;
}

TrialOutcome SteaneExperiment::run_trial(Rng& rng) const {
    switch (backend_) {
        case BackendKind::Tableau: return run_trial_impl<TableauBackend>(rng, -1, nullptr);
        case BackendKind::Dense: return run_trial_impl<DenseBackend>(rng, -1, nullptr);
        case BackendKind::Paths:
            throw std::invalid_argument("paths backend is driven by enumerate_paths");
    }
    throw std::logic_error("bad backend");
}

TrialOutcome SteaneExperiment::run_trial_with_fault(Rng& rng, int segment,
                                                    const FaultInjection& inj) const {
    if (backend_ == BackendKind::Dense) return run_trial_impl<DenseBackend>(rng, segment, &inj);
    return run_trial_impl<TableauBackend>(rng, segment, &inj);
}

FtCheckResult exhaustive_single_fault_check(const SteaneExperiment& exp, uint64_t seed) {
    FtCheckResult res;
    const std::pair<int, const ExecPlan*> segments[] = {
        {SteaneExperiment::SegPrep, &exp.prep_plan()},
        {SteaneExperiment::SegGroupA, &exp.group_a_plan()},
        {SteaneExperiment::SegGroupB, &exp.group_b_plan()},
        {SteaneExperiment::SegUnflagged, &exp.unflagged_plan()},
        {SteaneExperiment::SegReadout, &exp.readout_plan()},
    };
    for (auto [seg, plan] : segments) {
        for (const FaultInjection& inj : enumerate_fault_set(*plan)) {
            Rng rng = Rng::for_trial(seed, res.faults_checked);
            TrialOutcome t = exp.run_trial_with_fault(rng, seg, inj);
            ++res.faults_checked;
            if (t.logical_failure) ++res.failures;
        }
    }
    return res;
}

template TrialOutcome SteaneExperiment::run_trial_impl<TableauBackend>(Rng&, int, const FaultInjection*) const;
template TrialOutcome SteaneExperiment::run_trial_impl<DenseBackend>(Rng&, int, const FaultInjection*) const;

}  // namespace ionqec
