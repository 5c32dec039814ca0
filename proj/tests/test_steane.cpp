#include "doctest.h"

#include <bit>
#include <cmath>

#include "ionqec/steane.hpp"

using namespace ionqec;

namespace {
NoiseParams clean_params() {
    NoiseParams np;
    np.p_1q = np.p_ms = np.p_sp = np.p_m = np.p_sg = 0;
    np.p_c = 0;
    np.idle_noise = false;
    return np;
}

PauliString data_pauli(uint8_t xmask, uint8_t zmask, const IonLayout& layout) {
    PauliString p(layout.num_ions);
    for (int q = 1; q <= 7; ++q) {
        int sq = layout.data_position(q) - 1;
        bool x = (xmask >> (q - 1)) & 1, z = (zmask >> (q - 1)) & 1;
        p.set_pauli(sq, x && z ? 2 : x ? 1 : z ? 3 : 0);
    }
    return p;
}
}  // namespace

TEST_CASE("code definition") {
    SteaneCode code = SteaneCode::standard();
    CHECK(code.plaquette[0] == 0x0F);  // {1,2,3,4}
    CHECK(code.plaquette[1] == 0x36);  // {2,3,5,6}
    CHECK(code.plaquette[2] == 0x6C);  // {3,4,6,7}
    CHECK(code.logical == 0x70);       // {5,6,7}

    // CSS structure: X- and Z-type checks on the same supports commute when
    // every overlap is even
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK((std::popcount(unsigned(code.plaquette[i] & code.plaquette[j])) & 1) == 0);
        }
        // logical operators commute with all checks
        CHECK((std::popcount(unsigned(code.logical & code.plaquette[i])) & 1) == 0);
    }
    // logical X and Z anticommute (odd overlap of their supports)
    CHECK((std::popcount(unsigned(code.logical & code.logical)) & 1) == 1);

    CHECK(code.distance() == 3);
}

TEST_CASE("hook error narrative: X6 X7 excites only the second Z check") {
    SteaneCode code;
    uint8_t x67 = (1 << 5) | (1 << 6);
    CHECK(code.syndrome(x67) == 0b010);
    // the naive correction for that syndrome is qubit 5, completing the
    // logical X5 X6 X7
    CHECK(code.correction_qubit(0b010) == 5);
    uint8_t completed = x67 | (1 << 4);
    CHECK(completed == code.logical);
}

TEST_CASE("syndrome membership table") {
    SteaneCode code;
    CHECK(code.syndrome(1 << 1) == 0b011);  // qubit 2 in P1, P2
    CHECK(code.syndrome(1 << 4) == 0b010);  // qubit 5 in P2 only
    CHECK(code.correction_qubit(0) == 0);
    for (int q = 1; q <= 7; ++q) {
        CHECK(code.correction_qubit(code.syndrome(uint8_t(1) << (q - 1))) == q);
    }
}

TEST_CASE("schedules are sound") {
    CHECK(flag_schedule_sound(group_a_schedule()));
    CHECK(flag_schedule_sound(group_b_schedule()));
}

TEST_CASE("noiseless preparation: flag clear and correct codeword") {
    IonLayout layout = IonLayout::default_ten_ion();
    SteaneCode code;
    for (Basis basis : {Basis::Plus, Basis::Zero}) {
        ProtocolCircuits pc = build_protocol_circuits(basis, layout);
        ExecPlan prep = build_plan(pc.prep, clean_params(), layout, true);
        for (uint64_t seed = 0; seed < 5; ++seed) {
            TableauBackend b(10);
            LeakRegistry leak(10);
            Rng rng(seed);
            SampleResolver res;
            std::vector<uint8_t> cb(prep.num_cbits, 0);
            run_plan(prep, b, leak, rng, cb, res);
            CHECK(cb[0] == 0);
            for (int i = 0; i < 3; ++i) {
                CHECK(b.sim.expectation(data_pauli(code.plaquette[i], 0, layout)) == 1);
                CHECK(b.sim.expectation(data_pauli(0, code.plaquette[i], layout)) == 1);
            }
            if (basis == Basis::Plus) {
                CHECK(b.sim.expectation(data_pauli(code.logical, 0, layout)) == 1);
            } else {
                CHECK(b.sim.expectation(data_pauli(0, code.logical, layout)) == 1);
            }
        }
    }
}

TEST_CASE("every single prep fault is flagged or leaves a correctable residual") {
    // The code corrects bit- and phase-flip components independently, so the
    // unflagged residual must reduce to weight <= 1 per component (a single
    // Y-type fault legitimately leaves an X and a Z on different qubits).
    IonLayout layout = IonLayout::default_ten_ion();
    SteaneCode code;
    for (Basis basis : {Basis::Plus, Basis::Zero}) {
        ProtocolCircuits pc = build_protocol_circuits(basis, layout);
        ExecPlan prep = build_plan(pc.prep, clean_params(), layout, true);
        for (const FaultInjection& inj : enumerate_fault_set(prep)) {
            FrameResult fr = propagate_frame(prep, inj);
            if (fr.meas_flips[0]) continue;  // flag raised: discarded
            uint8_t rx = uint8_t((fr.xmask >> 1) & 0x7F);
            uint8_t rz = uint8_t((fr.zmask >> 1) & 0x7F);
            auto [cx, junk1] = code.reduce(rx, 0, basis == Basis::Plus, false);
            auto [junk2, cz] = code.reduce(0, rz, false, basis == Basis::Zero);
            (void)junk1; (void)junk2;
            CHECK(std::popcount(unsigned(cx)) <= 1);
            CHECK(std::popcount(unsigned(cz)) <= 1);
        }
    }
}

TEST_CASE("noiseless flagged rounds read all-zero; injected errors show up") {
    IonLayout layout = IonLayout::default_ten_ion();
    NoiseParams np = clean_params();
    ProtocolCircuits pc = build_protocol_circuits(Basis::Plus, layout);
    ExecPlan prep = build_plan(pc.prep, np, layout, true);
    ExecPlan ga = build_plan(pc.group_a, np, layout, true);
    ExecPlan gb = build_plan(pc.group_b, np, layout, true);
    ExecPlan unf = build_plan(pc.unflagged, np, layout, true);

    auto run_codeword = [&](Rng& rng, TableauBackend& b, LeakRegistry& leak) {
        SampleResolver res;
        std::vector<uint8_t> cb(prep.num_cbits, 0);
        run_plan(prep, b, leak, rng, cb, res);
        REQUIRE(cb[0] == 0);
    };

    SUBCASE("all zero on the clean codeword") {
        for (uint64_t seed = 0; seed < 5; ++seed) {
            TableauBackend b(10);
            LeakRegistry leak(10);
            Rng rng(seed + 40);
            run_codeword(rng, b, leak);
            SampleResolver res;
            std::vector<uint8_t> cba(3, 0), cbb(3, 0);
            run_plan(ga, b, leak, rng, cba, res);
            run_plan(gb, b, leak, rng, cbb, res);
            CHECK(int(cba[0] + cba[1] + cba[2] + cbb[0] + cbb[1] + cbb[2]) == 0);
        }
    }

    SUBCASE("X6 X7 shows up in exactly one Z reading of group A") {
        TableauBackend b(10);
        LeakRegistry leak(10);
        Rng rng(7);
        run_codeword(rng, b, leak);
        b.sim.apply_pauli(data_pauli((1 << 5) | (1 << 6), 0, layout));
        SampleResolver res;
        std::vector<uint8_t> cba(3, 0);
        run_plan(ga, b, leak, rng, cba, res);
        // group A reads Sx1, Sz2, Sz3
        CHECK(cba[0] == 0);
        CHECK(cba[1] == 1);
        CHECK(cba[2] == 0);
    }

    SUBCASE("unflagged round reads the textbook syndromes") {
        // single X on data 2: Z syndrome (1,1,0); single Z on data 5:
        // X syndrome (0,1,0)
        TableauBackend b(10);
        LeakRegistry leak(10);
        Rng rng(8);
        run_codeword(rng, b, leak);
        b.sim.apply_pauli(data_pauli(1 << 1, 0, layout));
        SampleResolver res;
        std::vector<uint8_t> cbu(6, 0);
        run_plan(unf, b, leak, rng, cbu, res);
        // order: sx1, sz2, sz3, sz1, sx2, sx3
        CHECK(cbu[3] == 1);
        CHECK(cbu[1] == 1);
        CHECK(cbu[2] == 0);
        CHECK(int(cbu[0] + cbu[4] + cbu[5]) == 0);

        TableauBackend b2(10);
        LeakRegistry leak2(10);
        Rng rng2(9);
        run_codeword(rng2, b2, leak2);
        b2.sim.apply_pauli(data_pauli(0, 1 << 4, layout));
        std::vector<uint8_t> cbu2(6, 0);
        run_plan(unf, b2, leak2, rng2, cbu2, res);
        CHECK(cbu2[0] == 0);
        CHECK(cbu2[4] == 1);
        CHECK(cbu2[5] == 0);
        CHECK(int(cbu2[1] + cbu2[2] + cbu2[3]) == 0);
    }
}

TEST_CASE("decode table basics") {
    NoiseParams np = clean_params();
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau);
    const DecodeTable& t = exp.table();
    const SteaneCode& code = exp.code();

    // zero signature: no correction applied by the protocol; the naive entry
    // for a zero syndrome is the identity
    Correction c0 = t.naive(0, code);
    CHECK(c0.x == 0);
    CHECK(c0.z == 0);

    // (no flag, Z-syndrome 010) -> X5 under plain syndrome decoding
    uint8_t syn6 = 1 << 1;  // sz2 bit
    Correction c = t.naive(syn6, code);
    CHECK(c.x == (1 << 4));
    CHECK(c.z == 0);

    CHECK(t.num_known() > 50);  // enumeration fills the reachable signatures
}

TEST_CASE("fault tolerance: exhaustive single faults never cause failure") {
    NoiseParams np = clean_params();
    for (Basis basis : {Basis::Plus, Basis::Zero}) {
        SteaneExperiment exp(basis, np, BackendKind::Tableau);
        FtCheckResult r = exhaustive_single_fault_check(exp);
        CHECK(r.faults_checked > 2000);
        CHECK(r.failures == 0);
    }
}

TEST_CASE("noiseless QEC rounds always succeed") {
    NoiseParams np = clean_params();
    for (Basis basis : {Basis::Plus, Basis::Zero}) {
        SteaneExperiment exp(basis, np, BackendKind::Tableau);
        for (uint64_t t = 0; t < 200; ++t) {
            Rng rng = Rng::for_trial(5, t);
            TrialOutcome out = exp.run_trial(rng);
            CHECK_FALSE(out.logical_failure);
            CHECK_FALSE(out.flags_raised);
            CHECK(out.rounds_run == 1);
            CHECK(out.prep_restarts == 0);
        }
    }
}

TEST_CASE("rounds_run is 2 exactly when something was seen") {
    NoiseParams np = clean_params();
    np.p_ms = 0.02;  // high rate so both branches occur
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau);
    int twos = 0, ones = 0;
    for (uint64_t t = 0; t < 400; ++t) {
        Rng rng = Rng::for_trial(11, t);
        TrialOutcome out = exp.run_trial(rng);
        CHECK(out.rounds_run == (out.flags_raised ? 2 : 1));
        (out.rounds_run == 2 ? twos : ones)++;
    }
    CHECK(twos > 0);
    CHECK(ones > 0);
}

TEST_CASE("direct-correct retrigger policy is selectable") {
    NoiseParams np = clean_params();
    np.p_ms = 0.01;
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau, RetriggerPolicy::DirectCorrect);
    for (uint64_t t = 0; t < 100; ++t) {
        Rng rng = Rng::for_trial(3, t);
        TrialOutcome out = exp.run_trial(rng);
        CHECK(out.rounds_run == 1);
    }
}

TEST_CASE("backend guards") {
    NoiseParams np = clean_params();
    np.crosstalk_mode = CrosstalkMode::EntanglingCoherent;
    np.p_c = 1e-4;
    CHECK_THROWS_AS(SteaneExperiment(Basis::Plus, np, BackendKind::Tableau), std::invalid_argument);
    CHECK_NOTHROW(SteaneExperiment(Basis::Plus, np, BackendKind::Dense));

    NoiseParams stoch = clean_params();
    stoch.p_ms = 1e-3;
    CHECK_THROWS_AS(SteaneExperiment(Basis::Plus, stoch, BackendKind::Paths), std::invalid_argument);
}

TEST_CASE("refocussed protocol with coherent crosstalk only never fails") {
    // end-to-end check of the structural refocussing: crosstalk is large but
    // the Z pulses are perfect, so the QEC round must behave noiselessly
    NoiseParams np = clean_params();
    np.crosstalk_mode = CrosstalkMode::EntanglingCoherent;
    np.p_c = 1e-2;
    np.refocussing = true;
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Dense);
    for (uint64_t t = 0; t < 30; ++t) {
        Rng rng = Rng::for_trial(2, t);
        TrialOutcome out = exp.run_trial(rng);
        CHECK_FALSE(out.logical_failure);
        CHECK_FALSE(out.flags_raised);
    }
}
