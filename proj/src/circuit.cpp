#include "ionqec/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ionqec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

IonLayout IonLayout::default_ten_ion() { return IonLayout{10}; }

std::vector<int> IonLayout::neighbors(int p) const {
    std::vector<int> out;
    if (p - 1 >= 1) out.push_back(p - 1);
    if (p + 1 <= num_ions) out.push_back(p + 1);
    return out;
}

std::vector<int> IonLayout::gate_neighbors(int i, int j) const {
    std::vector<int> out;
    for (int p : {i - 1, i + 1, j - 1, j + 1}) {
        if (p < 1 || p > num_ions || p == i || p == j) continue;
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

void DurationTable::validate() const {
    for (double d : {ms_gate, one_qubit, measurement, reset, recool, repump}) {
        if (!(d > 0)) throw std::invalid_argument("durations must be positive");
    }
}

double DurationTable::event_duration(const Event& e) const {
    switch (e.kind) {
        case EventKind::Rotation: return one_qubit;
        case EventKind::Ms: return ms_gate * std::abs(e.theta) / (kPi / 2);
        case EventKind::Prepare0: return reset;
        case EventKind::MeasureZ: return measurement;
        case EventKind::RepumpLeak: return repump;
        case EventKind::Barrier: return 0.0;
    }
    return 0.0;
}

void Circuit::rotation(RotAxis ax, double theta, int ion) {
    events.push_back({EventKind::Rotation, ax, theta, ion, 0, -1, 0, -1});
}

void Circuit::ms(double theta, int i, int j) {
    if (i == j) throw std::invalid_argument("ms needs two distinct ions");
    events.push_back({EventKind::Ms, RotAxis::X, theta, i, j, -1, 0, -1});
}

void Circuit::prepare0(int ion) {
    events.push_back({EventKind::Prepare0, RotAxis::X, 0, ion, 0, -1, 0, -1});
}

int Circuit::measure_z(int ion) {
    int cbit = num_cbits++;
    events.push_back({EventKind::MeasureZ, RotAxis::X, 0, ion, 0, cbit, 0, -1});
    return cbit;
}

void Circuit::repump(int ion) {
    events.push_back({EventKind::RepumpLeak, RotAxis::X, 0, ion, 0, -1, 0, -1});
}

void Circuit::barrier() {
    events.push_back({EventKind::Barrier, RotAxis::X, 0, 0, 0, -1, 0, -1});
}

void Circuit::append(const Circuit& other) {
    for (Event e : other.events) {
        if (e.kind == EventKind::MeasureZ) e.cbit = num_cbits++;
        events.push_back(e);
    }
}

void Circuit::cnot(int control, int target, bool ms_positive) {
    // Ry(pi/2)_c, MS(+-pi/2), Rx(-+pi/2)_c, Rx(-+pi/2)_t, Ry(-pi/2)_c in
    // time order; both signs verified against the 4x4 matrix in tests.
    double s = ms_positive ? 1.0 : -1.0;
    rotation(RotAxis::Y, kPi / 2, control);
    ms(s * kPi / 2, control, target);
    rotation(RotAxis::X, -s * kPi / 2, control);
    rotation(RotAxis::X, -s * kPi / 2, target);
    rotation(RotAxis::Y, -kPi / 2, control);
}

std::string Circuit::to_text() const {
    std::ostringstream out;
    out << "IONS " << num_ions << "\n";
    for (const Event& e : events) {
        char buf[96];
        switch (e.kind) {
            case EventKind::Rotation: {
                const char* ax = e.axis == RotAxis::X ? "RX" : e.axis == RotAxis::Y ? "RY" : "RZ";
                snprintf(buf, sizeof buf, "%s %.17g %d", ax, e.theta, e.a);
                break;
            }
            case EventKind::Ms: snprintf(buf, sizeof buf, "MS %.17g %d %d", e.theta, e.a, e.b); break;
            case EventKind::Prepare0: snprintf(buf, sizeof buf, "PREP %d", e.a); break;
            case EventKind::MeasureZ: snprintf(buf, sizeof buf, "MEASURE %d %d", e.a, e.cbit); break;
            case EventKind::RepumpLeak: snprintf(buf, sizeof buf, "REPUMP %d", e.a); break;
            case EventKind::Barrier: snprintf(buf, sizeof buf, "BARRIER"); break;
        }
        out << buf << "\n";
    }
    return out.str();
}

Circuit Circuit::from_text(const std::string& text) {
    std::istringstream in(text);
    Circuit c;
    std::string line;
    int lineno = 0;
    bool have_ions = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + why);
        };
        if (op == "IONS") {
            if (!(ls >> c.num_ions) || c.num_ions <= 0) fail("bad ion count");
            have_ions = true;
        } else if (op == "RX" || op == "RY" || op == "RZ") {
            double th; int ion;
            if (!(ls >> th >> ion)) fail("expected: " + op + " theta ion");
            RotAxis ax = op == "RX" ? RotAxis::X : op == "RY" ? RotAxis::Y : RotAxis::Z;
            c.rotation(ax, th, ion);
        } else if (op == "MS") {
            double th; int i, j;
            if (!(ls >> th >> i >> j)) fail("expected: MS theta ion ion");
            if (i == j) fail("MS ions must differ");
            c.ms(th, i, j);
        } else if (op == "CNOT") {
            // accepted on input, expanded to the native gate set
            int ctl, tgt;
            if (!(ls >> ctl >> tgt)) fail("expected: CNOT control target");
            if (ctl == tgt) fail("CNOT ions must differ");
            if (ctl < 1 || tgt < 1 || ctl > c.num_ions || tgt > c.num_ions) fail("ion out of range");
            c.cnot(ctl, tgt);
        } else if (op == "PREP") {
            int ion;
            if (!(ls >> ion)) fail("expected: PREP ion");
            c.prepare0(ion);
        } else if (op == "MEASURE") {
            int ion, cbit = -1;
            if (!(ls >> ion)) fail("expected: MEASURE ion [cbit]");
            ls >> cbit;
            (void)cbit;
            c.measure_z(ion);
        } else if (op == "REPUMP") {
            int ion;
            if (!(ls >> ion)) fail("expected: REPUMP ion");
            c.repump(ion);
        } else if (op == "BARRIER") {
            c.barrier();
        } else {
            fail("unknown op '" + op + "'");
        }
        if (!have_ions) fail("first line must be IONS n");
        if (c.events.size() && c.events.back().kind != EventKind::Barrier) {
            const Event& e = c.events.back();
            int hi = std::max(e.a, e.b);
            if (hi > c.num_ions || e.a < 1 || (e.kind == EventKind::Ms && e.b < 1)) {
                fail("ion out of range");
            }
        }
    }
    if (!have_ions) throw std::runtime_error("line 1: empty circuit file");
    return c;
}

Circuit insert_refocussing(const Circuit& c, const IonLayout& layout) {
    Circuit out(c.num_ions);
    for (const Event& e : c.events) {
        if (e.kind != EventKind::Ms) {
            Event copy = e;
            if (copy.kind == EventKind::MeasureZ) copy.cbit = out.num_cbits++;
            out.events.push_back(copy);
            continue;
        }
        auto spectators = layout.gate_neighbors(e.a, e.b);
        out.ms(e.theta / 2, e.a, e.b);
        for (int n : spectators) out.rotation(RotAxis::Z, kPi, n);
        out.ms(e.theta / 2, e.a, e.b);
        for (int n : spectators) out.rotation(RotAxis::Z, kPi, n);
    }
    return out;
}

Schedule schedule(const Circuit& c, const DurationTable& durations) {
    durations.validate();
    Schedule sched;
    sched.start_us.assign(c.events.size(), 0.0);
    sched.duration_us.assign(c.events.size(), 0.0);
    std::vector<double> busy_until(c.num_ions + 1, 0.0);
    double last_ms_end = 0.0;    // one addressed beam pair: MS gates serialise

    double slot_end = 0.0;       // end of the currently open batch slot
    EventKind slot_kind = EventKind::Barrier;
    bool slot_open = false;
    std::vector<bool> slot_ions(c.num_ions + 1, false);

    auto close_slot = [&] {
        slot_open = false;
        std::fill(slot_ions.begin(), slot_ions.end(), false);
    };

    for (size_t idx = 0; idx < c.events.size(); ++idx) {
        const Event& e = c.events[idx];
        double dur = durations.event_duration(e);
        sched.duration_us[idx] = dur;
        if (e.kind == EventKind::Barrier) {
            double t = *std::max_element(busy_until.begin() + 1, busy_until.end());
            std::fill(busy_until.begin() + 1, busy_until.end(), t);
            sched.start_us[idx] = t;
            close_slot();
            continue;
        }
        bool batchable = e.kind == EventKind::Rotation || e.kind == EventKind::Prepare0 ||
                         e.kind == EventKind::MeasureZ || e.kind == EventKind::RepumpLeak;
        bool reuse = slot_open && batchable && slot_kind == e.kind && !slot_ions[e.a] &&
                     busy_until[e.a] <= slot_end - dur + 1e-12;
        double start;
        if (reuse) {
            start = slot_end - dur;
        } else {
            start = busy_until[e.a];
            if (e.kind == EventKind::Ms) {
                start = std::max({start, busy_until[e.b], last_ms_end});
            }
            if (batchable) {
                slot_open = true;
                slot_kind = e.kind;
                std::fill(slot_ions.begin(), slot_ions.end(), false);
                slot_end = start + dur;
            } else {
                close_slot();
            }
        }
        sched.start_us[idx] = start;
        busy_until[e.a] = start + dur;
        slot_ions[e.a] = true;
        if (e.kind == EventKind::Ms) {
            busy_until[e.b] = start + dur;
            slot_ions[e.b] = true;
            last_ms_end = start + dur;
        }
    }
    sched.total_us = c.num_ions ? *std::max_element(busy_until.begin() + 1, busy_until.end()) : 0.0;

    // idle gaps per ion, attached to the event that ends them
    std::vector<double> last_end(c.num_ions + 1, 0.0);
    for (size_t idx = 0; idx < c.events.size(); ++idx) {
        const Event& e = c.events[idx];
        if (e.kind == EventKind::Barrier) continue;
        for (int ion : {e.a, e.kind == EventKind::Ms ? e.b : 0}) {
            if (ion == 0) continue;
            double gap = sched.start_us[idx] - last_end[ion];
            if (gap > 1e-9) sched.idles.push_back({ion, gap, idx});
            last_end[ion] = sched.start_us[idx] + sched.duration_us[idx];
        }
    }
    for (int ion = 1; ion <= c.num_ions; ++ion) {
        double gap = sched.total_us - last_end[ion];
        if (gap > 1e-9) sched.idles.push_back({ion, gap, c.events.size()});
    }
    return sched;
}

}  // namespace ionqec
