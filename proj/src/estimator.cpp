#include "ionqec/estimator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

namespace ionqec {

namespace {
uint64_t run_block(const SteaneExperiment& exp, uint64_t begin, uint64_t end, uint64_t seed) {
    uint64_t failures = 0;
    for (uint64_t t = begin; t < end; ++t) {
        Rng rng = Rng::for_trial(seed, t);
        if (exp.run_trial(rng).logical_failure) ++failures;
    }
    return failures;
}
}  // namespace

LogicalErrorEstimate monte_carlo(const SteaneExperiment& exp, uint64_t n_samples,
                                 uint64_t master_seed, int jobs) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    unsigned workers = jobs > 0 ? unsigned(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = unsigned(std::min<uint64_t>(workers, n_samples));
    std::atomic<uint64_t> total_failures{0};
    std::vector<std::thread> pool;
    uint64_t chunk = (n_samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        uint64_t begin = w * chunk;
        uint64_t end = std::min(n_samples, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            total_failures += run_block(exp, begin, end, master_seed);
        });
    }
    for (auto& th : pool) th.join();
    LogicalErrorEstimate est;
    est.n_samples = n_samples;
    est.n_failures = total_failures.load();
    est.p_log = double(est.n_failures) / double(n_samples);
    est.err = std::sqrt(est.p_log * (1.0 - est.p_log) / double(n_samples));
    return est;
}

LogicalErrorEstimate adaptive_sample(const SteaneExperiment& exp, double rel_target,
                                     double abs_target, uint64_t cap, uint64_t master_seed,
                                     int jobs, uint64_t first_batch) {
    if (cap > 100000000ULL) throw std::invalid_argument("cap must be <= 1e8");
    uint64_t n = 0, failures = 0;
    uint64_t batch = std::max<uint64_t>(first_batch, 1);
    unsigned workers = jobs > 0 ? unsigned(jobs) : std::max(1u, std::thread::hardware_concurrency());
    LogicalErrorEstimate est;
    while (n < cap) {
        uint64_t target = std::min(cap, n + batch);
        std::atomic<uint64_t> block_failures{0};
        std::vector<std::thread> pool;
        uint64_t count = target - n;
        uint64_t chunk = (count + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            uint64_t begin = n + w * chunk;
            uint64_t end = std::min(target, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                block_failures += run_block(exp, begin, end, master_seed);
            });
        }
        for (auto& th : pool) th.join();
        failures += block_failures.load();
        n = target;
        batch *= 2;

        est.n_samples = n;
        est.n_failures = failures;
        est.p_log = double(failures) / double(n);
        est.err = std::sqrt(est.p_log * (1.0 - est.p_log) / double(n));
        if (failures == 0) continue;  // no error scale yet, keep growing
        if (est.err < std::max(rel_target * est.p_log, abs_target)) return est;
    }
    est.cap_hit = true;
    if (est.n_failures == 0) {
        est.p_log = 0.0;
        est.err = 3.0 / double(std::max<uint64_t>(est.n_samples, 1));  // rule of three
    }
    return est;
}

// ---------------------------------------------------------------------------
// Exhaustive measurement-path enumeration

namespace {

struct BranchSignal {
    double p0, p1;
};

/// Resolver that replays a recorded outcome prefix and reports the branch
/// probabilities when it runs past the end.
struct PathResolver {
    const std::vector<uint8_t>* path = nullptr;
    size_t cursor = 0;
    double weight = 1.0;
    int condition_zero_remaining = 0;  // leading measurements forced to 0

    bool resolve(DenseBackend& b, int pos, Rng&) {
        auto [p0, p1] = b.sim.branch_probs(pos - 1);
        double tot = p0 + p1;
        if (condition_zero_remaining > 0) {
            --condition_zero_remaining;
            b.sim.project(pos - 1, false);
            return false;  // conditioned, weight unchanged
        }
        if (cursor < path->size()) {
            bool out = (*path)[cursor++] != 0;
            weight *= (out ? p1 : p0) / tot;
            b.sim.project(pos - 1, out);
            return out;
        }
        throw BranchSignal{p0 / tot, p1 / tot};
    }
    bool resolve(TableauBackend&, int, Rng&) {
        throw std::logic_error("path enumeration needs the dense backend");
    }
};

struct LeafValue {
    double weight;
    double p_fail;
};

}  // namespace

class PathEnumerator {
public:
    explicit PathEnumerator(const SteaneExperiment& exp) : exp_(exp) {}

    /// Runs the protocol along `path`; returns a leaf value or throws
    /// BranchSignal at the first unresolved measurement.
    LeafValue run(const std::vector<uint8_t>& path) const {
        DenseBackend backend(exp_.layout_.num_ions);
        LeakRegistry leak(exp_.layout_.num_ions);
        Rng rng(1);  // never consulted: coherent-only, all branches resolved
        PathResolver res;
        res.path = &path;
        res.condition_zero_remaining = 1;  // the preparation flag

        std::vector<uint8_t> cbp(exp_.prep_p_.num_cbits, 0);
        run_plan(exp_.prep_p_, backend, leak, rng, cbp, res);
        std::vector<uint8_t> cbr(exp_.repump_p_.num_cbits, 0);
        run_plan(exp_.repump_p_, backend, leak, rng, cbr, res);
        std::vector<uint8_t> cba(3, 0), cbb(3, 0);
        run_plan(exp_.ga_p_, backend, leak, rng, cba, res);
        run_plan(exp_.gb_p_, backend, leak, rng, cbb, res);
        uint8_t bits1 = uint8_t(cba[0] | cba[1] << 1 | cba[2] << 2 | cbb[0] << 3 | cbb[1] << 4 | cbb[2] << 5);

        Correction corr{};
        if (bits1 != 0) {
            if (exp_.retrigger_ == RetriggerPolicy::Always) {
                std::vector<uint8_t> cbu(6, 0);
                run_plan(exp_.unf_p_, backend, leak, rng, cbu, res);
                uint8_t s2 = uint8_t(cbu[0] | cbu[1] << 1 | cbu[2] << 2 | cbu[3] << 3 | cbu[4] << 4 | cbu[5] << 5);
                corr = exp_.table_.lookup(bits1, s2, exp_.code_);
            } else {
                corr = exp_.table_.naive(bits1, exp_.code_);
            }
        }
        exp_.apply_correction(backend, corr);

        // readout: apply the basis rotations, then evaluate the logical
        // failure probability analytically over all 2^7 data patterns
        for (const PlanOp& op : exp_.ro_p_.ops) {
            if (op.kind == OpKind::Rot) backend.rot(op.axis, op.theta, op.a);
        }
        double p_fail = 0.0;
        std::vector<double> pattern_prob(128, 0.0);
        const auto& amp = backend.sim.amplitudes();
        for (size_t i = 0; i < amp.size(); ++i) {
            pattern_prob[(i >> 1) & 0x7F] += std::norm(amp[i]);
        }
        std::vector<uint8_t> bits(7);
        for (int pat = 0; pat < 128; ++pat) {
            if (pattern_prob[pat] < 1e-20) continue;  // rotation roundoff dust
            for (int q = 0; q < 7; ++q) bits[q] = (pat >> q) & 1;
            if (exp_.decode_readout(bits)) p_fail += pattern_prob[pat];
        }
        return {res.weight, p_fail};
    }

private:
    const SteaneExperiment& exp_;
};

double enumerate_paths(const SteaneExperiment& exp, double* weight_sum, uint64_t* num_leaves,
                       double prune_below) {
    if (!exp.noise().coherent_only()) {
        throw std::invalid_argument("enumeration valid for coherent-only models");
    }
    PathEnumerator en(exp);
    double total = 0.0, wsum = 0.0;
    uint64_t leaves = 0;
    std::vector<std::vector<uint8_t>> stack;
    stack.push_back({});
    while (!stack.empty()) {
        std::vector<uint8_t> path = std::move(stack.back());
        stack.pop_back();
        try {
            LeafValue leaf = en.run(path);
            total += leaf.weight * leaf.p_fail;
            wsum += leaf.weight;
            ++leaves;
        } catch (const BranchSignal& br) {
            if (br.p1 > prune_below) {
                auto p = path;
                p.push_back(1);
                stack.push_back(std::move(p));
            }
            if (br.p0 > prune_below) {
                auto p = path;
                p.push_back(0);
                stack.push_back(std::move(p));
            }
        }
    }
    if (weight_sum) *weight_sum = wsum;
    if (num_leaves) *num_leaves = leaves;
    return total;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("bad grid bounds");
    if (per_decade < 1) throw std::invalid_argument("per_decade must be >= 1");
    double decades = std::log10(hi / lo);
    int n = std::max(2, int(std::ceil(decades * per_decade)) + 1);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

std::optional<double> pseudo_threshold_from_points(const std::vector<SweepPoint>& pts) {
    // crossing of p_log(p) = p, interpolated on log-log axes; report the
    // largest crossing in range
    std::optional<double> best;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double x0 = pts[i].axis_value, x1 = pts[i + 1].axis_value;
        double y0 = pts[i].estimate.p_log, y1 = pts[i + 1].estimate.p_log;
        if (y0 <= 0 || y1 <= 0) continue;
        double f0 = std::log(y0) - std::log(x0);
        double f1 = std::log(y1) - std::log(x1);
        if (f0 == 0.0) best = x0;
        if (f1 == 0.0) best = x1;
        if (f0 * f1 < 0) {
            double t = f0 / (f0 - f1);
            best = std::exp(std::log(x0) + t * (std::log(x1) - std::log(x0)));
        }
    }
    return best;
}

SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, Basis basis,
                  const NoiseParams& base, BackendKind backend, uint64_t n_samples,
                  uint64_t master_seed, int jobs, RetriggerPolicy retrigger) {
    if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
    SweepResult result;
    result.axis = axis;
    result.basis = basis;
    result.backend = backend;
    result.base_params = base;
    for (size_t i = 0; i < grid.size(); ++i) {
        NoiseParams np = base;
        if (axis == SweepAxis::PMs) np.p_ms = grid[i];
        else np.p_c = grid[i];
        SteaneExperiment exp(basis, np, backend, retrigger);
        LogicalErrorEstimate est;
        if (backend == BackendKind::Paths) {
            double wsum = 0;
            uint64_t leaves = 0;
            est.p_log = enumerate_paths(exp, &wsum, &leaves);
            est.exact = true;
            est.n_samples = leaves;
        } else if (n_samples == 0) {
            est = adaptive_sample(exp, 0.1, 0.0, 10000000ULL, master_seed + i, jobs);
        } else {
            est = monte_carlo(exp, n_samples, master_seed + i, jobs);
        }
        result.points.push_back({grid[i], est});
    }
    if (axis == SweepAxis::PMs) {
        result.pseudo_threshold = pseudo_threshold_from_points(result.points);
    }
    return result;
}

std::string config_hash(const std::string& echo) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : echo) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_sweep_csv(std::ostream& out, const SweepResult& r, uint64_t master_seed) {
    std::ostringstream echo;
    echo << "axis=" << (r.axis == SweepAxis::PMs ? "p_ms" : "p_c")
         << " basis=" << (r.basis == Basis::Plus ? "plus" : "zero")
         << " backend=" << (r.backend == BackendKind::Tableau ? "tableau"
                            : r.backend == BackendKind::Dense ? "dense" : "paths")
         << " seed=" << master_seed;
    for (const auto& [k, v] : r.base_params.to_kv()) echo << " " << k << "=" << v;
    std::string echo_str = echo.str();
    std::string hash = config_hash(echo_str);

    out << "# ionqec sweep " << echo_str << "\n";
    auto kv = r.base_params.to_kv();
    out << (r.axis == SweepAxis::PMs ? "p_ms" : "p_c") << ",p_log,err,n_samples";
    for (const auto& [k, v] : kv) out << "," << k;
    out << ",config_hash\n";
    char buf[64];
    auto fmt = [&](double v) {
        snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& pt : r.points) {
        out << fmt(pt.axis_value) << "," << fmt(pt.estimate.p_log) << "," << fmt(pt.estimate.err)
            << "," << pt.estimate.n_samples;
        auto row_kv = kv;
        row_kv[r.axis == SweepAxis::PMs ? "p_ms" : "p_c"] = fmt(pt.axis_value);
        for (const auto& [k, v] : row_kv) out << "," << v;
        out << "," << hash << "\n";
    }
    if (r.pseudo_threshold) {
        out << "# pseudo_threshold=" << fmt(*r.pseudo_threshold) << "\n";
    } else if (r.axis == SweepAxis::PMs) {
        out << "# pseudo_threshold=absent\n";
    }
}

}  // namespace ionqec
