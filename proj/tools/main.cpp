#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ionqec/analytics.hpp"
#include "ionqec/config.hpp"
#include "ionqec/estimator.hpp"

using namespace ionqec;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    uint64_t seed = 1;
    int jobs = 0;
    std::string backend;
};

std::map<std::string, std::string> effective_config(const CommonOpts& o) {
    std::map<std::string, std::string> kv;
    if (!o.config_path.empty()) kv = load_config_file(o.config_path);
    for (const std::string& ov : o.overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) throw std::runtime_error("--set expects key=value");
        kv[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    if (!o.backend.empty()) kv["backend"] = o.backend;
    return kv;
}

Basis basis_from(const std::map<std::string, std::string>& kv) {
    auto it = kv.find("basis");
    if (it == kv.end() || it->second == "plus") return Basis::Plus;
    if (it->second == "zero") return Basis::Zero;
    throw std::runtime_error("basis must be plus or zero");
}

BackendKind backend_from(const std::map<std::string, std::string>& kv) {
    auto it = kv.find("backend");
    if (it == kv.end() || it->second == "tableau") return BackendKind::Tableau;
    if (it->second == "dense") return BackendKind::Dense;
    if (it->second == "paths") return BackendKind::Paths;
    throw std::runtime_error("backend must be tableau, dense or paths");
}

RetriggerPolicy retrigger_from(const std::map<std::string, std::string>& kv) {
    auto it = kv.find("retrigger");
    if (it == kv.end() || it->second == "remeasure") return RetriggerPolicy::Always;
    if (it->second == "direct") return RetriggerPolicy::DirectCorrect;
    throw std::runtime_error("retrigger must be remeasure or direct");
}

uint64_t u64_key(const std::map<std::string, std::string>& kv, const char* key, uint64_t dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stoull(it->second);
}

double num_key(const std::map<std::string, std::string>& kv, const char* key, double dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : std::stod(it->second);
}

std::ostream& open_out(const CommonOpts& o, std::ofstream& file) {
    if (o.out_path.empty()) return std::cout;
    file.open(o.out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + o.out_path);
    return file;
}

int cmd_simulate(const CommonOpts& o) {
    auto kv = effective_config(o);
    NoiseParams np = NoiseParams::from_kv(kv);
    Basis basis = basis_from(kv);
    BackendKind backend = backend_from(kv);
    uint64_t trials = u64_key(kv, "trials", 100000);
    SteaneExperiment exp(basis, np, backend, retrigger_from(kv));
    LogicalErrorEstimate est;
    if (backend == BackendKind::Paths) {
        double wsum = 0;
        uint64_t leaves = 0;
        est.p_log = enumerate_paths(exp, &wsum, &leaves);
        est.exact = true;
        est.n_samples = leaves;
        printf("p_log = %.17g (exact, %llu paths, weight sum %.12f)\n", est.p_log,
               static_cast<unsigned long long>(leaves), wsum);
    } else if (trials == 0) {
        est = adaptive_sample(exp, num_key(kv, "target_rel_err", 0.1), 0.0,
                              u64_key(kv, "cap", 10000000), o.seed, o.jobs);
        printf("p_log = %.17g  err = %.17g  n = %llu%s\n", est.p_log, est.err,
               static_cast<unsigned long long>(est.n_samples), est.cap_hit ? "  (cap hit)" : "");
    } else {
        est = monte_carlo(exp, trials, o.seed, o.jobs);
        printf("p_log = %.17g  err = %.17g  n = %llu\n", est.p_log, est.err,
               static_cast<unsigned long long>(est.n_samples));
    }
    if (!o.out_path.empty()) {
        SweepResult r;
        r.axis = SweepAxis::PMs;
        r.basis = basis;
        r.backend = backend;
        r.base_params = np;
        r.points.push_back({np.p_ms, est});
        std::ofstream file;
        write_sweep_csv(open_out(o, file), r, o.seed);
    }
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    auto kv = effective_config(o);
    NoiseParams np = NoiseParams::from_kv(kv);
    Basis basis = basis_from(kv);
    BackendKind backend = backend_from(kv);
    SweepAxis axis = SweepAxis::PMs;
    if (auto it = kv.find("sweep_axis"); it != kv.end()) {
        if (it->second == "p_ms") axis = SweepAxis::PMs;
        else if (it->second == "p_c") axis = SweepAxis::PC;
        else throw std::runtime_error("sweep_axis must be p_ms or p_c");
    }
    auto grid = log_grid(num_key(kv, "sweep_min", 1e-4), num_key(kv, "sweep_max", 1e-2),
                         int(u64_key(kv, "sweep_per_decade", 8)));
    uint64_t trials = u64_key(kv, "trials", 100000);
    std::ofstream file;
    std::ostream& out = open_out(o, file);

    bool compare = kv.count("compare_coherent") && kv.at("compare_coherent") == "true";
    if (compare) {
        // incoherent sampling against exact coherent path sums, with the
        // coherent / incoherent ratio per grid point
        NoiseParams inc = np;
        inc.crosstalk_mode = CrosstalkMode::EntanglingIncoherent;
        SweepResult ri = sweep(SweepAxis::PC, grid, basis, inc, BackendKind::Tableau, trials,
                               o.seed, o.jobs, retrigger_from(kv));
        NoiseParams coh = np;
        coh.crosstalk_mode = CrosstalkMode::EntanglingCoherent;
        SweepResult rc = sweep(SweepAxis::PC, grid, basis, coh, BackendKind::Paths, 0, o.seed,
                               o.jobs, retrigger_from(kv));
        out << "# ionqec sweep compare_coherent basis="
            << (basis == Basis::Plus ? "plus" : "zero") << " seed=" << o.seed << "\n";
        out << "p_c,p_log_incoherent,err_incoherent,n_samples,p_log_coherent,ratio\n";
        char buf[64];
        auto fmt = [&](double v) {
            snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        for (size_t i = 0; i < grid.size(); ++i) {
            double pinc = ri.points[i].estimate.p_log;
            double pcoh = rc.points[i].estimate.p_log;
            out << fmt(grid[i]) << "," << fmt(pinc) << "," << fmt(ri.points[i].estimate.err)
                << "," << ri.points[i].estimate.n_samples << "," << fmt(pcoh) << ","
                << fmt(pinc > 0 ? pcoh / pinc : 0.0) << "\n";
        }
        return 0;
    }

    SweepResult r = sweep(axis, grid, basis, np, backend, trials, o.seed, o.jobs,
                          retrigger_from(kv));
    write_sweep_csv(out, r, o.seed);
    if (r.pseudo_threshold) {
        fprintf(stderr, "pseudo-threshold: %.6g\n", *r.pseudo_threshold);
    } else if (axis == SweepAxis::PMs) {
        fprintf(stderr, "pseudo-threshold: absent in scanned range\n");
    }
    return 0;
}

int cmd_compile(const std::string& input, bool refocus, const CommonOpts& o) {
    std::ifstream f(input);
    if (!f) throw std::runtime_error("cannot open circuit file: " + input);
    std::stringstream ss;
    ss << f.rdbuf();
    Circuit c = Circuit::from_text(ss.str());
    if (refocus) c = insert_refocussing(c, IonLayout{c.num_ions});
    std::ofstream file;
    open_out(o, file) << c.to_text();
    return 0;
}

int cmd_analyze(const CommonOpts& o) {
    auto kv = effective_config(o);
    MsBudgetInput in = MsBudgetInput::from_kv(kv);
    std::ofstream file;
    std::ostream& out = open_out(o, file);
    for (const BudgetRow& row : budget_table(in)) {
        char buf[96];
        snprintf(buf, sizeof buf, "%-14s %.10e", row.name.c_str(), row.value);
        out << buf << "\n";
    }
    return 0;
}

int cmd_paths(const CommonOpts& o) {
    auto kv = effective_config(o);
    kv["backend"] = "paths";
    NoiseParams np = NoiseParams::from_kv(kv);
    SteaneExperiment exp(basis_from(kv), np, BackendKind::Paths, retrigger_from(kv));
    double wsum = 0;
    uint64_t leaves = 0;
    double p = enumerate_paths(exp, &wsum, &leaves);
    printf("p_log = %.17g (exact, %llu paths, weight sum %.12f)\n", p,
           static_cast<unsigned long long>(leaves), wsum);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trapped-ion QEC crosstalk simulation"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string compile_input;
    bool refocus = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key=value config file");
        sub->add_option("--seed", opts.seed, "master seed");
        sub->add_option("--out", opts.out_path, "output file (default stdout)");
        sub->add_option("--set", opts.overrides, "override config key=value")->take_all();
        sub->add_option("--jobs", opts.jobs, "worker threads (0 = hardware)");
        sub->add_option("--backend", opts.backend, "tableau | dense | paths");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "estimate one logical error rate");
    add_common(simulate);
    CLI::App* sweepcmd = app.add_subcommand("sweep", "sweep p_ms or p_c and write CSV");
    add_common(sweepcmd);
    CLI::App* compile = app.add_subcommand("compile", "compile a circuit file to native gates");
    compile->add_option("input", compile_input, "circuit text file")->required();
    compile->add_flag("--refocus", refocus, "insert the refocussing sequence");
    compile->add_option("--out", opts.out_path, "output file (default stdout)");
    CLI::App* analyze = app.add_subcommand("analyze", "crosstalk infidelity budget");
    add_common(analyze);
    CLI::App* paths = app.add_subcommand("paths", "exact coherent-model error rate");
    add_common(paths);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (sweepcmd->parsed()) return cmd_sweep(opts);
        if (compile->parsed()) return cmd_compile(compile_input, refocus, opts);
        if (analyze->parsed()) return cmd_analyze(opts);
        if (paths->parsed()) return cmd_paths(opts);
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
