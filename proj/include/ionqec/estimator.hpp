#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ionqec/steane.hpp"

namespace ionqec {

struct LogicalErrorEstimate {
    double p_log = 0.0;
    double err = 0.0;  // sqrt(p (1-p) / n)
    uint64_t n_samples = 0;
    uint64_t n_failures = 0;
    bool cap_hit = false;
    bool exact = false;  // from path enumeration
};

/// n_samples independent trials with per-trial RNG streams derived from
/// (master_seed, trial index); the result does not depend on the worker
/// count.
LogicalErrorEstimate monte_carlo(const SteaneExperiment& exp, uint64_t n_samples,
                                 uint64_t master_seed, int jobs = 0);

/// Grow the sample count geometrically until err < max(rel_target * p_log,
/// abs_target) or the cap is reached (reported via cap_hit, not an error).
/// With zero observed failures the rule-of-three bound 3/n is reported as
/// p_log's upper bound in err.
LogicalErrorEstimate adaptive_sample(const SteaneExperiment& exp, double rel_target,
                                     double abs_target, uint64_t cap, uint64_t master_seed,
                                     int jobs = 0, uint64_t first_batch = 4096);

/// Exact logical error probability of a coherent-only experiment by
/// depth-first traversal of every measurement branch. The traversal
/// conditions on an accepted (flag = 0) preparation, matching the restart
/// semantics of the sampling path. weight_sum (when given) receives the
/// total traversed branch weight, 1 up to pruning.
double enumerate_paths(const SteaneExperiment& exp, double* weight_sum = nullptr,
                       uint64_t* num_leaves = nullptr, double prune_below = 1e-14);

enum class SweepAxis { PMs, PC };

struct SweepPoint {
    double axis_value;
    LogicalErrorEstimate estimate;
};

struct SweepResult {
    SweepAxis axis;
    Basis basis;
    BackendKind backend;
    NoiseParams base_params;
    std::vector<SweepPoint> points;
    std::optional<double> pseudo_threshold;  // p_log(p_ms) = p_ms crossing
};

/// Log-spaced grid with at least `per_decade` points per decade.
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// One estimate per grid point. For BackendKind::Paths the estimates are
/// exact path enumerations; otherwise Monte Carlo with n_samples trials
/// (adaptive when n_samples == 0). The pseudo-threshold is the largest
/// p_log(p_ms) = p_ms crossing found by log-log interpolation; absent when
/// the curve never crosses (only computed for the PMs axis).
SweepResult sweep(SweepAxis axis, const std::vector<double>& grid, Basis basis,
                  const NoiseParams& base, BackendKind backend, uint64_t n_samples,
                  uint64_t master_seed, int jobs = 0,
                  RetriggerPolicy retrigger = RetriggerPolicy::Always);

std::optional<double> pseudo_threshold_from_points(const std::vector<SweepPoint>& pts);

/// CSV with a '#' header echoing the full effective configuration and a
/// short config hash; floats are written with 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepResult& result, uint64_t master_seed);

/// FNV-1a hash of the canonical config echo, hex encoded.
std::string config_hash(const std::string& echo);

/// Fit slope of log(y) vs log(x) by least squares.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ionqec
