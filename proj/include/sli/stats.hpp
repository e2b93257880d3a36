#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sli/game.hpp"
#include "sli/solvers.hpp"

namespace sli {

struct BootstrapResult {
    double point = 0.0;  // observed sample mean
    std::pair<double, double> ci{0.0, 0.0};
    double level = 0.95;
    std::int64_t n_resamples = 0;
    std::uint64_t seed = 0;
};

// Percentile-method CI of the sample mean over n_resamples resamples with
// replacement; deterministic given seed.
BootstrapResult bootstrap_ci(std::span<const double> samples, std::int64_t n_resamples = 1000,
                             double level = 0.95, std::uint64_t seed = 0);

struct ConvergenceRow {
    std::int64_t n = 0;
    double estimate = 0.0;
    double standard_error = 0.0;
};

// Runs skill_leverage_mc at each sample size of a nondecreasing schedule;
// used to check the O(1/sqrt(N)) shrink of the standard error.
std::vector<ConvergenceRow> convergence_report(const GameDef& game,
                                               const std::vector<std::int64_t>& n_schedule,
                                               std::uint64_t seed);

}  // namespace sli
