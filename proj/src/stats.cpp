#include "sli/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sli/error.hpp"
#include "sli/leverage.hpp"
#include "sli/parallel.hpp"
#include "sli/rng.hpp"

namespace sli {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    // type-7 linear interpolation
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

BootstrapResult bootstrap_ci(std::span<const double> samples, std::int64_t n_resamples, double level,
                             std::uint64_t seed) {
    if (samples.empty()) throw ContractError("bootstrap_ci: empty sample");
    if (n_resamples < 1) throw ContractError("bootstrap_ci: n_resamples must be >= 1");
    if (level <= 0.0 || level >= 1.0) throw ContractError("bootstrap_ci: level must be in (0,1)");

    const std::size_t n = samples.size();
    double point = 0.0;
    for (double x : samples) point += x;
    point /= static_cast<double>(n);

    std::vector<double> means(static_cast<std::size_t>(n_resamples));
    parallel_for(n_resamples, [&](std::int64_t b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += samples[static_cast<std::size_t>(rng.next_u64() % n)];
        }
        means[static_cast<std::size_t>(b)] = sum / static_cast<double>(n);
    });
    std::sort(means.begin(), means.end());

    const double alpha = 1.0 - level;
    BootstrapResult result;
    result.point = point;
    result.ci = {quantile_sorted(means, alpha / 2.0), quantile_sorted(means, 1.0 - alpha / 2.0)};
    result.level = level;
    result.n_resamples = n_resamples;
    result.seed = seed;
    return result;
}

std::vector<ConvergenceRow> convergence_report(const GameDef& game,
                                               const std::vector<std::int64_t>& n_schedule,
                                               std::uint64_t seed) {
    for (std::size_t i = 1; i < n_schedule.size(); ++i) {
        if (n_schedule[i] < n_schedule[i - 1]) {
            throw ContractError("convergence_report: schedule must be nondecreasing");
        }
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_schedule.size());
    for (std::size_t i = 0; i < n_schedule.size(); ++i) {
        std::uint64_t s = seed;
        Rng mix = Rng::stream(seed, i);  // independent draws per schedule step
        s = mix.next_u64();
        LeverageEstimate est = skill_leverage_mc(game, n_schedule[i], s);
        rows.push_back({n_schedule[i], est.point, est.standard_error});
    }
    return rows;
}

}  // namespace sli
