#include "riskfrac/simulator.hpp"

#include "riskfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace riskfrac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate(const SimulationConfig& config) {
    if (config.steps < 1) throw domain_error("simulation needs at least one step");
    if (config.runs < 1) throw domain_error("simulation needs at least one run");
    if (!(config.starting_capital > 0.0) || !std::isfinite(config.starting_capital)) {
        throw domain_error("starting capital must be positive");
    }
}

} // namespace

std::uint64_t run_seed(std::uint64_t seed, std::size_t run_index) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(run_index)));
}

double EquityPath::capital(std::size_t t) const {
    return std::exp(log_equity.at(t));
}

double EquityPath::max_drawdown() const {
    return drawdown.empty() ? 0.0 : *std::min_element(drawdown.begin(), drawdown.end());
}

EquityPath simulate_run(const SimulationConfig& config, std::size_t run_index) {
    validate(config);
    const auto& dist = config.dist;
    const auto logs = log_hprs(dist, config.f);

    std::vector<double> cumulative(dist.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) {
        acc += dist.prob(n);
        cumulative[n] = acc;
    }

    std::mt19937_64 rng(run_seed(config.seed, run_index));
    EquityPath path;
    path.draws.reserve(config.steps);
    path.log_equity.reserve(config.steps + 1);
    path.running_max_log.reserve(config.steps + 1);
    path.drawdown.reserve(config.steps + 1);

    double log_c = std::log(config.starting_capital);
    double peak = log_c;
    path.log_equity.push_back(log_c);
    path.running_max_log.push_back(peak);
    path.drawdown.push_back(0.0);

    for (std::size_t t = 0; t < config.steps; ++t) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        auto n = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        n = std::min(n, dist.size() - 1);
        path.draws.push_back(static_cast<std::uint32_t>(n));
        log_c += logs[n];
        peak = std::max(peak, log_c);
        path.log_equity.push_back(log_c);
        path.running_max_log.push_back(peak);
        path.drawdown.push_back(std::expm1(log_c - peak));
    }
    return path;
}

std::vector<EquityPath> simulate(const SimulationConfig& config) {
    validate(config);
    std::vector<EquityPath> out;
    out.reserve(config.runs);
    for (std::size_t r = 0; r < config.runs; ++r) out.push_back(simulate_run(config, r));
    return out;
}

void DrawdownHistogram::add(double drawdown) {
    const double scaled = -drawdown * 100.0;
    const auto bin = scaled <= 0.0 ? std::size_t{0}
                                   : std::min(static_cast<std::size_t>(std::floor(scaled)), bin_count - 1);
    ++counts_[bin];
    ++total_;
}

void DrawdownHistogram::add(const EquityPath& path) {
    for (double dd : path.drawdown) add(dd);
}

double DrawdownHistogram::frequency(std::size_t bin) const {
    return total_ == 0 ? 0.0 : static_cast<double>(counts_.at(bin)) / static_cast<double>(total_);
}

double DrawdownHistogram::bin_upper(std::size_t bin) {
    return -static_cast<double>(bin) / 100.0;
}

DrawdownHistogram drawdown_distribution(std::span<const EquityPath> paths) {
    if (paths.empty()) throw domain_error("drawdown distribution needs at least one path");
    DrawdownHistogram h;
    for (const auto& p : paths) h.add(p);
    return h;
}

double pooled_fraction_below(std::span<const EquityPath> paths, double threshold) {
    std::uint64_t below = 0, total = 0;
    for (const auto& p : paths) {
        for (double dd : p.drawdown) {
            below += dd < threshold ? 1 : 0;
        }
        total += p.drawdown.size();
    }
    return total == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(total);
}

} // namespace riskfrac
