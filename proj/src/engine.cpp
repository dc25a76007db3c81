#include "usd/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace usd {

namespace {

void require_spec(const TrialSpec& spec) {
    if (!spec.initial.valid())
        throw std::invalid_argument("configuration needs non-negative counts and n >= 2");
    if (!spec.params.valid()) throw std::invalid_argument("stubbornness p must lie in [0,1]");
}

std::uint64_t effective_budget(const TrialSpec& spec) {
    return spec.max_interactions > 0 ? spec.max_interactions
                                     : default_max_interactions(spec.initial.n());
}

Outcome terminal_outcome(const Configuration& c) {
    if (c.x1 == c.n()) return Outcome::Winner1;
    if (c.x2 == c.n()) return Outcome::Winner2;
    return Outcome::Frozen;
}

TStats make_stats(std::vector<std::uint64_t>& times) {
    TStats s;
    s.count = times.size();
    if (times.empty()) return s;
    std::sort(times.begin(), times.end());
    s.min = times.front();
    s.max = times.back();
    const std::size_t m = times.size();
    s.median = (m % 2 == 1) ? static_cast<double>(times[m / 2])
                            : 0.5 * (static_cast<double>(times[m / 2 - 1]) +
                                     static_cast<double>(times[m / 2]));
    double sum = 0.0;
    for (const auto t : times) sum += static_cast<double>(t);
    s.mean = sum / static_cast<double>(m);
    // nearest-rank 95th percentile
    const std::size_t rank = (19 * m + 19) / 20;  // ceil(0.95 m)
    s.p95 = static_cast<double>(times[std::min(rank, m) - 1]);
    return s;
}

}  // namespace

const char* outcome_name(Outcome o) noexcept {
    switch (o) {
        case Outcome::Winner1: return "winner1";
        case Outcome::Winner2: return "winner2";
        case Outcome::Frozen: return "frozen";
        case Outcome::Timeout: return "timeout";
    }
    return "unknown";
}

std::uint64_t default_max_interactions(std::int64_t n) {
    const double ln_n = std::log(static_cast<double>(n));
    return static_cast<std::uint64_t>(std::ceil(200.0 * static_cast<double>(n) * ln_n * ln_n));
}

std::pair<AbsorptionResult, std::optional<TrajectoryRecord>> run_trial(const TrialSpec& spec) {
    require_spec(spec);
    const std::uint64_t budget = effective_budget(spec);

    Configuration c = spec.initial;
    Xoshiro256pp rng(spec.seed);

    const bool record = spec.record_stride > 0;
    std::optional<TrajectoryRecord> trajectory;
    std::uint64_t next_mark = 0;
    if (record) {
        trajectory.emplace();
        trajectory->points.push_back({0, c});
        next_mark = spec.record_stride;
    }

    std::uint64_t t = 0;
    AbsorptionResult result;
    for (;;) {
        if (c.absorbed() || c.frozen()) {
            result = {terminal_outcome(c), t, c};
            break;
        }
        const InteractionOutcome out = sample_productive_step(c, spec.params, rng);
        if (out.elapsed > budget - t) {
            // the change falls beyond the budget; c is still in force at time `budget`
            if (record) {
                while (next_mark <= budget) {
                    trajectory->points.push_back({next_mark, c});
                    next_mark += spec.record_stride;
                }
            }
            result = {Outcome::Timeout, budget, c};
            break;
        }
        t += out.elapsed;
        if (record) {
            while (next_mark < t) {
                trajectory->points.push_back({next_mark, c});
                next_mark += spec.record_stride;
            }
            if (next_mark == t) {
                trajectory->points.push_back({t, out.next});
                next_mark += spec.record_stride;
            }
        }
        c = out.next;
    }

    if (record && (trajectory->points.empty() || trajectory->points.back().t != result.interactions)) {
        trajectory->points.push_back({result.interactions, result.final_config});
    }
    return {result, std::move(trajectory)};
}

BatchResult run_batch_detailed(const TrialSpec& spec, std::uint64_t trials, unsigned parallelism) {
    require_spec(spec);
    if (trials < 1) throw std::invalid_argument("a batch needs at least one trial");

    BatchResult result;
    result.trials.resize(trials);
    const bool record = spec.record_stride > 0;
    if (record) result.trajectories.resize(trials);

    unsigned workers = parallelism > 0 ? parallelism : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(trials, 1024))));

    std::atomic<std::uint64_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t i = cursor.fetch_add(1);
            if (i >= trials) return;
            TrialSpec one = spec;
            one.seed = stream_seed(spec.seed, i);
            auto [res, traj] = run_trial(one);
            result.trials[i] = res;
            if (record) result.trajectories[i] = std::move(*traj);
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    BatchSummary& s = result.summary;
    s.trials = trials;
    std::array<std::vector<std::uint64_t>, 4> times;
    for (const auto& r : result.trials) {
        times[static_cast<std::size_t>(r.outcome)].push_back(r.interactions);
        switch (r.outcome) {
            case Outcome::Winner1: ++s.wins1; break;
            case Outcome::Winner2: ++s.wins2; break;
            case Outcome::Frozen: ++s.frozen; break;
            case Outcome::Timeout: ++s.timeouts; break;
        }
    }
    for (std::size_t k = 0; k < 4; ++k) s.t_stats[k] = make_stats(times[k]);
    return result;
}

BatchSummary run_batch(const TrialSpec& spec, std::uint64_t trials, unsigned parallelism) {
    return run_batch_detailed(spec, trials, parallelism).summary;
}

}  // namespace usd
