#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "usd/core.hpp"

// Monte Carlo execution: single trials to absorption with the geometric-skip
// acceleration, optional trajectory recording by virtual-clock stride, and
// reproducible parallel batches. Trial i of a batch uses the RNG stream
// stream_seed(spec.seed, i); results are bit-identical for any thread count.

namespace usd {

struct TrialSpec {
    Configuration initial;
    ProtocolParams params;
    std::uint64_t seed = 0;
    std::uint64_t max_interactions = 0;  // 0 = default budget 200 n (ln n)^2
    std::uint64_t record_stride = 0;     // 0 = no trajectory
};

enum class Outcome : std::uint8_t { Winner1 = 0, Winner2 = 1, Frozen = 2, Timeout = 3 };

const char* outcome_name(Outcome o) noexcept;

struct AbsorptionResult {
    Outcome outcome = Outcome::Timeout;
    std::uint64_t interactions = 0;
    Configuration final_config;
};

struct TrajectoryPoint {
    std::uint64_t t = 0;
    Configuration c;
};

struct TrajectoryRecord {
    std::vector<TrajectoryPoint> points;  // strictly increasing t, ends at the stopping point
};

struct TStats {
    std::uint64_t count = 0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    double median = 0.0;
    double mean = 0.0;
    double p95 = 0.0;
};

struct BatchSummary {
    std::uint64_t trials = 0;
    std::uint64_t wins1 = 0;
    std::uint64_t wins2 = 0;
    std::uint64_t frozen = 0;
    std::uint64_t timeouts = 0;
    std::array<TStats, 4> t_stats;  // indexed by Outcome

    const TStats& stats(Outcome o) const noexcept { return t_stats[static_cast<std::size_t>(o)]; }
};

struct BatchResult {
    BatchSummary summary;
    std::vector<AbsorptionResult> trials;          // indexed by trial
    std::vector<TrajectoryRecord> trajectories;    // empty when record_stride == 0
};

/// Budget covering the critical regime with slack: 200 * n * (ln n)^2.
std::uint64_t default_max_interactions(std::int64_t n);

/// One trial to absorption, freeze, or budget exhaustion.
std::pair<AbsorptionResult, std::optional<TrajectoryRecord>> run_trial(const TrialSpec& spec);

/// `trials` independent trials with per-trial seeds stream_seed(spec.seed, i).
/// parallelism = 0 picks the hardware thread count. The summary depends only
/// on the spec and trial count, never on the schedule.
BatchSummary run_batch(const TrialSpec& spec, std::uint64_t trials, unsigned parallelism = 0);

/// Same, keeping every per-trial result (and trajectories when recording).
BatchResult run_batch_detailed(const TrialSpec& spec, std::uint64_t trials,
                               unsigned parallelism = 0);

}  // namespace usd
