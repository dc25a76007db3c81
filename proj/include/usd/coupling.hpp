#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "usd/core.hpp"

// Labeled-agent realization of the monotone coupling: the state order
// Opinion1 >= Undecided >= Opinion2, the configuration order (x1 and x1+u
// componentwise), and a coupled step that feeds identical scheduler draws
// (i, j, r) to two chains kept sorted by state rank. Starting from ordered
// configurations with p >= p_tilde, the order is preserved step by step.

namespace usd {

/// Total order on states: Opinion1 >= Undecided >= Opinion2.
bool state_geq(AgentState q, AgentState q_tilde) noexcept;

/// Configuration order: x1 >= x1~ and x1+u >= x1~+u~. Requires equal n.
bool config_geq(const Configuration& c, const Configuration& c_tilde);

struct SchedulerDraw {
    std::int64_t initiator = 1;  // labels are 1-based
    std::int64_t responder = 1;
    double r = 1.0;              // uniform on (0,1], resolves the stubborn branch
};

/// Uniform draw; with self_pairs=false the responder is distinct from the
/// initiator. Consumes exactly three RNG values in a fixed order.
SchedulerDraw random_draw(std::int64_t n, Xoshiro256pp& rng, bool self_pairs = false);

/// Population of n labeled agents kept sorted non-increasingly by state rank,
/// so label i holds Opinion1 iff i <= x1 and Opinion2 iff i > x1 + u. The
/// counting representation IS the sorted sequence; re-sorting after a step is
/// count bookkeeping.
class LabeledPopulation {
public:
    explicit LabeledPopulation(const Configuration& c);

    std::int64_t size() const noexcept { return config_.n(); }
    const Configuration& configuration() const noexcept { return config_; }

    AgentState state(std::int64_t label) const;

    /// Applies one interaction under stubbornness p: the initiator moves to
    /// transition(state(i), state(j), r, p) and the population re-sorts.
    void apply(const SchedulerDraw& draw, double p);

    /// The sorted state sequence, materialized (labels 1..n left to right).
    std::vector<AgentState> states() const;

private:
    Configuration config_;
};

/// One coupled step of two chains on the same draw. Preconditions (rejected
/// otherwise): equal n, p >= p_tilde, and a's configuration >= b's.
std::pair<LabeledPopulation, LabeledPopulation> coupled_step(const LabeledPopulation& a, double p,
                                                             const LabeledPopulation& b,
                                                             double p_tilde,
                                                             const SchedulerDraw& draw);

struct MonotoneReport {
    bool preserved = true;
    std::optional<std::uint64_t> first_violation;  // 1-based step index
};

/// Runs the coupled chains for `steps` interactions (distinct-pair scheduler)
/// and reports whether the configuration order held throughout.
MonotoneReport check_monotone_run(const Configuration& c, double p, const Configuration& c_tilde,
                                  double p_tilde, std::uint64_t steps, std::uint64_t seed);

}  // namespace usd
