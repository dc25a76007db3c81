#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "usd/rng.hpp"

// The protocol itself: two opinions plus an undecided state, a stubbornness
// parameter p, and a uniform random scheduler over ordered (initiator,
// responder) pairs. Everything here operates on the counting abstraction
// (x1, x2, u); agents are anonymous.

namespace usd {

enum class AgentState : std::uint8_t { Opinion1, Opinion2, Undecided };

struct Configuration {
    std::int64_t x1 = 0;  // agents holding Opinion 1
    std::int64_t x2 = 0;  // agents holding Opinion 2
    std::int64_t u = 0;   // undecided agents

    std::int64_t n() const noexcept { return x1 + x2 + u; }
    bool valid() const noexcept { return x1 >= 0 && x2 >= 0 && u >= 0 && n() >= 2; }
    bool absorbed() const noexcept { return x1 == n() || x2 == n(); }
    bool frozen() const noexcept { return u == n(); }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ProtocolParams {
    double p = 0.0;          // stubbornness of Opinion-1 initiators, in [0,1]
    bool self_pairs = true;  // scheduler may pick i = j (always a neutral interaction)

    bool valid() const noexcept { return p >= 0.0 && p <= 1.0; }
};

struct InteractionOutcome {
    Configuration next;
    std::uint64_t elapsed = 1;  // interactions consumed, including skipped neutral ones
};

/// One application of the transition rule. Only the initiator changes state.
/// The probabilistic branch of the (Opinion1, Opinion2) interaction is
/// determinized: the initiator keeps Opinion 1 iff r <= p, with r drawn
/// uniformly from (0,1]. All other cases ignore r.
AgentState transition(AgentState initiator, AgentState responder, double r, double p) noexcept;

/// Exact one-step law over successor configurations, as (configuration,
/// probability) pairs in a fixed order: Opinion-1 initiator turns undecided,
/// Opinion-2 initiator turns undecided, undecided adopts 1, undecided adopts
/// 2, self-loop. Zero-probability entries are omitted. Throws
/// std::invalid_argument for n < 2 or invalid params.
std::vector<std::pair<Configuration, double>> step_distribution(const Configuration& c,
                                                                const ProtocolParams& params);

/// Probability that the next interaction changes the configuration,
/// q = [(2-p) x1 x2 + u (x1+x2)] / D with D = n^2 (self pairs) or n(n-1).
double productive_probability(const Configuration& c, const ProtocolParams& params);

/// Samples one scheduler step; `next` is distributed exactly per
/// step_distribution and elapsed is always 1.
InteractionOutcome sample_step(const Configuration& c, const ProtocolParams& params,
                               Xoshiro256pp& rng);

/// Accelerated step: samples elapsed ~ Geometric(q) and then one productive
/// category proportional to its weight, so (next, elapsed) has the same law
/// as iterating sample_step until the first change. The caller must rule out
/// absorbed and frozen configurations first; they are rejected here.
InteractionOutcome sample_productive_step(const Configuration& c, const ProtocolParams& params,
                                          Xoshiro256pp& rng);

}  // namespace usd
