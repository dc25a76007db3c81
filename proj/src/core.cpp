#include "usd/core.hpp"

#include <stdexcept>

namespace usd {

namespace {

void require_interactable(const Configuration& c) {
    if (!c.valid()) throw std::invalid_argument("configuration needs non-negative counts and n >= 2");
}

void require_params(const ProtocolParams& params) {
    if (!params.valid()) throw std::invalid_argument("stubbornness p must lie in [0,1]");
}

// Ordered-pair count of the scheduler's sample space.
std::int64_t pair_space(const Configuration& c, const ProtocolParams& params) {
    const std::int64_t n = c.n();
    return params.self_pairs ? n * n : n * (n - 1);
}

}  // namespace

AgentState transition(AgentState initiator, AgentState responder, double r, double p) noexcept {
    if (initiator == AgentState::Undecided) return responder;
    if (initiator == AgentState::Opinion2 && responder == AgentState::Opinion1)
        return AgentState::Undecided;
    if (initiator == AgentState::Opinion1 && responder == AgentState::Opinion2)
        return r <= p ? AgentState::Opinion1 : AgentState::Undecided;
    return initiator;
}

std::vector<std::pair<Configuration, double>> step_distribution(const Configuration& c,
                                                                const ProtocolParams& params) {
    require_interactable(c);
    require_params(params);

    const double denom = static_cast<double>(pair_space(c, params));
    const double pairs12 = static_cast<double>(c.x1 * c.x2);
    const double w1_drop = (1.0 - params.p) * pairs12;       // Opinion-1 initiator turns undecided
    const double w2_drop = pairs12;                          // Opinion-2 initiator turns undecided
    const double wu_adopt1 = static_cast<double>(c.u * c.x1);
    const double wu_adopt2 = static_cast<double>(c.u * c.x2);

    std::vector<std::pair<Configuration, double>> law;
    law.reserve(5);
    if (w1_drop > 0) law.push_back({{c.x1 - 1, c.x2, c.u + 1}, w1_drop / denom});
    if (w2_drop > 0) law.push_back({{c.x1, c.x2 - 1, c.u + 1}, w2_drop / denom});
    if (wu_adopt1 > 0) law.push_back({{c.x1 + 1, c.x2, c.u - 1}, wu_adopt1 / denom});
    if (wu_adopt2 > 0) law.push_back({{c.x1, c.x2 + 1, c.u - 1}, wu_adopt2 / denom});

    double productive = 0.0;
    for (const auto& [succ, prob] : law) productive += prob;
    if (productive < 1.0) law.push_back({c, 1.0 - productive});
    return law;
}

double productive_probability(const Configuration& c, const ProtocolParams& params) {
    require_interactable(c);
    require_params(params);
    const double pairs12 = static_cast<double>(c.x1 * c.x2);
    const double weight = (2.0 - params.p) * pairs12 + static_cast<double>(c.u * (c.x1 + c.x2));
    return weight / static_cast<double>(pair_space(c, params));
}

InteractionOutcome sample_step(const Configuration& c, const ProtocolParams& params,
                               Xoshiro256pp& rng) {
    require_interactable(c);
    require_params(params);

    // Integer category boundaries over the ordered-pair space, fixed order:
    // (1,2), (2,1), (u,1), (u,2), neutral rest.
    const std::int64_t pairs12 = c.x1 * c.x2;
    const std::int64_t b1 = pairs12;
    const std::int64_t b2 = b1 + pairs12;
    const std::int64_t b3 = b2 + c.u * c.x1;
    const std::int64_t b4 = b3 + c.u * c.x2;

    const auto v = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(pair_space(c, params))));
    Configuration next = c;
    if (v < b1) {
        const double r = rng.uniform_open_closed();
        if (transition(AgentState::Opinion1, AgentState::Opinion2, r, params.p) ==
            AgentState::Undecided) {
            next = {c.x1 - 1, c.x2, c.u + 1};
        }
    } else if (v < b2) {
        next = {c.x1, c.x2 - 1, c.u + 1};
    } else if (v < b3) {
        next = {c.x1 + 1, c.x2, c.u - 1};
    } else if (v < b4) {
        next = {c.x1, c.x2 + 1, c.u - 1};
    }
    return {next, 1};
}

InteractionOutcome sample_productive_step(const Configuration& c, const ProtocolParams& params,
                                          Xoshiro256pp& rng) {
    require_interactable(c);
    require_params(params);

    const std::int64_t pairs12 = c.x1 * c.x2;
    // Cumulative productive weights in a fixed order; the only inexact
    // term is the (1-p) scaling of the integer pair count.
    const double s1 = (1.0 - params.p) * static_cast<double>(pairs12);
    const double s2 = s1 + static_cast<double>(pairs12);
    const double s3 = s2 + static_cast<double>(c.u * c.x1);
    const double s4 = s3 + static_cast<double>(c.u * c.x2);
    if (s4 <= 0.0)
        throw std::invalid_argument("no productive interaction exists (absorbed or frozen)");

    const double q = s4 / static_cast<double>(pair_space(c, params));
    const std::uint64_t elapsed = sample_geometric(q, rng);

    const double draw = rng.uniform() * s4;
    Configuration next;
    if (draw < s1) {
        next = {c.x1 - 1, c.x2, c.u + 1};
    } else if (draw < s2) {
        next = {c.x1, c.x2 - 1, c.u + 1};
    } else if (draw < s3) {
        next = {c.x1 + 1, c.x2, c.u - 1};
    } else {
        next = {c.x1, c.x2 + 1, c.u - 1};
    }
    return {next, elapsed};
}

}  // namespace usd
