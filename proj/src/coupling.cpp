#include "usd/coupling.hpp"

#include <stdexcept>

namespace usd {

namespace {

int rank(AgentState q) noexcept {
    switch (q) {
        case AgentState::Opinion1: return 2;
        case AgentState::Undecided: return 1;
        case AgentState::Opinion2: return 0;
    }
    return 0;
}

}  // namespace

bool state_geq(AgentState q, AgentState q_tilde) noexcept { return rank(q) >= rank(q_tilde); }

bool config_geq(const Configuration& c, const Configuration& c_tilde) {
    if (c.n() != c_tilde.n()) throw std::invalid_argument("configuration order needs equal n");
    return c.x1 >= c_tilde.x1 && c.x1 + c.u >= c_tilde.x1 + c_tilde.u;
}

SchedulerDraw random_draw(std::int64_t n, Xoshiro256pp& rng, bool self_pairs) {
    SchedulerDraw draw;
    draw.initiator = 1 + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n)));
    if (self_pairs) {
        draw.responder = 1 + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n)));
    } else {
        const auto j = 1 + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(n - 1)));
        draw.responder = j + (j >= draw.initiator ? 1 : 0);
    }
    draw.r = rng.uniform_open_closed();
    return draw;
}

LabeledPopulation::LabeledPopulation(const Configuration& c) : config_(c) {
    if (!c.valid()) throw std::invalid_argument("configuration needs non-negative counts and n >= 2");
}

AgentState LabeledPopulation::state(std::int64_t label) const {
    if (label < 1 || label > config_.n()) throw std::out_of_range("agent label outside 1..n");
    if (label <= config_.x1) return AgentState::Opinion1;
    if (label <= config_.x1 + config_.u) return AgentState::Undecided;
    return AgentState::Opinion2;
}

void LabeledPopulation::apply(const SchedulerDraw& draw, double p) {
    const AgentState qi = state(draw.initiator);
    const AgentState qj = state(draw.responder);
    const AgentState qi_next = transition(qi, qj, draw.r, p);
    if (qi_next == qi) return;
    auto count_of = [&](AgentState q) -> std::int64_t& {
        switch (q) {
            case AgentState::Opinion1: return config_.x1;
            case AgentState::Opinion2: return config_.x2;
            default: return config_.u;
        }
    };
    --count_of(qi);
    ++count_of(qi_next);
}

std::vector<AgentState> LabeledPopulation::states() const {
    std::vector<AgentState> seq;
    seq.reserve(static_cast<std::size_t>(config_.n()));
    seq.insert(seq.end(), static_cast<std::size_t>(config_.x1), AgentState::Opinion1);
    seq.insert(seq.end(), static_cast<std::size_t>(config_.u), AgentState::Undecided);
    seq.insert(seq.end(), static_cast<std::size_t>(config_.x2), AgentState::Opinion2);
    return seq;
}

std::pair<LabeledPopulation, LabeledPopulation> coupled_step(const LabeledPopulation& a, double p,
                                                             const LabeledPopulation& b,
                                                             double p_tilde,
                                                             const SchedulerDraw& draw) {
    if (p < p_tilde) throw std::invalid_argument("coupled step needs p >= p_tilde");
    if (!config_geq(a.configuration(), b.configuration()))
        throw std::invalid_argument("coupled step needs ordered configurations");
    LabeledPopulation upper = a, lower = b;
    upper.apply(draw, p);
    lower.apply(draw, p_tilde);
    return {upper, lower};
}

MonotoneReport check_monotone_run(const Configuration& c, double p, const Configuration& c_tilde,
                                  double p_tilde, std::uint64_t steps, std::uint64_t seed) {
    if (p < p_tilde) throw std::invalid_argument("monotone run needs p >= p_tilde");
    if (!config_geq(c, c_tilde))
        throw std::invalid_argument("monotone run needs ordered configurations");

    LabeledPopulation upper(c), lower(c_tilde);
    Xoshiro256pp rng(seed);
    MonotoneReport report;
    for (std::uint64_t step = 1; step <= steps; ++step) {
        const SchedulerDraw draw = random_draw(c.n(), rng, /*self_pairs=*/false);
        upper.apply(draw, p);
        lower.apply(draw, p_tilde);
        if (!config_geq(upper.configuration(), lower.configuration())) {
            report.preserved = false;
            report.first_violation = step;
            return report;
        }
    }
    return report;
}

}  // namespace usd
