#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/enumeration.hpp"
#include "support/stats.hpp"
#include "usd/coupling.hpp"
#include "usd/oracle.hpp"

using namespace usd;

namespace {

const AgentState kStates[3] = {AgentState::Opinion1, AgentState::Undecided,
                               AgentState::Opinion2};

}  // namespace

TEST_CASE("state order: Opinion1 above Undecided above Opinion2") {
    CHECK(state_geq(AgentState::Opinion1, AgentState::Undecided));
    CHECK(state_geq(AgentState::Undecided, AgentState::Opinion2));
    CHECK(state_geq(AgentState::Opinion1, AgentState::Opinion2));
    CHECK(!state_geq(AgentState::Opinion2, AgentState::Undecided));
    CHECK(!state_geq(AgentState::Undecided, AgentState::Opinion1));
    for (const auto q : kStates) CHECK(state_geq(q, q));
    // totality
    for (const auto a : kStates)
        for (const auto b : kStates) CHECK((state_geq(a, b) || state_geq(b, a)));
}

TEST_CASE("configuration order definition") {
    CHECK(config_geq({5, 3, 2}, {4, 3, 3}));   // 5 >= 4 and 7 >= 7
    CHECK(!config_geq({4, 3, 3}, {5, 3, 2}));  // 4 < 5
    CHECK(config_geq({4, 4, 2}, {4, 4, 2}));
    CHECK_THROWS_AS((void)config_geq({4, 3, 3}, {4, 3, 2}), std::invalid_argument);
}

TEST_CASE("outcome order over every dominated interaction pair and branch") {
    // For all pointwise-ordered state pairs and every resolution of the
    // stubborn branch with p >= p_tilde, outcomes stay ordered. The nine
    // deterministic interactions are covered by the p = p_tilde diagonal.
    const double ps[] = {0.0, 0.3, 0.7, 1.0};
    const double rs[] = {0.05, 0.3, 0.5, 0.9, 1.0};
    for (const auto qi : kStates)
        for (const auto qj : kStates)
            for (const auto qi_t : kStates)
                for (const auto qj_t : kStates) {
                    if (!state_geq(qi, qi_t) || !state_geq(qj, qj_t)) continue;
                    for (const double p : ps)
                        for (const double pt : ps) {
                            if (p < pt) continue;
                            for (const double r : rs) {
                                const AgentState out = transition(qi, qj, r, p);
                                const AgentState out_t = transition(qi_t, qj_t, r, pt);
                                CHECK(state_geq(out, out_t));
                            }
                        }
                }
}

TEST_CASE("labeled population is the sorted sequence of its counts") {
    const LabeledPopulation pop(Configuration{2, 3, 1});
    CHECK(pop.size() == 6);
    CHECK(pop.state(1) == AgentState::Opinion1);
    CHECK(pop.state(2) == AgentState::Opinion1);
    CHECK(pop.state(3) == AgentState::Undecided);
    CHECK(pop.state(4) == AgentState::Opinion2);
    CHECK(pop.state(6) == AgentState::Opinion2);
    CHECK_THROWS_AS((void)pop.state(0), std::out_of_range);
    CHECK_THROWS_AS((void)pop.state(7), std::out_of_range);
    const auto seq = pop.states();
    for (std::size_t i = 1; i < seq.size(); ++i) CHECK(state_geq(seq[i - 1], seq[i]));
}

TEST_CASE("coupled step is deterministic and validates preconditions") {
    const LabeledPopulation a(Configuration{3, 2, 1});
    const SchedulerDraw draw{1, 4, 0.5};
    const auto [u1, l1] = coupled_step(a, 0.6, a, 0.6, draw);
    const auto [u2, l2] = coupled_step(a, 0.6, a, 0.6, draw);
    CHECK(u1.configuration() == u2.configuration());
    CHECK(l1.configuration() == l2.configuration());
    CHECK(u1.configuration() == l1.configuration());

    const LabeledPopulation b(Configuration{2, 3, 1});
    CHECK_THROWS_AS((void)coupled_step(b, 0.6, a, 0.2, draw), std::invalid_argument);
    CHECK_THROWS_AS((void)coupled_step(a, 0.2, b, 0.6, draw), std::invalid_argument);
}

TEST_CASE("an all-Opinion1 upper chain stays on top") {
    const Configuration top{6, 0, 0};
    for (const Configuration& other : {Configuration{3, 2, 1}, Configuration{0, 6, 0}}) {
        auto report = check_monotone_run(top, 0.8, other, 0.3, 2'000, 17);
        CHECK(report.preserved);
        CHECK(!report.first_violation.has_value());
    }
}

TEST_CASE("identical chains stay identical") {
    const Configuration c{4, 5, 3};
    const auto report = check_monotone_run(c, 0.5, c, 0.5, 5'000, 23);
    CHECK(report.preserved);
}

TEST_CASE("the worked stubbornness example stays ordered") {
    // n = 500: (100, 400, 0) at p = 0.25 dominates (9, 491, 0) at p = 0.25
    const std::int64_t n = 500;
    const std::int64_t logn = static_cast<std::int64_t>(std::ceil(std::log(n)));
    const Configuration upper{n / 5, 4 * n / 5, 0};
    const Configuration lower{logn, n - logn, 0};
    REQUIRE(config_geq(upper, lower));
    const auto report = check_monotone_run(upper, 0.25, lower, 0.25, 10'000, 99);
    CHECK(report.preserved);
}

TEST_CASE("random dominated instances never violate the order") {
    Xoshiro256pp rng(314159);
    int instances = 0;
    while (instances < 300) {
        const std::int64_t n = 4 + static_cast<std::int64_t>(rng.bounded(30));
        const std::int64_t x1t = static_cast<std::int64_t>(rng.bounded(n + 1));
        const std::int64_t ut = static_cast<std::int64_t>(rng.bounded(n - x1t + 1));
        const Configuration lower{x1t, n - x1t - ut, ut};
        const std::int64_t x1 = x1t + static_cast<std::int64_t>(rng.bounded(n - x1t + 1));
        const std::int64_t hi_u_max = n - x1;
        std::int64_t u = -1;
        for (int tries = 0; tries < 20 && u < 0; ++tries) {
            const auto cand = static_cast<std::int64_t>(rng.bounded(hi_u_max + 1));
            if (x1 + cand >= x1t + ut) u = cand;
        }
        if (u < 0) u = std::max<std::int64_t>(0, x1t + ut - x1);
        const Configuration upper{x1, n - x1 - u, u};
        if (!upper.valid() || !lower.valid()) continue;
        const double pt = static_cast<double>(rng.bounded(1000)) / 1000.0;
        const double p = pt + (1.0 - pt) * static_cast<double>(rng.bounded(1000)) / 1000.0;
        REQUIRE(config_geq(upper, lower));
        const auto report = check_monotone_run(upper, p, lower, pt, 2'000, rng.next());
        CHECK(report.preserved);
        ++instances;
    }
}

TEST_CASE("labeled steps follow the unlabeled distinct-pair law") {
    // chi-squared of successor categories from labeled draws vs step_distribution
    const Configuration c{3, 2, 2};
    const ProtocolParams params{0.4, false};
    const int samples = 200'000;

    auto category = [&](const Configuration& succ) {
        if (succ == c) return 4;
        if (succ.x1 < c.x1) return 0;
        if (succ.x2 < c.x2) return 1;
        if (succ.x1 > c.x1) return 2;
        return 3;
    };

    std::vector<std::uint64_t> labeled(5, 0);
    Xoshiro256pp rng(2718);
    for (int i = 0; i < samples; ++i) {
        LabeledPopulation pop(c);
        pop.apply(random_draw(c.n(), rng, /*self_pairs=*/false), params.p);
        ++labeled[static_cast<std::size_t>(category(pop.configuration()))];
    }
    std::vector<std::uint64_t> unlabeled(5, 0);
    Xoshiro256pp rng2(999);
    for (int i = 0; i < samples; ++i) {
        ++unlabeled[static_cast<std::size_t>(category(sample_step(c, params, rng2).next))];
    }
    const double stat = usd::testing::chi_squared_two_sample(labeled, unlabeled);
    CHECK(stat < usd::testing::chi_squared_critical(4.0));
}

TEST_CASE("exact chain is monotone exactly where the coupling says it must be") {
    for (std::int64_t n : {8, 14}) {
        const auto lo = solve_chain(n, 0.2);
        const auto hi = solve_chain(n, 0.9);
        for (const auto& c : usd::testing::all_configurations(n)) {
            CHECK(hi.win1(c) >= lo.win1(c) - 1e-9);
            for (const auto& d : usd::testing::all_configurations(n)) {
                if (config_geq(c, d)) CHECK(lo.win1(c) >= lo.win1(d) - 1e-9);
            }
        }
    }
}
