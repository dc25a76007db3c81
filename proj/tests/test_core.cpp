#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "support/enumeration.hpp"
#include "support/stats.hpp"
#include "usd/core.hpp"

using namespace usd;
using usd::testing::all_configurations;
using usd::testing::brute_force_step_law;

namespace {

using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

std::map<Key, double> as_map(const std::vector<std::pair<Configuration, double>>& law) {
    std::map<Key, double> m;
    for (const auto& [succ, prob] : law) m[{succ.x1, succ.x2, succ.u}] += prob;
    return m;
}

}  // namespace

TEST_CASE("transition covers the whole rule table") {
    // conflicting opinions
    CHECK(transition(AgentState::Opinion2, AgentState::Opinion1, 0.9, 0.5) ==
          AgentState::Undecided);
    // undecided adopts the responder's state
    CHECK(transition(AgentState::Undecided, AgentState::Opinion2, 0.1, 0.5) ==
          AgentState::Opinion2);
    CHECK(transition(AgentState::Undecided, AgentState::Opinion1, 0.7, 0.0) ==
          AgentState::Opinion1);
    CHECK(transition(AgentState::Undecided, AgentState::Undecided, 0.7, 1.0) ==
          AgentState::Undecided);
    // stubborn branch, determinized on r <= p
    CHECK(transition(AgentState::Opinion1, AgentState::Opinion2, 0.3, 0.5) ==
          AgentState::Opinion1);
    CHECK(transition(AgentState::Opinion1, AgentState::Opinion2, 0.7, 0.5) ==
          AgentState::Undecided);
    // neutral cases
    CHECK(transition(AgentState::Opinion1, AgentState::Opinion1, 0.5, 0.0) ==
          AgentState::Opinion1);
    CHECK(transition(AgentState::Opinion1, AgentState::Undecided, 0.5, 0.0) ==
          AgentState::Opinion1);
    CHECK(transition(AgentState::Opinion2, AgentState::Opinion2, 0.5, 1.0) ==
          AgentState::Opinion2);
    CHECK(transition(AgentState::Opinion2, AgentState::Undecided, 0.5, 1.0) ==
          AgentState::Opinion2);
}

TEST_CASE("transition boundary stubbornness") {
    // r is drawn from (0,1], so p=0 never keeps and p=1 always keeps
    for (double r : {1e-12, 0.5, 1.0}) {
        CHECK(transition(AgentState::Opinion1, AgentState::Opinion2, r, 0.0) ==
              AgentState::Undecided);
        CHECK(transition(AgentState::Opinion1, AgentState::Opinion2, r, 1.0) ==
              AgentState::Opinion1);
    }
}

TEST_CASE("step_distribution on the two-agent tie") {
    const auto law = as_map(step_distribution({1, 1, 0}, {0.0, true}));
    REQUIRE(law.size() == 3);
    CHECK(law.at({0, 1, 1}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(law.at({1, 0, 1}) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(law.at({1, 1, 0}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("step_distribution keeps the frozen configuration frozen") {
    for (std::int64_t n : {2, 5, 9}) {
        const auto law = step_distribution({0, 0, n}, {0.3, true});
        REQUIRE(law.size() == 1);
        CHECK(law[0].first == Configuration{0, 0, n});
        CHECK(law[0].second == doctest::Approx(1.0));
    }
}

TEST_CASE("step_distribution rejects tiny populations and bad p") {
    CHECK_THROWS_AS((void)step_distribution({1, 0, 0}, {0.0, true}), std::invalid_argument);
    CHECK_THROWS_AS((void)step_distribution({0, 0, 0}, {0.0, true}), std::invalid_argument);
    CHECK_THROWS_AS((void)step_distribution({2, 2, 0}, {1.5, true}), std::invalid_argument);
    CHECK_THROWS_AS((void)step_distribution({2, -1, 1}, {0.5, true}), std::invalid_argument);
}

TEST_CASE("step_distribution equals pairwise enumeration for n <= 12") {
    for (std::int64_t n = 2; n <= 12; ++n) {
        for (const auto& c : all_configurations(n)) {
            for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                for (bool self_pairs : {true, false}) {
                    const auto got = as_map(step_distribution(c, {p, self_pairs}));
                    const auto want = brute_force_step_law(c, p, self_pairs);
                    REQUIRE(got.size() == want.size());
                    double total = 0.0;
                    for (const auto& [key, prob] : want) {
                        REQUIRE(got.count(key) == 1);
                        CHECK(std::abs(got.at(key) - prob) <= 1e-12);
                        total += got.at(key);
                    }
                    CHECK(std::abs(total - 1.0) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("conservation and support geometry of successors") {
    for (std::int64_t n = 2; n <= 12; ++n) {
        for (const auto& c : all_configurations(n)) {
            for (const auto& [succ, prob] : step_distribution(c, {0.4, true})) {
                (void)prob;
                CHECK(succ.n() == n);
                CHECK(succ.x1 >= 0);
                CHECK(succ.x2 >= 0);
                CHECK(succ.u >= 0);
                const auto changed = (succ.x1 != c.x1) + (succ.x2 != c.x2) + (succ.u != c.u);
                CHECK(changed <= 2);
                CHECK(std::abs(succ.x1 - c.x1) <= 1);
                CHECK(std::abs(succ.x2 - c.x2) <= 1);
                CHECK(std::abs(succ.u - c.u) <= 1);
            }
        }
    }
}

TEST_CASE("absorbing fixed points and one-sided extinction") {
    for (std::int64_t n : {2, 7, 12}) {
        for (double p : {0.0, 0.6, 1.0}) {
            auto law1 = step_distribution({n, 0, 0}, {p, true});
            REQUIRE(law1.size() == 1);
            CHECK(law1[0].first == Configuration{n, 0, 0});
            auto law2 = step_distribution({0, n, 0}, {p, true});
            REQUIRE(law2.size() == 1);
            CHECK(law2[0].first == Configuration{0, n, 0});
        }
    }
    // no rule creates an opinion from nothing
    for (std::int64_t n = 2; n <= 10; ++n) {
        for (const auto& c : all_configurations(n)) {
            for (const auto& [succ, prob] : step_distribution(c, {0.5, true})) {
                (void)prob;
                if (c.x2 == 0) CHECK(succ.x2 == 0);
                if (c.x1 == 0) CHECK(succ.x1 == 0);
            }
        }
    }
}

TEST_CASE("p = 1 never shrinks the preferred opinion") {
    for (std::int64_t n = 2; n <= 10; ++n) {
        for (const auto& c : all_configurations(n)) {
            for (const auto& [succ, prob] : step_distribution(c, {1.0, true})) {
                (void)prob;
                CHECK(succ.x1 >= c.x1);
            }
        }
    }
}

TEST_CASE("u-increase probability is (2-p) x1 x2 / n^2") {
    for (std::int64_t n = 2; n <= 12; ++n) {
        for (const auto& c : all_configurations(n)) {
            for (double p : {0.0, 0.5, 1.0}) {
                double up = 0.0;
                for (const auto& [succ, prob] : step_distribution(c, {p, true}))
                    if (succ.u > c.u) up += prob;
                const double expect = (2.0 - p) * static_cast<double>(c.x1 * c.x2) /
                                      static_cast<double>(n * n);
                CHECK(std::abs(up - expect) <= 1e-12);
            }
        }
    }
}

TEST_CASE("sample_step respects fixed points and one-sided support") {
    Xoshiro256pp rng(7);
    for (int i = 0; i < 200; ++i) {
        CHECK(sample_step({6, 0, 0}, {0.3, true}, rng).next == Configuration{6, 0, 0});
    }
    for (int i = 0; i < 500; ++i) {
        const auto out = sample_step({0, 3, 2}, {0.3, true}, rng);
        const bool stays = out.next == Configuration{0, 3, 2};
        const bool adopts = out.next == Configuration{0, 4, 1};
        CHECK((stays || adopts));
        CHECK(out.elapsed == 1);
    }
}

TEST_CASE("sample_step matches the closed-form u-increase frequency") {
    const Configuration c{3, 3, 2};
    const ProtocolParams params{0.5, true};
    // Pr[u increases] = (2 - 0.5) * 9 / 64
    const double expect = 1.5 * 9.0 / 64.0;
    const int samples = 1'000'000;
    Xoshiro256pp rng(1234);
    int up = 0;
    for (int i = 0; i < samples; ++i) {
        if (sample_step(c, params, rng).next.u > c.u) ++up;
    }
    const double freq = static_cast<double>(up) / samples;
    const double sigma = std::sqrt(expect * (1.0 - expect) / samples);
    CHECK(std::abs(freq - expect) <= 3.0 * sigma);
}

TEST_CASE("productive probability closed form") {
    // (2-p) x1 x2 + u (x1+x2) over n^2
    CHECK(productive_probability({2, 1, 1}, {0.5, true}) == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(productive_probability({1, 1, 0}, {0.0, true}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(productive_probability({4, 0, 0}, {0.7, true}) == 0.0);
    CHECK(productive_probability({0, 0, 4}, {0.7, true}) == 0.0);
}

TEST_CASE("sample_productive_step rejects absorbed and frozen configurations") {
    Xoshiro256pp rng(3);
    CHECK_THROWS_AS((void)sample_productive_step({5, 0, 0}, {0.2, true}, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)sample_productive_step({0, 0, 5}, {0.2, true}, rng),
                    std::invalid_argument);
}

TEST_CASE("two-agent productive step: fair split and geometric clock") {
    Xoshiro256pp rng(99);
    const Configuration c{1, 1, 0};
    const ProtocolParams params{0.0, true};
    const int samples = 200'000;
    int to1 = 0;
    double elapsed_sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto out = sample_productive_step(c, params, rng);
        const bool a = out.next == Configuration{0, 1, 1};
        const bool b = out.next == Configuration{1, 0, 1};
        REQUIRE((a || b));
        if (a) ++to1;
        elapsed_sum += static_cast<double>(out.elapsed);
    }
    const double frac = static_cast<double>(to1) / samples;
    CHECK(std::abs(frac - 0.5) <= 3.0 * std::sqrt(0.25 / samples));
    // elapsed ~ Geometric(1/2): mean 2, sd sqrt(2)
    const double mean = elapsed_sum / samples;
    CHECK(std::abs(mean - 2.0) <= 3.0 * std::sqrt(2.0 / samples));
}

TEST_CASE("acceleration equivalence: (next, elapsed) law matches first change") {
    const Configuration c{2, 2, 2};
    const ProtocolParams params{0.5, true};
    const int samples = 100'000;

    // bins: 4 successor categories x elapsed in {1,2,3,4,5,6-10,>10}
    auto category = [&](const Configuration& succ) {
        if (succ.x1 < c.x1) return 0;
        if (succ.x2 < c.x2 && succ.u > c.u) return 1;
        if (succ.x1 > c.x1) return 2;
        return 3;
    };
    auto elapsed_bin = [](std::uint64_t e) {
        if (e <= 5) return static_cast<int>(e) - 1;
        if (e <= 10) return 5;
        return 6;
    };

    std::vector<std::uint64_t> accelerated(28, 0), iterated(28, 0);
    Xoshiro256pp rng_a(11), rng_b(22);
    for (int i = 0; i < samples; ++i) {
        const auto out = sample_productive_step(c, params, rng_a);
        ++accelerated[static_cast<std::size_t>(category(out.next) * 7 + elapsed_bin(out.elapsed))];
    }
    for (int i = 0; i < samples; ++i) {
        std::uint64_t elapsed = 0;
        Configuration now = c;
        while (now == c) {
            const auto out = sample_step(c, params, rng_b);
            ++elapsed;
            now = out.next;
        }
        ++iterated[static_cast<std::size_t>(category(now) * 7 + elapsed_bin(elapsed))];
    }
    const double stat = usd::testing::chi_squared_two_sample(accelerated, iterated);
    CHECK(stat < usd::testing::chi_squared_critical(27.0));
}
