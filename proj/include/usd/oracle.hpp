#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "usd/core.hpp"

// Exact analysis of the absorbing chain over the configuration space
// {(x1, x2) : x1 + x2 <= n}, with u = n - x1 - x2. Absorption probabilities
// and expected absorption times come from a direct dense solve of the
// harmonic systems, giving ground truth for small n.

namespace usd {

class ExactChainSolution {
public:
    static constexpr int kDefaultCap = 60;

    static std::int64_t state_count(std::int64_t n) noexcept { return (n + 1) * (n + 2) / 2; }

    std::int64_t n() const noexcept { return n_; }
    double p() const noexcept { return p_; }

    /// Max-norm residual of the solved harmonic systems (win1, win2, time).
    double residual() const noexcept { return residual_; }

    std::int64_t index(const Configuration& c) const;
    Configuration state(std::int64_t idx) const;

    double win1(const Configuration& c) const { return win1_[index(c)]; }
    double win2(const Configuration& c) const { return win2_[index(c)]; }

    /// Expected interactions to absorption; absent for the frozen start
    /// (0,0,n), the only state with absorption probability below 1.
    std::optional<double> expected_time(const Configuration& c) const;

    const std::vector<double>& win1_all() const noexcept { return win1_; }
    const std::vector<double>& win2_all() const noexcept { return win2_; }

private:
    friend ExactChainSolution solve_chain(std::int64_t n, double p, std::int64_t cap);
    std::int64_t n_ = 0;
    double p_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> win1_, win2_, exp_time_;  // exp_time_ is NaN where undefined
};

/// Solves the absorbing chain for population n and stubbornness p under the
/// self-pairs scheduler. Rejects n < 2 and n > cap.
ExactChainSolution solve_chain(std::int64_t n, double p,
                               std::int64_t cap = ExactChainSolution::kDefaultCap);

struct MonteCarloComparison {
    double exact = 0.0;
    double empirical = 0.0;
    double z_score = 0.0;  // 0 by convention when the binomial SE vanishes and values agree
    std::uint64_t trials = 0;
};

/// Estimates win1 at c with `trials` engine runs and reports the z-score of
/// the empirical frequency against the exact binomial standard error.
MonteCarloComparison compare_monte_carlo(const ExactChainSolution& sol, const Configuration& c,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned parallelism = 0);

}  // namespace usd
