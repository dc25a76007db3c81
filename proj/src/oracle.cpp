#include "usd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "usd/engine.hpp"

namespace usd {

namespace {

// Dense LU with partial pivoting; A is row-major size x size, overwritten in
// place. Returns the pivot permutation.
std::vector<std::int64_t> lu_factor(std::vector<double>& a, std::int64_t size) {
    std::vector<std::int64_t> pivots(size);
    for (std::int64_t k = 0; k < size; ++k) {
        std::int64_t pivot = k;
        double best = std::abs(a[k * size + k]);
        for (std::int64_t i = k + 1; i < size; ++i) {
            const double v = std::abs(a[i * size + k]);
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("singular transition system");
        pivots[k] = pivot;
        if (pivot != k) {
            for (std::int64_t j = 0; j < size; ++j) std::swap(a[k * size + j], a[pivot * size + j]);
        }
        const double inv = 1.0 / a[k * size + k];
        for (std::int64_t i = k + 1; i < size; ++i) {
            const double factor = a[i * size + k] * inv;
            a[i * size + k] = factor;
            if (factor == 0.0) continue;
            const double* row_k = &a[k * size];
            double* row_i = &a[i * size];
            for (std::int64_t j = k + 1; j < size; ++j) row_i[j] -= factor * row_k[j];
        }
    }
    return pivots;
}

void lu_solve(const std::vector<double>& lu, const std::vector<std::int64_t>& pivots,
              std::int64_t size, std::vector<double>& x) {
    // rows were swapped in full during factorization, so permute first
    for (std::int64_t k = 0; k < size; ++k) {
        if (pivots[k] != k) std::swap(x[k], x[pivots[k]]);
    }
    for (std::int64_t k = 0; k < size; ++k) {
        for (std::int64_t i = k + 1; i < size; ++i) x[i] -= lu[i * size + k] * x[k];
    }
    for (std::int64_t k = size - 1; k >= 0; --k) {
        for (std::int64_t j = k + 1; j < size; ++j) x[k] -= lu[k * size + j] * x[j];
        x[k] /= lu[k * size + k];
    }
}

struct Transition {
    std::int64_t to;
    double prob;
};

}  // namespace

std::int64_t ExactChainSolution::index(const Configuration& c) const {
    if (!c.valid() || c.n() != n_) throw std::invalid_argument("configuration outside this solution");
    return c.x1 * (n_ + 1) - c.x1 * (c.x1 - 1) / 2 + c.x2;
}

Configuration ExactChainSolution::state(std::int64_t idx) const {
    for (std::int64_t x1 = 0; x1 <= n_; ++x1) {
        const std::int64_t offset = x1 * (n_ + 1) - x1 * (x1 - 1) / 2;
        if (idx < offset + (n_ - x1 + 1)) {
            const std::int64_t x2 = idx - offset;
            return {x1, x2, n_ - x1 - x2};
        }
    }
    throw std::out_of_range("state index outside this solution");
}

std::optional<double> ExactChainSolution::expected_time(const Configuration& c) const {
    const double v = exp_time_[index(c)];
    if (std::isnan(v)) return std::nullopt;
    return v;
}

ExactChainSolution solve_chain(std::int64_t n, double p, std::int64_t cap) {
    if (n < 2) throw std::invalid_argument("population must have n >= 2");
    if (n > cap) throw std::invalid_argument("population exceeds the exact-solver cap");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("stubbornness p must lie in [0,1]");

    ExactChainSolution sol;
    sol.n_ = n;
    sol.p_ = p;
    const std::int64_t states = ExactChainSolution::state_count(n);
    sol.win1_.assign(states, 0.0);
    sol.win2_.assign(states, 0.0);
    sol.exp_time_.assign(states, 0.0);

    const Configuration absorb1{n, 0, 0}, absorb2{0, n, 0}, frozen{0, 0, n};
    const std::int64_t id_absorb1 = sol.index(absorb1);
    const std::int64_t id_absorb2 = sol.index(absorb2);
    const std::int64_t id_frozen = sol.index(frozen);

    // Transient states ordered by x1+x2 descending (primary) for conditioning;
    // the elimination still pivots, no triangularity is assumed.
    std::vector<std::int64_t> transient;
    transient.reserve(states - 3);
    for (std::int64_t idx = 0; idx < states; ++idx) {
        if (idx == id_absorb1 || idx == id_absorb2 || idx == id_frozen) continue;
        transient.push_back(idx);
    }
    std::sort(transient.begin(), transient.end(), [&](std::int64_t a, std::int64_t b) {
        const Configuration ca = sol.state(a), cb = sol.state(b);
        if (ca.x1 + ca.x2 != cb.x1 + cb.x2) return ca.x1 + ca.x2 > cb.x1 + cb.x2;
        return a < b;
    });
    const std::int64_t size = static_cast<std::int64_t>(transient.size());
    std::vector<std::int64_t> dense_pos(states, -1);
    for (std::int64_t i = 0; i < size; ++i) dense_pos[transient[i]] = i;

    // Rows of the step law, kept for assembly, refinement and residuals.
    const ProtocolParams params{p, true};
    std::vector<std::vector<Transition>> rows(size);
    std::vector<double> a(static_cast<std::size_t>(size) * size, 0.0);
    std::vector<double> b_win1(size, 0.0), b_win2(size, 0.0), b_time(size, 1.0);
    for (std::int64_t i = 0; i < size; ++i) {
        const Configuration c = sol.state(transient[i]);
        a[i * size + i] = 1.0;
        for (const auto& [succ, prob] : step_distribution(c, params)) {
            const std::int64_t idx = sol.index(succ);
            rows[i].push_back({idx, prob});
            if (idx == id_absorb1) {
                b_win1[i] += prob;
            } else if (idx == id_absorb2) {
                b_win2[i] += prob;
            } else if (idx != id_frozen) {
                a[i * size + dense_pos[idx]] -= prob;
            }
        }
    }

    std::vector<double> lu = a;
    const auto pivots = lu_factor(lu, size);

    auto solve_refined = [&](const std::vector<double>& rhs) {
        std::vector<double> x = rhs;
        lu_solve(lu, pivots, size, x);
        // one step of iterative refinement against the exact rows
        std::vector<double> r = rhs;
        for (std::int64_t i = 0; i < size; ++i) {
            double ax = x[i];
            for (const auto& tr : rows[i]) {
                const std::int64_t j = dense_pos[tr.to];
                if (j >= 0) ax -= tr.prob * x[j];
            }
            r[i] -= ax;
        }
        lu_solve(lu, pivots, size, r);
        for (std::int64_t i = 0; i < size; ++i) x[i] += r[i];
        return x;
    };

    const auto x_win1 = solve_refined(b_win1);
    const auto x_win2 = solve_refined(b_win2);
    const auto x_time = solve_refined(b_time);

    for (std::int64_t i = 0; i < size; ++i) {
        sol.win1_[transient[i]] = x_win1[i];
        sol.win2_[transient[i]] = x_win2[i];
        sol.exp_time_[transient[i]] = x_time[i];
    }
    sol.win1_[id_absorb1] = 1.0;
    sol.win2_[id_absorb2] = 1.0;
    sol.exp_time_[id_frozen] = std::numeric_limits<double>::quiet_NaN();

    // Harmonic residuals over the full vectors.
    double residual = 0.0;
    for (std::int64_t i = 0; i < size; ++i) {
        double h1 = sol.win1_[transient[i]];
        double h2 = sol.win2_[transient[i]];
        double ht = sol.exp_time_[transient[i]] - 1.0;
        for (const auto& tr : rows[i]) {
            if (tr.to == id_frozen) continue;  // unreachable from transient states
            h1 -= tr.prob * sol.win1_[tr.to];
            h2 -= tr.prob * sol.win2_[tr.to];
            ht -= tr.prob * sol.exp_time_[tr.to];
        }
        residual = std::max({residual, std::abs(h1), std::abs(h2), std::abs(ht)});
    }
    sol.residual_ = residual;
    return sol;
}

MonteCarloComparison compare_monte_carlo(const ExactChainSolution& sol, const Configuration& c,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned parallelism) {
    if (trials < 1) throw std::invalid_argument("a comparison needs at least one trial");
    MonteCarloComparison cmp;
    cmp.trials = trials;
    cmp.exact = sol.win1(c);
    // snap solver noise off degenerate binomials so the z convention applies
    if (std::abs(cmp.exact) <= 1e-12) cmp.exact = 0.0;
    if (std::abs(cmp.exact - 1.0) <= 1e-12) cmp.exact = 1.0;

    TrialSpec spec;
    spec.initial = c;
    spec.params = {sol.p(), true};
    spec.seed = seed;
    const BatchSummary summary = run_batch(spec, trials, parallelism);
    cmp.empirical = static_cast<double>(summary.wins1) / static_cast<double>(trials);

    const double se = std::sqrt(cmp.exact * (1.0 - cmp.exact) / static_cast<double>(trials));
    if (se == 0.0) {
        cmp.z_score = (cmp.empirical == cmp.exact)
                          ? 0.0
                          : std::numeric_limits<double>::infinity();
    } else {
        cmp.z_score = (cmp.empirical - cmp.exact) / se;
    }
    return cmp;
}

}  // namespace usd
