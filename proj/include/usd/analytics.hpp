#pragma once

#include <cstdint>
#include <optional>

#include "usd/core.hpp"

// Closed-form potentials and exact one-step drift identities of the counting
// chain. All drift formulas are stated for the self-pairs scheduler (n^2
// denominators); they are conditional expectations given the current
// configuration, checkable against exhaustive enumeration of the step law.

namespace usd {

struct PotentialReport {
    double weighted_bias = 0.0;           // Delta_w = x1 - (1-p) x2
    double negative_weighted_bias = 0.0;  // -Delta_w
    std::optional<double> threshold_p_s;  // 1 - x1/x2, absent when x2 = 0
    std::optional<double> gap_inverse;    // Psi = x2/x1, absent when x1 = 0
    std::optional<double> gap;            // x1/x2, absent when x2 = 0
    double undecided_surplus = 0.0;       // Phi_up = u - x1 - x2
};

enum class Winner { Opinion1 = 1, Opinion2 = 2 };

double weighted_bias(const Configuration& c, double p);

PotentialReport potentials(const Configuration& c, double p);

/// E[Delta_w(t+1) - Delta_w(t) | F_t] = u * Delta_w / n^2.
double drift_weighted_bias(const Configuration& c, double p);

/// E[Delta_w(t+1)^2 | F_t] - Delta_w^2
///   = (x1 x2 / n^2)(2-p)(1-p) + 2 u Delta_w^2 / n^2 + (u/n^2)(x1 + (1-p)^2 x2).
double drift_weighted_bias_squared(const Configuration& c, double p);

/// Exact one-step drift of the winning-regime ratio potential:
/// winner = Opinion1 tracks Psi = x2/x1 (needs x1 >= 2, x2 >= 1),
/// winner = Opinion2 tracks x1/x2 (needs x2 >= 2, x1 >= 1).
/// Configurations violating the preconditions are rejected (formula poles).
double drift_gap(const Configuration& c, double p, Winner winner);

struct PhiUpDrift {
    double p_plus = 0.0;   // Pr[Phi_up jumps +2] = (2-p) x1 x2 / n^2
    double p_minus = 0.0;  // Pr[Phi_up jumps -2] = u (x1+x2) / n^2
};

PhiUpDrift drift_phi_up(const Configuration& c, double p);

/// Heuristic instantiation of the second-moment tracker constant:
/// x1(0) * (1-p) * x2(0) / n^2. The tracker accepts any user-chosen r.
double default_r(const Configuration& c0, double p);

/// Tracks Y_t = Delta_w(t)^2 - r * t along a trajectory; y() + r * t always
/// equals the square of the current weighted bias.
class SubmartingaleTracker {
public:
    SubmartingaleTracker(const Configuration& c0, double p, double r);

    /// Advance the interaction clock by `elapsed` and move to configuration c.
    void advance(const Configuration& c, std::uint64_t elapsed = 1);

    double y() const noexcept { return y_; }
    double r() const noexcept { return r_; }
    std::uint64_t interactions() const noexcept { return t_; }

private:
    double p_;
    double r_;
    std::uint64_t t_ = 0;
    double y_;
};

}  // namespace usd
