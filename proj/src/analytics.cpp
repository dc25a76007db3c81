#include "usd/analytics.hpp"

#include <stdexcept>

namespace usd {

namespace {

void require_config(const Configuration& c) {
    if (!c.valid()) throw std::invalid_argument("configuration needs non-negative counts and n >= 2");
}

void require_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("stubbornness p must lie in [0,1]");
}

double square(double v) { return v * v; }

}  // namespace

double weighted_bias(const Configuration& c, double p) {
    require_config(c);
    require_p(p);
    return static_cast<double>(c.x1) - (1.0 - p) * static_cast<double>(c.x2);
}

PotentialReport potentials(const Configuration& c, double p) {
    require_config(c);
    require_p(p);
    PotentialReport report;
    report.weighted_bias = weighted_bias(c, p);
    report.negative_weighted_bias = -report.weighted_bias;
    if (c.x2 > 0) {
        report.threshold_p_s = 1.0 - static_cast<double>(c.x1) / static_cast<double>(c.x2);
        report.gap = static_cast<double>(c.x1) / static_cast<double>(c.x2);
    }
    if (c.x1 > 0) report.gap_inverse = static_cast<double>(c.x2) / static_cast<double>(c.x1);
    report.undecided_surplus = static_cast<double>(c.u - c.x1 - c.x2);
    return report;
}

double drift_weighted_bias(const Configuration& c, double p) {
    require_config(c);
    require_p(p);
    const double n2 = square(static_cast<double>(c.n()));
    return static_cast<double>(c.u) * weighted_bias(c, p) / n2;
}

double drift_weighted_bias_squared(const Configuration& c, double p) {
    require_config(c);
    require_p(p);
    const double n2 = square(static_cast<double>(c.n()));
    const double x1 = static_cast<double>(c.x1);
    const double x2 = static_cast<double>(c.x2);
    const double u = static_cast<double>(c.u);
    const double dw = weighted_bias(c, p);
    return (x1 * x2 / n2) * (2.0 - p) * (1.0 - p) + 2.0 * u * dw * dw / n2 +
           (u / n2) * (x1 + square(1.0 - p) * x2);
}

double drift_gap(const Configuration& c, double p, Winner winner) {
    require_config(c);
    require_p(p);
    const double n2 = square(static_cast<double>(c.n()));
    const double x1 = static_cast<double>(c.x1);
    const double x2 = static_cast<double>(c.x2);
    const double u = static_cast<double>(c.u);
    if (winner == Winner::Opinion1) {
        if (c.x1 < 2 || c.x2 < 1)
            throw std::invalid_argument("drift_gap(winner=1) needs x1 >= 2 and x2 >= 1");
        const double psi = x2 / x1;
        return -(psi / n2) *
               (x1 - (1.0 - p) * x2 - (1.0 - p) * x2 / (x1 - 1.0) - u / (x1 + 1.0));
    }
    if (c.x2 < 2 || c.x1 < 1)
        throw std::invalid_argument("drift_gap(winner=2) needs x2 >= 2 and x1 >= 1");
    const double psi_bar = x1 / x2;
    return -(psi_bar / n2) * ((1.0 - p) * x2 - x1 - x1 / (x2 - 1.0) - u / (x2 + 1.0));
}

PhiUpDrift drift_phi_up(const Configuration& c, double p) {
    require_config(c);
    require_p(p);
    const double n2 = square(static_cast<double>(c.n()));
    PhiUpDrift d;
    d.p_plus = (2.0 - p) * static_cast<double>(c.x1 * c.x2) / n2;
    d.p_minus = static_cast<double>(c.u * (c.x1 + c.x2)) / n2;
    return d;
}

double default_r(const Configuration& c0, double p) {
    require_config(c0);
    require_p(p);
    const double n2 = square(static_cast<double>(c0.n()));
    return static_cast<double>(c0.x1) * (1.0 - p) * static_cast<double>(c0.x2) / n2;
}

SubmartingaleTracker::SubmartingaleTracker(const Configuration& c0, double p, double r)
    : p_(p), r_(r), y_(square(weighted_bias(c0, p))) {}

void SubmartingaleTracker::advance(const Configuration& c, std::uint64_t elapsed) {
    t_ += elapsed;
    y_ = square(weighted_bias(c, p_)) - r_ * static_cast<double>(t_);
}

}  // namespace usd
