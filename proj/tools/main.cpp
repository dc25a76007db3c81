// stubborn-usd: simulation and verification lab for the undecided-state
// dynamics with a stubborn preferred opinion.
//
// Subcommands:
//   simulate     Monte Carlo batch from one configuration (JSON or CSV)
//   sweep        (x1, p) grid of batches, CSV rows and optional SVG heatmap
//   oracle       exact absorption probabilities / times for small n (JSON)
//   couple       monotone-coupling order check between two chains
//   drift-check  closed-form drift identities vs exhaustive enumeration
//
// Exit codes: 0 ok, 1 property violation detected, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "usd/analytics.hpp"
#include "usd/coupling.hpp"
#include "usd/engine.hpp"
#include "usd/oracle.hpp"
#include "usd/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STUBBORN_USD_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) cap = std::min<unsigned long>(cap, v);
    }
    return cap;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file: " + out_path);
    file << text;
}

// Grid specs: either a comma list ("100,120,140") or an inclusive range
// ("100:200:20"). Reals accept the same forms.
std::vector<std::int64_t> parse_int_grid(const std::string& spec) {
    std::vector<std::int64_t> grid;
    const auto parse_one = [](const std::string& tok) {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(tok, &used);
        if (used != tok.size()) throw UsageError("bad integer in grid: " + tok);
        return v;
    };
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string lo_s, hi_s, step_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, step_s))
            throw UsageError("range grid needs lo:hi:step");
        const auto lo = parse_one(lo_s), hi = parse_one(hi_s), step = parse_one(step_s);
        if (step <= 0 || hi < lo) throw UsageError("range grid needs step > 0 and hi >= lo");
        for (std::int64_t v = lo; v <= hi; v += step) grid.push_back(v);
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(parse_one(tok));
    }
    if (grid.empty()) throw UsageError("empty grid: " + spec);
    return grid;
}

std::vector<double> parse_real_grid(const std::string& spec) {
    std::vector<double> grid;
    const auto parse_one = [](const std::string& tok) {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw UsageError("bad real in grid: " + tok);
        return v;
    };
    if (spec.find(':') != std::string::npos) {
        std::stringstream ss(spec);
        std::string lo_s, hi_s, step_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, step_s))
            throw UsageError("range grid needs lo:hi:step");
        const double lo = parse_one(lo_s), hi = parse_one(hi_s), step = parse_one(step_s);
        if (!(step > 0) || hi < lo) throw UsageError("range grid needs step > 0 and hi >= lo");
        for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(std::min(v, hi));
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(parse_one(tok));
    }
    if (grid.empty()) throw UsageError("empty grid: " + spec);
    return grid;
}

usd::Configuration parse_config(const std::string& spec) {
    const auto grid = parse_int_grid(spec);
    if (grid.size() != 3) throw UsageError("configuration needs x1,x2,u");
    return {grid[0], grid[1], grid[2]};
}

void require_valid(const usd::Configuration& c, double p) {
    if (c.x1 < 0 || c.x2 < 0 || c.u < 0) throw UsageError("counts must be non-negative");
    if (c.n() < 2) throw UsageError("population needs n >= 2");
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("stubbornness p must lie in [0,1]");
}

usd::report::CellSummary make_cell(const usd::Configuration& c, double p,
                                   const usd::BatchSummary& batch) {
    usd::report::CellSummary cell;
    cell.x1 = c.x1;
    cell.x2 = c.x2;
    cell.u = c.u;
    cell.p = p;
    const auto pot = usd::potentials(c, p);
    cell.p_s = pot.threshold_p_s;
    cell.delta_w0 = pot.weighted_bias;
    cell.batch = batch;
    return cell;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::int64_t n = 0;
    std::int64_t x1 = -1;
    std::optional<std::int64_t> x2, u;
    std::optional<double> p, dp;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;
    std::uint64_t stride = 0;
    std::string format = "json";
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    if (args.n < 2) throw UsageError("population needs n >= 2");
    if (args.x1 < 0) throw UsageError("--x1 must be non-negative");
    std::int64_t x2 = 0, u = 0;
    if (args.x2 && args.u) {
        x2 = *args.x2;
        u = *args.u;
        if (args.x1 + x2 + u != args.n) throw UsageError("x1 + x2 + u must equal n");
    } else if (args.x2) {
        x2 = *args.x2;
        u = args.n - args.x1 - x2;
    } else if (args.u) {
        u = *args.u;
        x2 = args.n - args.x1 - u;
    } else {
        x2 = args.n - args.x1;
    }
    if (x2 < 0 || u < 0) throw UsageError("x1 + x2 (or u) exceeds n");
    const usd::Configuration c{args.x1, x2, u};

    double p = 0.0;
    if (args.p && args.dp) throw UsageError("give either --p or --dp, not both");
    if (args.p) {
        p = *args.p;
    } else if (args.dp) {
        if (x2 == 0) throw UsageError("--dp needs x2 >= 1 so that p_s is defined");
        p = 1.0 - static_cast<double>(args.x1) / static_cast<double>(x2) + *args.dp;
    } else {
        throw UsageError("one of --p or --dp is required");
    }
    require_valid(c, p);
    if (args.trials < 1) throw UsageError("--trials must be at least 1");
    if (args.format != "json" && args.format != "csv")
        throw UsageError("--format must be json or csv");

    usd::TrialSpec spec;
    spec.initial = c;
    spec.params = {p, true};
    spec.seed = args.seed;
    spec.max_interactions = args.max_steps;
    spec.record_stride = args.stride;
    const usd::BatchResult batch = usd::run_batch_detailed(spec, args.trials, thread_cap());
    const auto cell = make_cell(c, p, batch.summary);

    if (args.format == "csv") {
        std::string text = std::string(usd::report::kCsvHeader) + "\n" +
                           usd::report::csv_row(cell) + "\n";
        write_output(text, args.out);
        return kExitOk;
    }
    nlohmann::ordered_json j;
    j["command"] = "simulate";
    j["n"] = args.n;
    j["seed"] = args.seed;
    j["max_interactions"] =
        spec.max_interactions > 0 ? spec.max_interactions : usd::default_max_interactions(args.n);
    j["record_stride"] = args.stride;
    j["summary"] = usd::report::summary_json(cell);
    if (args.stride > 0) {
        nlohmann::ordered_json trajectories = nlohmann::ordered_json::array();
        for (const auto& record : batch.trajectories)
            trajectories.push_back(usd::report::trajectory_json(record));
        j["trajectories"] = std::move(trajectories);
    }
    write_output(j.dump(2) + "\n", args.out);
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    std::int64_t n = 0;
    std::string x1_grid;
    std::optional<std::int64_t> u;
    std::optional<double> u_frac;
    std::string p_grid, dp_grid;
    std::uint64_t trials = 100;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;
    std::string out, svg;
};

int run_sweep(const SweepArgs& args) {
    if (args.n < 2) throw UsageError("population needs n >= 2");
    const auto x1_grid = parse_int_grid(args.x1_grid);
    if (args.p_grid.empty() == args.dp_grid.empty())
        throw UsageError("give exactly one of --p-grid or --dp-grid");
    if (args.u && args.u_frac) throw UsageError("give at most one of --u or --u-frac");
    if (args.trials < 1) throw UsageError("--trials must be at least 1");

    std::int64_t u = 0;
    if (args.u) u = *args.u;
    if (args.u_frac) {
        if (!(*args.u_frac >= 0.0 && *args.u_frac <= 1.0))
            throw UsageError("--u-frac must lie in [0,1]");
        u = std::llround(*args.u_frac * static_cast<double>(args.n));
    }

    const std::vector<double> grid_values =
        parse_real_grid(args.p_grid.empty() ? args.dp_grid : args.p_grid);
    const bool offsets = !args.dp_grid.empty();

    // resolve and validate every cell before running anything
    struct Cell {
        usd::Configuration c;
        double p;
    };
    std::vector<Cell> cells;
    std::vector<std::optional<double>> p_s_by_x1;
    for (const auto x1 : x1_grid) {
        const std::int64_t x2 = args.n - x1 - u;
        const usd::Configuration c{x1, x2, u};
        if (x1 < 0 || x2 < 0 || u < 0)
            throw UsageError("cell x1=" + std::to_string(x1) + " leaves negative counts");
        std::optional<double> p_s;
        if (x2 > 0) p_s = 1.0 - static_cast<double>(x1) / static_cast<double>(x2);
        p_s_by_x1.push_back(p_s);
        for (const auto g : grid_values) {
            double p = g;
            if (offsets) {
                if (!p_s) throw UsageError("--dp-grid needs x2 >= 1 in every cell");
                p = *p_s + g;
            }
            if (!(p >= 0.0 && p <= 1.0))
                throw UsageError("cell x1=" + std::to_string(x1) +
                                 " resolves p outside [0,1]: " + usd::report::format_double(p));
            require_valid(c, p);
            cells.push_back({c, p});
        }
    }

    std::string csv = std::string(usd::report::kCsvHeader) + "\n";
    std::vector<double> win1_fraction;
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        usd::TrialSpec spec;
        spec.initial = cells[idx].c;
        spec.params = {cells[idx].p, true};
        spec.seed = usd::stream_seed(args.seed, idx);  // one stream block per cell
        spec.max_interactions = args.max_steps;
        const usd::BatchSummary summary = usd::run_batch(spec, args.trials, thread_cap());
        csv += usd::report::csv_row(make_cell(cells[idx].c, cells[idx].p, summary)) + "\n";
        win1_fraction.push_back(static_cast<double>(summary.wins1) /
                                static_cast<double>(args.trials));
    }
    write_output(csv, args.out);

    if (!args.svg.empty()) {
        // with --dp-grid each column has its own p values, so the y axis is
        // the offset itself and the threshold line sits at offset 0
        std::vector<double> p_axis = grid_values;
        std::vector<std::optional<double>> diagonal = p_s_by_x1;
        if (!offsets) {
            for (std::size_t i = 0; i < grid_values.size(); ++i) p_axis[i] = cells[i].p;
        } else {
            for (auto& ps : diagonal)
                if (ps) ps = 0.0;
        }
        write_output(usd::report::heatmap_svg(x1_grid, p_axis, win1_fraction, diagonal),
                     args.svg);
    }
    return kExitOk;
}

// ------------------------------------------------------------------ oracle

struct OracleArgs {
    std::int64_t n = 0;
    double p = -1.0;
    std::string config;
    std::uint64_t check_mc = 0;
    std::uint64_t seed = 0;
    std::int64_t cap = usd::ExactChainSolution::kDefaultCap;
    std::string out;
};

int run_oracle(const OracleArgs& args) {
    if (args.n < 2) throw UsageError("population needs n >= 2");
    if (args.n > args.cap)
        throw UsageError("n exceeds the exact-solver cap of " + std::to_string(args.cap));
    if (!(args.p >= 0.0 && args.p <= 1.0)) throw UsageError("stubbornness p must lie in [0,1]");

    const auto sol = usd::solve_chain(args.n, args.p, args.cap);
    std::vector<usd::Configuration> states;
    if (!args.config.empty()) {
        const auto c = parse_config(args.config);
        if (c.n() != args.n) throw UsageError("--config does not sum to n");
        states.push_back(c);
    } else {
        for (std::int64_t idx = 0; idx < usd::ExactChainSolution::state_count(args.n); ++idx)
            states.push_back(sol.state(idx));
    }

    nlohmann::ordered_json j;
    j["command"] = "oracle";
    j["n"] = args.n;
    j["p"] = args.p;
    j["residual"] = sol.residual();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& c : states) {
        nlohmann::ordered_json row;
        row["x1"] = c.x1;
        row["x2"] = c.x2;
        row["u"] = c.u;
        row["win1"] = sol.win1(c);
        row["win2"] = sol.win2(c);
        const auto et = sol.expected_time(c);
        if (et) {
            row["exp_time"] = *et;
        } else {
            row["exp_time"] = nullptr;
        }
        rows.push_back(std::move(row));
    }
    j["states"] = std::move(rows);

    if (args.check_mc > 0) {
        nlohmann::ordered_json mc;
        mc["trials"] = args.check_mc;
        mc["seed"] = args.seed;
        double max_abs_z = 0.0;
        nlohmann::ordered_json zrows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& c = states[i];
            if (c.frozen()) continue;  // no absorption law to compare
            const auto cmp = usd::compare_monte_carlo(sol, c, args.check_mc,
                                                      usd::stream_seed(args.seed, i),
                                                      thread_cap());
            max_abs_z = std::max(max_abs_z, std::abs(cmp.z_score));
            nlohmann::ordered_json row;
            row["x1"] = c.x1;
            row["x2"] = c.x2;
            row["u"] = c.u;
            row["exact"] = cmp.exact;
            row["empirical"] = cmp.empirical;
            row["z"] = cmp.z_score;
            zrows.push_back(std::move(row));
        }
        mc["max_abs_z"] = max_abs_z;
        mc["flagged"] = max_abs_z > 5.0;
        mc["states"] = std::move(zrows);
        j["check_mc"] = std::move(mc);
        if (max_abs_z > 5.0)
            std::cerr << "warning: Monte Carlo deviates from the exact solution (max |z| = "
                      << usd::report::format_double(max_abs_z) << ")\n";
    }
    write_output(j.dump(2) + "\n", args.out);
    return kExitOk;
}

// ------------------------------------------------------------------ couple

struct CoupleArgs {
    std::string config, config_tilde;
    double p = -1.0, p_tilde = -1.0;
    std::uint64_t steps = 10'000;
    std::uint64_t runs = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_couple(const CoupleArgs& args) {
    const auto c = parse_config(args.config);
    const auto c_tilde = parse_config(args.config_tilde);
    require_valid(c, args.p);
    require_valid(c_tilde, args.p_tilde);
    if (c.n() != c_tilde.n()) throw UsageError("both configurations need the same n");
    if (args.p < args.p_tilde) throw UsageError("needs p >= p-tilde");
    if (!usd::config_geq(c, c_tilde))
        throw UsageError("needs config >= config-tilde in the order (x1, x1+u)");
    if (args.runs < 1) throw UsageError("--runs must be at least 1");

    nlohmann::ordered_json j;
    j["command"] = "couple";
    j["steps"] = args.steps;
    j["runs"] = args.runs;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool all_preserved = true;
    for (std::uint64_t run = 0; run < args.runs; ++run) {
        const auto report = usd::check_monotone_run(c, args.p, c_tilde, args.p_tilde, args.steps,
                                                    usd::stream_seed(args.seed, run));
        nlohmann::ordered_json row;
        row["run"] = run;
        row["preserved"] = report.preserved;
        if (report.first_violation) {
            row["first_violation"] = *report.first_violation;
        } else {
            row["first_violation"] = nullptr;
        }
        rows.push_back(std::move(row));
        all_preserved = all_preserved && report.preserved;
    }
    j["all_preserved"] = all_preserved;
    j["results"] = std::move(rows);
    write_output(j.dump(2) + "\n", args.out);
    if (!all_preserved) {
        std::cerr << "order violation detected: the coupling invariant failed\n";
        return kExitViolation;
    }
    return kExitOk;
}

// ------------------------------------------------------------- drift-check

struct DriftCheckArgs {
    std::int64_t n_max = 12;
    std::string p_grid = "0:1:0.1";
    std::string out;
};

int run_drift_check(const DriftCheckArgs& args) {
    if (args.n_max < 2) throw UsageError("--n-max must be at least 2");
    const auto p_values = parse_real_grid(args.p_grid);
    for (const auto p : p_values)
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p grid entries must lie in [0,1]");

    constexpr double tolerance = 1e-10;
    double worst_bias = 0.0, worst_bias_sq = 0.0, worst_gap1 = 0.0, worst_gap2 = 0.0,
           worst_phi = 0.0;

    for (std::int64_t n = 2; n <= args.n_max; ++n) {
        for (std::int64_t x1 = 0; x1 <= n; ++x1) {
            for (std::int64_t x2 = 0; x1 + x2 <= n; ++x2) {
                const usd::Configuration c{x1, x2, n - x1 - x2};
                for (const auto p : p_values) {
                    const auto law = usd::step_distribution(c, {p, true});
                    const double dw0 = usd::weighted_bias(c, p);
                    double e_dw = 0.0, e_dw2 = 0.0, e_gap1 = 0.0, e_gap2 = 0.0;
                    double phi_plus = 0.0, phi_minus = 0.0;
                    for (const auto& [succ, prob] : law) {
                        const double dw = usd::weighted_bias(succ, p);
                        e_dw += prob * (dw - dw0);
                        e_dw2 += prob * (dw * dw - dw0 * dw0);
                        if (c.x1 >= 2 && c.x2 >= 1)
                            e_gap1 += prob * (static_cast<double>(succ.x2) / succ.x1 -
                                              static_cast<double>(c.x2) / c.x1);
                        if (c.x2 >= 2 && c.x1 >= 1)
                            e_gap2 += prob * (static_cast<double>(succ.x1) / succ.x2 -
                                              static_cast<double>(c.x1) / c.x2);
                        if (succ.u == c.u + 1) phi_plus += prob;
                        if (succ.u == c.u - 1) phi_minus += prob;
                    }
                    worst_bias = std::max(worst_bias,
                                          std::abs(usd::drift_weighted_bias(c, p) - e_dw));
                    worst_bias_sq = std::max(
                        worst_bias_sq, std::abs(usd::drift_weighted_bias_squared(c, p) - e_dw2));
                    if (c.x1 >= 2 && c.x2 >= 1)
                        worst_gap1 = std::max(
                            worst_gap1,
                            std::abs(usd::drift_gap(c, p, usd::Winner::Opinion1) - e_gap1));
                    if (c.x2 >= 2 && c.x1 >= 1)
                        worst_gap2 = std::max(
                            worst_gap2,
                            std::abs(usd::drift_gap(c, p, usd::Winner::Opinion2) - e_gap2));
                    const auto d = usd::drift_phi_up(c, p);
                    worst_phi = std::max({worst_phi, std::abs(d.p_plus - phi_plus),
                                          std::abs(d.p_minus - phi_minus)});
                }
            }
        }
    }

    nlohmann::ordered_json j;
    j["command"] = "drift-check";
    j["n_max"] = args.n_max;
    j["tolerance"] = tolerance;
    j["max_discrepancy"] = {{"weighted_bias", worst_bias},
                            {"weighted_bias_squared", worst_bias_sq},
                            {"gap_winner1", worst_gap1},
                            {"gap_winner2", worst_gap2},
                            {"phi_up", worst_phi}};
    const bool ok = worst_bias <= tolerance && worst_bias_sq <= tolerance &&
                    worst_gap1 <= tolerance && worst_gap2 <= tolerance && worst_phi <= tolerance;
    j["ok"] = ok;
    write_output(j.dump(2) + "\n", args.out);
    if (!ok) {
        std::cerr << "drift identity discrepancy above tolerance\n";
        return kExitViolation;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Undecided-state dynamics with stubborn agents: simulator and analysis lab"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo batch from one configuration");
    sim_cmd->add_option("--n", sim.n, "population size")->required();
    sim_cmd->add_option("--x1", sim.x1, "initial Opinion-1 support")->required();
    sim_cmd->add_option("--x2", sim.x2, "initial Opinion-2 support");
    sim_cmd->add_option("--u", sim.u, "initial undecided count");
    sim_cmd->add_option("--p", sim.p, "stubbornness in [0,1]");
    sim_cmd->add_option("--dp", sim.dp, "stubbornness offset from p_s = 1 - x1/x2");
    sim_cmd->add_option("--trials", sim.trials, "independent trials");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--max-steps", sim.max_steps, "interaction budget (0 = auto)");
    sim_cmd->add_option("--stride", sim.stride, "trajectory stride (0 = none)");
    sim_cmd->add_option("--format", sim.format, "json or csv");
    sim_cmd->add_option("--out", sim.out, "output file (default stdout)");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "grid of batches over (x1, p)");
    sweep_cmd->add_option("--n", sweep.n, "population size")->required();
    sweep_cmd->add_option("--x1-grid", sweep.x1_grid, "x1 values: list or lo:hi:step")->required();
    sweep_cmd->add_option("--u", sweep.u, "undecided count per cell");
    sweep_cmd->add_option("--u-frac", sweep.u_frac, "undecided fraction of n per cell");
    sweep_cmd->add_option("--p-grid", sweep.p_grid, "absolute p values: list or lo:hi:step");
    sweep_cmd->add_option("--dp-grid", sweep.dp_grid, "p offsets from per-cell p_s");
    sweep_cmd->add_option("--trials", sweep.trials, "trials per cell");
    sweep_cmd->add_option("--seed", sweep.seed, "master seed");
    sweep_cmd->add_option("--max-steps", sweep.max_steps, "interaction budget (0 = auto)");
    sweep_cmd->add_option("--out", sweep.out, "CSV output file (default stdout)");
    sweep_cmd->add_option("--svg", sweep.svg, "also write an SVG heatmap here");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "exact small-instance chain solution");
    oracle_cmd->add_option("--n", oracle.n, "population size")->required();
    oracle_cmd->add_option("--p", oracle.p, "stubbornness in [0,1]")->required();
    oracle_cmd->add_option("--config", oracle.config, "single state x1,x2,u to report");
    oracle_cmd->add_option("--check-mc", oracle.check_mc, "Monte Carlo trials per state");
    oracle_cmd->add_option("--seed", oracle.seed, "master seed for --check-mc");
    oracle_cmd->add_option("--cap", oracle.cap, "state-space cap on n");
    oracle_cmd->add_option("--out", oracle.out, "output file (default stdout)");

    CoupleArgs couple;
    auto* couple_cmd = app.add_subcommand("couple", "monotone coupling order check");
    couple_cmd->add_option("--config", couple.config, "upper configuration x1,x2,u")->required();
    couple_cmd->add_option("--p", couple.p, "upper stubbornness")->required();
    couple_cmd->add_option("--config-tilde", couple.config_tilde, "lower configuration x1,x2,u")
        ->required();
    couple_cmd->add_option("--p-tilde", couple.p_tilde, "lower stubbornness")->required();
    couple_cmd->add_option("--steps", couple.steps, "coupled interactions per run");
    couple_cmd->add_option("--runs", couple.runs, "independent coupled runs");
    couple_cmd->add_option("--seed", couple.seed, "master seed");
    couple_cmd->add_option("--out", couple.out, "output file (default stdout)");

    DriftCheckArgs drift;
    auto* drift_cmd = app.add_subcommand("drift-check", "drift identities vs enumeration");
    drift_cmd->add_option("--n-max", drift.n_max, "largest population to scan");
    drift_cmd->add_option("--p-grid", drift.p_grid, "p values: list or lo:hi:step");
    drift_cmd->add_option("--out", drift.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim_cmd->parsed()) return run_simulate(sim);
        if (sweep_cmd->parsed()) return run_sweep(sweep);
        if (oracle_cmd->parsed()) return run_oracle(oracle);
        if (couple_cmd->parsed()) return run_couple(couple);
        if (drift_cmd->parsed()) return run_drift_check(drift);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: value out of range: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}
