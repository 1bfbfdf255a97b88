#pragma once

// Benchmark-regret robustness for the mean-variance problem with a finite set
// of covariance scenarios. The robust risk of a portfolio x is
//
//     regret(x) = max over scenarios s of | x' S_s x - c_s |      (absolute)
//     regret(x) = max over scenarios s of ( x' S_s x - c_s )      (signed)
//
// where c_s is the variance of the benchmark portfolio for scenario s. The
// bi-objective robust problem trades return against this regret; its front is
// traced with a return floor, each floor solved by multi-start projected
// subgradient descent on the (nonsmooth, nonconvex) absolute regret.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "regretfolio/benchmark.hpp"
#include "regretfolio/core_model.hpp"
#include "regretfolio/pareto.hpp"
#include "regretfolio/simplex_solvers.hpp"

namespace regretfolio {

enum class RegretMode { Absolute, Signed };

std::string_view to_string(RegretMode mode) noexcept;

struct RegretSpec {
    UncertaintySet scenarios;
    Vector reference;  // c_s, aligned with scenarios
    RegretMode mode = RegretMode::Absolute;
    // Benchmark portfolios when known; used as solver start points.
    std::vector<Portfolio> benchmarks;

    RegretSpec() = default;
    RegretSpec(UncertaintySet scenarios, Vector reference, RegretMode mode = RegretMode::Absolute);

    /// Takes c_s from the benchmark entry with the matching label.
    static RegretSpec from_benchmarks(const UncertaintySet& scenarios, const BenchmarkSet& benchmarks,
                                      RegretMode mode = RegretMode::Absolute);

    std::size_t size() const noexcept { return reference.size(); }
};

struct ScenarioRegret {
    std::string label;
    double variance = 0.0;
    double regret = 0.0;  // |v - c| or v - c by mode
};

struct RegretEvaluation {
    double value = 0.0;
    std::size_t argmax = 0;  // first scenario attaining the max
    std::vector<ScenarioRegret> per_scenario;
};

RegretEvaluation regret_risk(std::span<const double> x, const RegretSpec& spec);
inline RegretEvaluation regret_risk(const Portfolio& x, const RegretSpec& spec) {
    return regret_risk(x.weights(), spec);
}

/// max over scenarios of (value - reference). Key sets must agree.
double generic_regret(const std::map<std::string, double>& values,
                      const std::map<std::string, double>& references);

struct RobustFrontPoint {
    Portfolio x;
    double ret = 0.0;
    double regret = 0.0;
    double target_r = 0.0;
    std::vector<ScenarioRegret> per_scenario;
    std::string argmax_scenario;

    ObjectivePoint objective() const noexcept { return {ret, regret}; }
};

struct RobustConfig {
    SolverConfig solver;
    std::size_t multistart = 8;  // random Dirichlet starts
    int iterations = 2000;       // subgradient steps per start
    double step0 = 0.1;          // step length eta_t = step0 / sqrt(t)

    void validate() const;
};

/// Euclidean projection onto { x in simplex : mu'x >= r }.
void project_to_feasible(std::span<const double> v, std::span<const double> mu, double r,
                         std::span<double> out);

/// Minimizes the robust regret subject to mu'x >= r. `stream` selects an
/// independent random-start sequence under config.solver.seed.
RobustFrontPoint solve_robust_point(std::span<const double> mu, const RegretSpec& spec, double r,
                                    const RobustConfig& config = {}, std::uint64_t stream = 0);

/// Same, with the per-scenario return-floor optima supplied by the caller
/// instead of recomputed (the front tracer reuses its scenario fronts).
RobustFrontPoint solve_robust_point(std::span<const double> mu, const RegretSpec& spec, double r,
                                    const RobustConfig& config, std::uint64_t stream,
                                    std::span<const Portfolio> floor_starts);

/// Return grid from the lowest scenario minimum-variance return to
/// max_i mu_i.
Vector robust_return_grid(std::span<const double> mu, const UncertaintySet& scenarios,
                          std::size_t n_points, const SolverConfig& config = {});

/// Nondominated (max return, min regret) points, ascending return.
std::vector<RobustFrontPoint> trace_robust_front(std::span<const double> mu, const RegretSpec& spec,
                                                 std::size_t n_points = kDefaultFrontPoints,
                                                 const RobustConfig& config = {});

}  // namespace regretfolio
