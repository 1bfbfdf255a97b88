#pragma once

// Scenario-wise efficient fronts of the mean-variance problem, traced by the
// epsilon-constraint method: minimize variance subject to a return floor.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/simplex_solvers.hpp"

namespace regretfolio {

inline constexpr std::size_t kDefaultFrontPoints = 60;

struct FrontPoint {
    Portfolio x;
    double ret = 0.0;
    double risk = 0.0;  // variance, or regret on robust fronts
    double target_r = 0.0;

    ObjectivePoint objective() const noexcept { return {ret, risk}; }
};

struct ParetoFront {
    std::string label;
    std::vector<FrontPoint> points;  // ascending return
    bool nondominated = true;
    std::size_t skipped = 0;         // grid targets that failed to solve
};

/// n_points evenly spaced values from lo to hi inclusive; a single value when
/// the range is narrower than 1e-12.
Vector uniform_grid(double lo, double hi, std::size_t n_points);

/// Grid from the minimum-variance portfolio's return to max_i mu_i.
Vector return_grid(std::span<const double> mu, const Matrix& cov, std::size_t n_points,
                   const SolverConfig& config = {});

/// min x'Sx  s.t.  mu'x >= r. objective_value is the variance.
SolveReport min_variance_with_return_floor(std::span<const double> mu, const Matrix& cov, double r,
                                           const SolverConfig& config = {},
                                           std::span<const double> start = {});

ParetoFront trace_scenario_front(std::span<const double> mu, const RegimeScenario& scenario,
                                 std::size_t n_points = kDefaultFrontPoints,
                                 const SolverConfig& config = {});

}  // namespace regretfolio
