#include "regretfolio/pareto.hpp"

#include <algorithm>
#include <cmath>

#include "regretfolio/error.hpp"

namespace regretfolio {

Vector uniform_grid(double lo, double hi, std::size_t n_points) {
    if (n_points < 2) throw Error(ErrorCode::InvalidArgument, "a return grid needs at least 2 points");
    if (hi - lo < 1e-12) return {hi};
    Vector grid(n_points);
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

Vector return_grid(std::span<const double> mu, const Matrix& cov, std::size_t n_points,
                   const SolverConfig& config) {
    if (cov.rows() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "returns and covariance differ");
    const SolveReport min_var = min_quadratic_over_simplex(cov, {}, config);
    const double lo = portfolio_return(min_var.x, mu);
    const double hi = *std::max_element(mu.begin(), mu.end());
    return uniform_grid(std::min(lo, hi), hi, n_points);
}

SolveReport min_variance_with_return_floor(std::span<const double> mu, const Matrix& cov, double r,
                                           const SolverConfig& config, std::span<const double> start) {
    if (!cov.square() || cov.rows() != mu.size())
        throw Error(ErrorCode::DimensionMismatch, "returns and covariance differ in size");
    const double top = *std::max_element(mu.begin(), mu.end());
    if (r > top + 1e-12)
        throw Error(ErrorCode::InfeasibleReturn,
                    "return floor " + std::to_string(r) + " exceeds the best asset return " + std::to_string(top));

    const double curvature = detail::curvature_bound(cov);
    SolveReport min_var = detail::minimize_quadratic(cov, 1.0, {}, config, start, curvature);
    if (portfolio_return(min_var.x, mu) >= r) {
        min_var.objective_value = portfolio_variance(min_var.x, cov);
        min_var.status = "converged: return floor slack";
        return min_var;
    }

    auto finish = [&](SolveReport rep, int steps) {
        rep.objective_value = portfolio_variance(rep.x, cov);
        rep.iterations = steps;
        const double ret = portfolio_return(rep.x, mu);
        rep.converged = ret >= r - 1e-12 && ret - r <= 1e-6;
        rep.status = rep.converged ? "converged: return floor binding"
                                   : "NotConverged: return gap " + std::to_string(ret - r);
        rep.objective_trace.clear();
        return rep;
    };

    if (r >= top - 1e-12) return finish(detail::best_return_face(mu, cov, config), 0);

    const Vector seed = start.empty() ? Vector(min_var.x.weights().begin(), min_var.x.weights().end())
                                       : Vector(start.begin(), start.end());
    SolveReport rep = detail::min_variance_binding_floor(mu, cov, r, config, curvature, seed);
    const int steps = rep.iterations;
    return finish(std::move(rep), steps);
}

ParetoFront trace_scenario_front(std::span<const double> mu, const RegimeScenario& scenario,
                                 std::size_t n_points, const SolverConfig& config) {
    const Vector grid = return_grid(mu, scenario.cov, n_points, config);
    std::vector<FrontPoint> raw;
    ParetoFront front;
    front.label = scenario.label;
    Vector warm;
    for (double r : grid) {
        try {
            SolveReport rep = min_variance_with_return_floor(mu, scenario.cov, r, config, warm);
            if (!rep.converged) {
                ++front.skipped;
                continue;
            }
            warm.assign(rep.x.weights().begin(), rep.x.weights().end());
            raw.push_back(FrontPoint{rep.x, portfolio_return(rep.x, mu), rep.objective_value, r});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasibleReturn && e.code() != ErrorCode::NotConverged) throw;
            ++front.skipped;
        }
    }
    front.points = nondominated_filter(raw, [](const FrontPoint& p) { return p.objective(); });
    std::stable_sort(front.points.begin(), front.points.end(),
                     [](const FrontPoint& a, const FrontPoint& b) { return a.ret < b.ret; });
    return front;
}

}  // namespace regretfolio
