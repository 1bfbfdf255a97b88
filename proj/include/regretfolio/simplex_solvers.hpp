#pragma once

// Optimizers over the standard simplex. Everything reduces to one primitive,
// an accelerated projected-gradient solver for  a * x^T Q x + c^T x  on the
// simplex, finished by an exact active-set solve once the support settles.
// The constrained variants bisect on a multiplier or on the return floor.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/matrix.hpp"

namespace regretfolio {

struct SolverConfig {
    int max_iters = 5000;
    double tol = 1e-9;
    // Step rule: start from 1/L with L = 2 a lambda_max(Q), multiply L by
    // this factor whenever the sufficient-decrease test fails.
    double backtrack_factor = 2.0;
    std::uint64_t seed = 42;

    void validate() const;
};

struct SolveReport {
    Portfolio x;
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string status;
    // Objective after every accepted iterate (quadratic solver only).
    std::vector<double> objective_trace;
};

/// Euclidean projection onto the simplex (sort-and-threshold).
Portfolio project_to_simplex(std::span<const double> v);

/// Same projection into a caller-provided buffer, for inner loops.
void project_to_simplex(std::span<const double> v, std::span<double> out);

/// Minimizes x^T cov x + linear^T x over the simplex. An empty `linear`
/// means zero. `start` optionally warm-starts the iteration.
SolveReport min_quadratic_over_simplex(const Matrix& cov, std::span<const double> linear = {},
                                       const SolverConfig& config = {},
                                       std::span<const double> start = {});

/// max mu^T x  s.t.  x^T cov x <= cap.  Throws InfeasibleCap when the cap
/// is below the global minimum variance.
SolveReport max_return_with_variance_cap(std::span<const double> mu, const Matrix& cov, double cap,
                                         const SolverConfig& config = {});

enum class SignMode { Standard, PaperLiteral };

std::string_view to_string(SignMode mode) noexcept;

/// Standard: min lambda x^T cov x - mu^T x. PaperLiteral: the printed
/// formula, min lambda x^T cov x + mu^T x (which penalizes return).
SolveReport weighted_sum_optimum(std::span<const double> mu, const Matrix& cov, double lambda,
                                 SignMode mode = SignMode::Standard,
                                 const SolverConfig& config = {});

/// max (mu^T x) / (x^T cov x) by Dinkelbach iteration from the uniform
/// portfolio. objective_value is the ratio.
SolveReport max_sharpe_dinkelbach(std::span<const double> mu, const Matrix& cov,
                                  const SolverConfig& config = {});

struct VertexMax {
    double value = 0.0;
    std::size_t index = 0;
};

/// A convex quadratic peaks at a vertex, so this is max_i cov_ii.
VertexMax max_variance_over_simplex(const Matrix& cov);

namespace detail {

/// min  quad_weight * x^T Q x + linear^T x  over the simplex. A positive
/// `curvature` (lambda_max of Q) skips the eigenvalue solve for repeated
/// calls on one Q.
SolveReport minimize_quadratic(const Matrix& q, double quad_weight, std::span<const double> linear,
                               const SolverConfig& config, std::span<const double> start,
                               double curvature = 0.0, bool keep_trace = false);

/// Minimum variance over the face spanned by the highest-return assets
/// (a vertex unless returns tie).
SolveReport best_return_face(std::span<const double> mu, const Matrix& cov, const SolverConfig& config);

/// Largest eigenvalue of Q, clamped away from zero.
double curvature_bound(const Matrix& q);

/// Exact active-set solve of  min quad_weight x'Qx + linear'x  over the
/// simplex, optionally with the binding floor floor_mu'x = r (empty floor_mu:
/// none), seeded with a guess of the support. True only when the KKT
/// conditions hold, in which case x is the optimum.
bool active_set_solve(const Matrix& q, double quad_weight, std::span<const double> linear,
                      std::span<const double> floor_mu, double r, std::vector<std::size_t> support,
                      Vector& x);

/// min x'Sx subject to mu'x = r for a floor known to bind
/// (minimum-variance return < r < max mu). `start` seeds the support.
SolveReport min_variance_binding_floor(std::span<const double> mu, const Matrix& cov, double r,
                                       const SolverConfig& config, double curvature,
                                       std::span<const double> start);

}  // namespace detail

}  // namespace regretfolio
