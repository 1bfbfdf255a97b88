#pragma once

// Domain types and the two portfolio functionals: return x^T mu and
// variance x^T Sigma x. Dominance is always in the (maximize return,
// minimize risk) orientation.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regretfolio/matrix.hpp"

namespace regretfolio {

inline constexpr double kSimplexSumTol = 1e-8;
inline constexpr double kNegativeWeightTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;

struct AssetUniverse {
    std::vector<std::string> names;
    Vector mu;

    AssetUniverse() = default;
    AssetUniverse(std::vector<std::string> names, Vector mu);

    std::size_t size() const noexcept { return mu.size(); }
    double max_return() const;
};

/// A labeled market regime. Constructed only through make_scenario so the
/// covariance always agrees with stds and corr.
struct RegimeScenario {
    std::string label;
    Vector stds;
    Matrix corr;
    Matrix cov;

    std::size_t size() const noexcept { return stds.size(); }
};

/// Validates the correlation matrix and assembles the covariance.
RegimeScenario make_scenario(std::string label, Vector stds, Matrix corr);

/// Scenario built straight from a covariance matrix (stds = sqrt(diag),
/// corr derived). Used by tests and the robust solver for ad-hoc instances.
RegimeScenario scenario_from_covariance(std::string label, const Matrix& cov);

class UncertaintySet {
public:
    UncertaintySet() = default;
    explicit UncertaintySet(std::vector<RegimeScenario> scenarios);

    std::span<const RegimeScenario> scenarios() const noexcept { return scenarios_; }
    std::size_t size() const noexcept { return scenarios_.size(); }
    std::size_t dimension() const noexcept { return scenarios_.front().size(); }
    const RegimeScenario& operator[](std::size_t i) const { return scenarios_.at(i); }

    /// nullptr when the label is unknown.
    const RegimeScenario* find(std::string_view label) const noexcept;
    std::vector<std::string> labels() const;

private:
    std::vector<RegimeScenario> scenarios_;
};

/// Weight vector on the standard simplex. Tiny negative round-off
/// (>= -1e-10) is clamped to zero on construction.
class Portfolio {
public:
    Portfolio() = default;
    explicit Portfolio(Vector weights);

    static Portfolio uniform(std::size_t n);
    static Portfolio vertex(std::size_t n, std::size_t index);

    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_.at(i); }

    bool operator==(const Portfolio&) const = default;

private:
    Vector weights_;
};

/// True if w lies on the simplex within the library tolerances.
bool on_simplex(std::span<const double> w) noexcept;

struct ObjectivePoint {
    double ret = 0.0;
    double risk = 0.0;
};

/// Entries corr_ij * stds_i * stds_j, checked symmetric and PSD.
Matrix assemble_covariance(std::span<const double> stds, const Matrix& corr);

double portfolio_return(std::span<const double> x, std::span<const double> mu);
double portfolio_return(const Portfolio& x, std::span<const double> mu);
double portfolio_variance(std::span<const double> x, const Matrix& cov);
double portfolio_variance(const Portfolio& x, const Matrix& cov);

/// Throws NonSymmetric / NotPositiveSemidefinite / DimensionMismatch.
void check_covariance(const Matrix& cov);

constexpr bool dominates(const ObjectivePoint& p, const ObjectivePoint& q) noexcept {
    return p.ret >= q.ret && p.risk <= q.risk && (p.ret > q.ret || p.risk < q.risk);
}

/// Indices (ascending) of the points no other point dominates. Among exact
/// duplicates only the first occurrence survives.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePoint> points);

template <typename T, typename Proj>
std::vector<T> nondominated_filter(const std::vector<T>& items, Proj to_point) {
    std::vector<ObjectivePoint> pts;
    pts.reserve(items.size());
    for (const auto& it : items) pts.push_back(to_point(it));
    std::vector<T> out;
    for (std::size_t i : nondominated_indices(pts)) out.push_back(items[i]);
    return out;
}

inline std::vector<ObjectivePoint> nondominated_filter(const std::vector<ObjectivePoint>& pts) {
    return nondominated_filter(pts, [](const ObjectivePoint& p) { return p; });
}

}  // namespace regretfolio
