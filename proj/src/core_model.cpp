#include "regretfolio/core_model.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "regretfolio/error.hpp"
#include "regretfolio/kernels.hpp"

namespace regretfolio {

AssetUniverse::AssetUniverse(std::vector<std::string> asset_names, Vector returns)
    : names(std::move(asset_names)), mu(std::move(returns)) {
    if (names.size() != mu.size())
        throw Error(ErrorCode::DimensionMismatch, "asset names and returns differ in length");
    if (mu.size() < 2) throw Error(ErrorCode::ValidationError, "at least two assets required");
    for (double m : mu)
        if (!std::isfinite(m)) throw Error(ErrorCode::ValidationError, "non-finite expected return");
}

double AssetUniverse::max_return() const { return *std::max_element(mu.begin(), mu.end()); }

namespace {

void validate_correlation(const Matrix& corr) {
    const std::size_t n = corr.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(std::abs(corr(i, j) - corr(j, i)) <= 1e-12))
                throw Error(ErrorCode::NonSymmetric, "correlation matrix is not symmetric");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(corr(i, i) - 1.0) > 1e-12)
            throw Error(ErrorCode::ValidationError,
                        "correlation matrix must have unit diagonal (entry " + std::to_string(i) + ")");
    }
}

void validate_entries_range(const Matrix& corr) {
    for (double v : corr.data()) {
        if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12))
            throw Error(ErrorCode::ValidationError, "correlation entry outside [-1, 1]");
    }
}

}  // namespace

void check_covariance(const Matrix& cov) {
    if (!cov.square()) throw Error(ErrorCode::DimensionMismatch, "covariance must be square");
    for (double v : cov.data())
        if (!std::isfinite(v)) throw Error(ErrorCode::ValidationError, "non-finite covariance entry");
    const std::size_t n = cov.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (cov(i, j) != cov(j, i))
                throw Error(ErrorCode::NonSymmetric, "covariance matrix is not symmetric");
    const double lo = min_eigenvalue(cov);
    if (lo < -kPsdTol)
        throw Error(ErrorCode::NotPositiveSemidefinite,
                    "minimum eigenvalue " + std::to_string(lo) + " below -1e-8");
}

Matrix assemble_covariance(std::span<const double> stds, const Matrix& corr) {
    if (!corr.square() || corr.rows() != stds.size())
        throw Error(ErrorCode::DimensionMismatch, "stds length does not match correlation matrix");
    for (double s : stds)
        if (!(s > 0.0) || !std::isfinite(s))
            throw Error(ErrorCode::ValidationError, "standard deviations must be positive");
    validate_correlation(corr);
    const std::size_t n = stds.size();
    Matrix cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = corr(i, j) * stds[i] * stds[j];
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    check_covariance(cov);
    validate_entries_range(corr);
    return cov;
}

RegimeScenario make_scenario(std::string label, Vector stds, Matrix corr) {
    Matrix cov = assemble_covariance(stds, corr);
    return RegimeScenario{std::move(label), std::move(stds), std::move(corr), std::move(cov)};
}

RegimeScenario scenario_from_covariance(std::string label, const Matrix& cov) {
    check_covariance(cov);
    const std::size_t n = cov.rows();
    Vector stds(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(cov(i, i) > 0.0))
            throw Error(ErrorCode::ValidationError, "covariance diagonal must be positive");
        stds[i] = std::sqrt(cov(i, i));
    }
    Matrix corr(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) corr(i, j) = i == j ? 1.0 : cov(i, j) / (stds[i] * stds[j]);
    // Keep the caller's covariance verbatim rather than re-multiplying.
    return RegimeScenario{std::move(label), std::move(stds), std::move(corr), cov};
}

UncertaintySet::UncertaintySet(std::vector<RegimeScenario> scenarios)
    : scenarios_(std::move(scenarios)) {
    if (scenarios_.empty()) throw Error(ErrorCode::ValidationError, "uncertainty set is empty");
    std::set<std::string> seen;
    const std::size_t n = scenarios_.front().size();
    for (const auto& s : scenarios_) {
        if (s.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "scenario '" + s.label + "' has a different asset count");
        if (!seen.insert(s.label).second)
            throw Error(ErrorCode::ValidationError, "duplicate scenario label '" + s.label + "'");
    }
}

const RegimeScenario* UncertaintySet::find(std::string_view label) const noexcept {
    for (const auto& s : scenarios_)
        if (s.label == label) return &s;
    return nullptr;
}

std::vector<std::string> UncertaintySet::labels() const {
    std::vector<std::string> out;
    for (const auto& s : scenarios_) out.push_back(s.label);
    return out;
}

bool on_simplex(std::span<const double> w) noexcept {
    if (w.empty()) return false;
    double sum = 0.0;
    for (double v : w) {
        if (!std::isfinite(v) || v < -kNegativeWeightTol) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= kSimplexSumTol;
}

Portfolio::Portfolio(Vector weights) : weights_(std::move(weights)) {
    if (!on_simplex(weights_))
        throw Error(ErrorCode::InvalidArgument, "portfolio weights are not on the simplex");
    for (double& v : weights_) v = std::max(v, 0.0);
}

Portfolio Portfolio::uniform(std::size_t n) {
    return Portfolio(Vector(n, 1.0 / static_cast<double>(n)));
}

Portfolio Portfolio::vertex(std::size_t n, std::size_t index) {
    Vector w(n, 0.0);
    w.at(index) = 1.0;
    return Portfolio(std::move(w));
}

double portfolio_return(std::span<const double> x, std::span<const double> mu) {
    if (x.size() != mu.size())
        throw Error(ErrorCode::DimensionMismatch, "portfolio and return vector differ in length");
    return kernels::dot(x, mu);
}

double portfolio_return(const Portfolio& x, std::span<const double> mu) {
    return portfolio_return(x.weights(), mu);
}

double portfolio_variance(std::span<const double> x, const Matrix& cov) {
    if (!cov.square() || cov.rows() != x.size())
        throw Error(ErrorCode::DimensionMismatch, "portfolio and covariance differ in size");
    return kernels::quad_form(cov, x);
}

double portfolio_variance(const Portfolio& x, const Matrix& cov) {
    return portfolio_variance(x.weights(), cov);
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePoint> points) {
    const std::size_t n = points.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].ret != points[b].ret) return points[a].ret > points[b].ret;
        if (points[a].risk != points[b].risk) return points[a].risk < points[b].risk;
        return a < b;
    });

    std::vector<char> keep(n, 0);
    double best_risk_above = std::numeric_limits<double>::infinity();
    std::size_t g = 0;
    while (g < n) {
        // Group of equal returns; its first element has the minimal risk and
        // the smallest index among ties.
        std::size_t end = g;
        while (end < n && points[order[end]].ret == points[order[g]].ret) ++end;
        const double group_min = points[order[g]].risk;
        if (group_min < best_risk_above) keep[order[g]] = 1;
        best_risk_above = std::min(best_risk_above, group_min);
        g = end;
    }

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(i);
    return out;
}

}  // namespace regretfolio
