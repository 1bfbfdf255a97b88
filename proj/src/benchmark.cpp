#include "regretfolio/benchmark.hpp"

#include "regretfolio/error.hpp"

namespace regretfolio {

void BenchmarkTechnique::validate() const {
    if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "cap must be > 0");
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
}

std::string_view BenchmarkTechnique::technique_name(TechniqueKind kind) noexcept {
    switch (kind) {
        case TechniqueKind::BoundedRisk: return "bounded-risk";
        case TechniqueKind::WeightedSum: return "weighted-sum";
        case TechniqueKind::Sharpe: return "sharpe";
        case TechniqueKind::Percentile: return "percentile";
        case TechniqueKind::Ideal: return "ideal";
    }
    return "unknown";
}

std::optional<TechniqueKind> parse_technique(std::string_view name) noexcept {
    for (auto kind : {TechniqueKind::BoundedRisk, TechniqueKind::WeightedSum, TechniqueKind::Sharpe,
                      TechniqueKind::Percentile, TechniqueKind::Ideal})
        if (BenchmarkTechnique::technique_name(kind) == name) return kind;
    return std::nullopt;
}

const BenchmarkEntry* BenchmarkSet::find(std::string_view label) const noexcept {
    for (const auto& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

BenchmarkEntry compute_benchmark(const BenchmarkTechnique& technique, std::span<const double> mu,
                                 const RegimeScenario& scenario, const SolverConfig& config) {
    technique.validate();
    const Matrix& cov = scenario.cov;
    SolveReport r;
    switch (technique.kind) {
        case TechniqueKind::BoundedRisk:
            r = max_return_with_variance_cap(mu, cov, technique.cap, config);
            break;
        case TechniqueKind::WeightedSum:
            r = weighted_sum_optimum(mu, cov, technique.lambda, technique.sign_mode, config);
            break;
        case TechniqueKind::Sharpe:
            r = max_sharpe_dinkelbach(mu, cov, config);
            break;
        case TechniqueKind::Percentile: {
            const double lo = min_quadratic_over_simplex(cov, {}, config).objective_value;
            const double hi = max_variance_over_simplex(cov).value;
            r = max_return_with_variance_cap(mu, cov, lo + technique.fraction * (hi - lo), config);
            break;
        }
        case TechniqueKind::Ideal:
            r = min_quadratic_over_simplex(cov, {}, config);
            break;
    }
    BenchmarkEntry e;
    e.label = scenario.label;
    e.variance = portfolio_variance(r.x, cov);
    e.ret = portfolio_return(r.x, mu);
    e.portfolio = std::move(r.x);
    return e;
}

BenchmarkSet compute_benchmark_set(const BenchmarkTechnique& technique, const AssetUniverse& universe,
                                   const UncertaintySet& scenarios, const SolverConfig& config) {
    BenchmarkSet set{technique, {}};
    for (const auto& s : scenarios.scenarios()) {
        try {
            set.entries.push_back(compute_benchmark(technique, universe.mu, s, config));
        } catch (const Error& e) {
            throw Error(e.code(), "scenario '" + s.label + "' (" + technique.name() + "): " + e.message());
        }
    }
    return set;
}

}  // namespace regretfolio
