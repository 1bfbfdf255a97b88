#pragma once

// Per-scenario benchmark portfolios b and benchmark variances c = b' S b.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/simplex_solvers.hpp"

namespace regretfolio {

enum class TechniqueKind { BoundedRisk, WeightedSum, Sharpe, Percentile, Ideal };

struct BenchmarkTechnique {
    TechniqueKind kind = TechniqueKind::BoundedRisk;
    double cap = 0.03;       // BoundedRisk
    double lambda = 3.5;     // WeightedSum
    SignMode sign_mode = SignMode::Standard;
    double fraction = 0.2;   // Percentile: cap = min + fraction * (max - min)

    static BenchmarkTechnique of(TechniqueKind kind) { return BenchmarkTechnique{kind}; }

    void validate() const;
    std::string name() const { return std::string(technique_name(kind)); }

    static std::string_view technique_name(TechniqueKind kind) noexcept;
};

/// Accepts the CLI spellings: bounded-risk, weighted-sum, sharpe, percentile, ideal.
std::optional<TechniqueKind> parse_technique(std::string_view name) noexcept;

/// The four practitioner techniques, in legend order.
inline constexpr TechniqueKind kPracticeTechniques[] = {
    TechniqueKind::BoundedRisk, TechniqueKind::WeightedSum, TechniqueKind::Sharpe,
    TechniqueKind::Percentile};

struct BenchmarkEntry {
    std::string label;
    Portfolio portfolio;
    double variance = 0.0;
    double ret = 0.0;
};

struct BenchmarkSet {
    BenchmarkTechnique technique;
    std::vector<BenchmarkEntry> entries;  // uncertainty-set order

    const BenchmarkEntry* find(std::string_view label) const noexcept;
};

BenchmarkEntry compute_benchmark(const BenchmarkTechnique& technique, std::span<const double> mu,
                                 const RegimeScenario& scenario, const SolverConfig& config = {});

/// One entry per scenario. The first failing scenario aborts the set and its
/// label is prefixed to the error message.
BenchmarkSet compute_benchmark_set(const BenchmarkTechnique& technique, const AssetUniverse& universe,
                                   const UncertaintySet& scenarios, const SolverConfig& config = {});

}  // namespace regretfolio
