#pragma once

// Post-hoc scoring of robust solution sets: map them into each scenario's
// objective space and compare hypervolumes against the scenario fronts.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/pareto.hpp"
#include "regretfolio/robust.hpp"

namespace regretfolio {

/// Box corner for 2-D hypervolume: return lower bound, variance upper bound.
struct HypervolumeRef {
    double ret_ref = 0.0;
    double var_ref = 1.0;
};

/// ret_ref = 0, var_ref = 1.1 * largest asset variance over all scenarios.
HypervolumeRef default_reference(const UncertaintySet& scenarios);

/// (mu'x, x'Sx) of every portfolio under the scenario's covariance.
std::vector<ObjectivePoint> evaluate_under_scenario(std::span<const Portfolio> portfolios,
                                                    std::span<const double> mu,
                                                    const RegimeScenario& scenario);

struct HypervolumeResult {
    double area = 0.0;
    std::size_t excluded = 0;  // points outside the reference box
};

HypervolumeResult hypervolume(std::span<const ObjectivePoint> points, const HypervolumeRef& ref);

inline double hypervolume_2d(std::span<const ObjectivePoint> points, const HypervolumeRef& ref) {
    return hypervolume(points, ref).area;
}

struct ScenarioRatio {
    std::string label;
    double robust_hv = 0.0;
    double front_hv = 0.0;
    double ratio = 0.0;
};

struct HvRatioReport {
    double worst = 0.0;
    std::string worst_label;
    std::vector<ScenarioRatio> per_scenario;
};

/// For each front (matched to its scenario by label) the ratio
/// HV(robust set under that scenario) / HV(front); the worst is the minimum.
HvRatioReport worst_case_hv_ratio(std::span<const Portfolio> robust, std::span<const double> mu,
                                  const UncertaintySet& scenarios, std::span<const ParetoFront> fronts,
                                  const HypervolumeRef& ref);

struct RegretRow {
    double ret = 0.0;
    double regret = 0.0;
    std::string argmax_scenario;
    Vector variances;  // per scenario, spec order
    Vector gaps;       // variance - benchmark variance, per scenario
};

struct RegretReport {
    std::vector<std::string> labels;
    std::vector<RegretRow> rows;
    std::vector<std::size_t> below;  // rows with gap < 0, per scenario
    std::vector<std::size_t> above;  // rows with gap >= 0, per scenario
};

RegretReport regret_report(std::span<const Portfolio> portfolios, std::span<const double> mu,
                           const RegretSpec& spec);

}  // namespace regretfolio
