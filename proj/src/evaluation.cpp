#include "regretfolio/evaluation.hpp"

#include <algorithm>
#include <limits>

#include "regretfolio/error.hpp"

namespace regretfolio {

HypervolumeRef default_reference(const UncertaintySet& scenarios) {
    double top = 0.0;
    for (const auto& s : scenarios.scenarios()) top = std::max(top, max_variance_over_simplex(s.cov).value);
    return {0.0, 1.1 * top};
}

std::vector<ObjectivePoint> evaluate_under_scenario(std::span<const Portfolio> portfolios,
                                                    std::span<const double> mu,
                                                    const RegimeScenario& scenario) {
    std::vector<ObjectivePoint> out;
    out.reserve(portfolios.size());
    for (const Portfolio& p : portfolios)
        out.push_back({portfolio_return(p, mu), portfolio_variance(p, scenario.cov)});
    return out;
}

HypervolumeResult hypervolume(std::span<const ObjectivePoint> points, const HypervolumeRef& ref) {
    HypervolumeResult res;
    std::vector<ObjectivePoint> inside;
    for (const auto& p : points) {
        if (p.ret >= ref.ret_ref && p.risk <= ref.var_ref)
            inside.push_back(p);
        else
            ++res.excluded;
    }
    std::vector<ObjectivePoint> front = nondominated_filter(inside);
    std::sort(front.begin(), front.end(),
              [](const ObjectivePoint& a, const ObjectivePoint& b) { return a.ret > b.ret; });
    // Descending return means ascending risk along the nondominated set; each
    // point owns the slab between its return and the next lower one.
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next = i + 1 < front.size() ? front[i + 1].ret : ref.ret_ref;
        res.area += (front[i].ret - next) * (ref.var_ref - front[i].risk);
    }
    return res;
}

HvRatioReport worst_case_hv_ratio(std::span<const Portfolio> robust, std::span<const double> mu,
                                  const UncertaintySet& scenarios, std::span<const ParetoFront> fronts,
                                  const HypervolumeRef& ref) {
    if (fronts.empty()) throw Error(ErrorCode::InvalidArgument, "no scenario fronts to compare against");
    HvRatioReport report;
    report.worst = std::numeric_limits<double>::infinity();
    for (const ParetoFront& front : fronts) {
        const RegimeScenario* sc = scenarios.find(front.label);
        if (!sc) throw Error(ErrorCode::KeyMismatch, "front for unknown scenario '" + front.label + "'");
        std::vector<ObjectivePoint> front_pts;
        for (const auto& p : front.points) front_pts.push_back(p.objective());
        ScenarioRatio r;
        r.label = front.label;
        r.front_hv = hypervolume_2d(front_pts, ref);
        r.robust_hv = hypervolume_2d(evaluate_under_scenario(robust, mu, *sc), ref);
        if (r.front_hv > 0.0)
            r.ratio = r.robust_hv / r.front_hv;
        else if (r.robust_hv == 0.0)
            r.ratio = 1.0;
        else
            throw Error(ErrorCode::UndefinedRatio,
                        "scenario '" + front.label + "' front has zero hypervolume but the robust set does not");
        if (r.ratio < report.worst) {
            report.worst = r.ratio;
            report.worst_label = r.label;
        }
        report.per_scenario.push_back(std::move(r));
    }
    return report;
}

RegretReport regret_report(std::span<const Portfolio> portfolios, std::span<const double> mu,
                           const RegretSpec& spec) {
    RegretReport rep;
    rep.labels = spec.scenarios.labels();
    rep.below.assign(spec.size(), 0);
    rep.above.assign(spec.size(), 0);
    for (const Portfolio& p : portfolios) {
        RegretEvaluation eval = regret_risk(p, spec);
        RegretRow row;
        row.ret = portfolio_return(p, mu);
        row.regret = eval.value;
        row.argmax_scenario = eval.per_scenario.at(eval.argmax).label;
        for (std::size_t s = 0; s < spec.size(); ++s) {
            const double v = eval.per_scenario[s].variance;
            const double gap = v - spec.reference[s];
            row.variances.push_back(v);
            row.gaps.push_back(gap);
            ++(gap < 0.0 ? rep.below[s] : rep.above[s]);
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace regretfolio
