#include "regretfolio/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "regretfolio/error.hpp"
#include "regretfolio/kernels.hpp"

namespace regretfolio {

std::string_view to_string(RegretMode mode) noexcept {
    return mode == RegretMode::Absolute ? "absolute" : "signed";
}

RegretSpec::RegretSpec(UncertaintySet scenario_set, Vector refs, RegretMode regret_mode)
    : scenarios(std::move(scenario_set)), reference(std::move(refs)), mode(regret_mode) {
    if (reference.size() != scenarios.size())
        throw Error(ErrorCode::KeyMismatch, "one reference value per scenario required");
    for (double c : reference)
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite reference value");
}

RegretSpec RegretSpec::from_benchmarks(const UncertaintySet& scenario_set, const BenchmarkSet& set,
                                       RegretMode regret_mode) {
    Vector refs;
    std::vector<Portfolio> portfolios;
    for (const auto& s : scenario_set.scenarios()) {
        const BenchmarkEntry* e = set.find(s.label);
        if (!e) throw Error(ErrorCode::KeyMismatch, "no benchmark for scenario '" + s.label + "'");
        refs.push_back(e->variance);
        portfolios.push_back(e->portfolio);
    }
    RegretSpec spec(scenario_set, std::move(refs), regret_mode);
    spec.benchmarks = std::move(portfolios);
    return spec;
}

void RobustConfig::validate() const {
    solver.validate();
    if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    if (!(step0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "step0 must be > 0");
}

RegretEvaluation regret_risk(std::span<const double> x, const RegretSpec& spec) {
    if (spec.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty regret specification");
    if (x.size() != spec.scenarios.dimension())
        throw Error(ErrorCode::DimensionMismatch, "portfolio size differs from scenario dimension");
    RegretEvaluation out;
    out.value = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < spec.size(); ++s) {
        const RegimeScenario& sc = spec.scenarios[s];
        const double v = kernels::quad_form(sc.cov, x);
        const double dev = v - spec.reference[s];
        const double contrib = spec.mode == RegretMode::Absolute ? std::abs(dev) : dev;
        out.per_scenario.push_back({sc.label, v, contrib});
        if (contrib > out.value) {
            out.value = contrib;
            out.argmax = s;
        }
    }
    return out;
}

double generic_regret(const std::map<std::string, double>& values,
                      const std::map<std::string, double>& references) {
    if (values.empty()) throw Error(ErrorCode::InvalidArgument, "no scenarios to compare");
    if (values.size() != references.size())
        throw Error(ErrorCode::KeyMismatch, "value and reference scenario sets differ");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [label, v] : values) {
        auto it = references.find(label);
        if (it == references.end())
            throw Error(ErrorCode::KeyMismatch, "no reference for scenario '" + label + "'");
        worst = std::max(worst, v - it->second);
    }
    return worst;
}

namespace {

void project_onto_top_face(std::span<const double> v, std::span<const double> mu, std::span<double> out) {
    const double top = *std::max_element(mu.begin(), mu.end());
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] >= top - 1e-15) face.push_back(i);
    Vector sub(face.size()), proj(face.size());
    for (std::size_t a = 0; a < face.size(); ++a) sub[a] = v[face[a]];
    project_to_simplex(sub, proj);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < face.size(); ++a) out[face[a]] = proj[a];
}

}  // namespace

void project_to_feasible(std::span<const double> v, std::span<const double> mu, double r,
                         std::span<double> out) {
    const std::size_t n = v.size();
    if (mu.size() != n || out.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "projection operand sizes differ");
    project_to_simplex(v, out);
    if (kernels::dot(mu, out) >= r) return;

    const double top = *std::max_element(mu.begin(), mu.end());
    if (r > top + 1e-12) throw Error(ErrorCode::InfeasibleReturn, "return floor above the best asset");
    if (r >= top - 1e-12) {
        project_onto_top_face(v, mu, out);
        return;
    }

    // The projection is P_simplex(v + lambda mu) for the multiplier lambda >= 0
    // at which the return constraint binds; mu'P(v + lambda mu) is continuous,
    // piecewise linear and nondecreasing in lambda.
    Vector shifted(n);
    auto excess = [&](double lambda) {
        for (std::size_t i = 0; i < n; ++i) shifted[i] = v[i] + lambda * mu[i];
        project_to_simplex(shifted, out);
        return kernels::dot(mu, out) - r;
    };

    double lo = 0.0;
    double f_lo = excess(lo);
    double hi = 1.0;
    double f_hi = excess(hi);
    for (int k = 0; k < 200 && f_hi < 0.0; ++k) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = excess(hi);
    }
    if (f_hi < 0.0) {
        project_onto_top_face(v, mu, out);
        return;
    }

    // Illinois regula falsi; hi always stays on the feasible side.
    double w_lo = f_lo;
    double w_hi = f_hi;
    int side = 0;
    for (int it = 0; it < 100; ++it) {
        if (f_hi <= 1e-15 || hi - lo <= 1e-15 * hi) break;
        double m = (lo * w_hi - hi * w_lo) / (w_hi - w_lo);
        if (!(m > lo && m < hi)) m = 0.5 * (lo + hi);
        const double f_m = excess(m);
        if (f_m >= 0.0) {
            hi = m;
            f_hi = w_hi = f_m;
            if (side == 1) w_lo *= 0.5;
            side = 1;
        } else {
            lo = m;
            f_lo = w_lo = f_m;
            if (side == -1) w_hi *= 0.5;
            side = -1;
        }
    }
    excess(hi);
}

namespace {

struct Candidate {
    Vector x;
    double regret = std::numeric_limits<double>::infinity();
    double ret = -std::numeric_limits<double>::infinity();
};

// Lower regret, then higher return, then lexicographically smaller weights.
bool better(const Candidate& a, const Candidate& b) {
    if (a.regret != b.regret) return a.regret < b.regret;
    if (a.ret != b.ret) return a.ret > b.ret;
    return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
}

class RegretDescent {
public:
    RegretDescent(std::span<const double> mu, const RegretSpec& spec, double floor, const RobustConfig& cfg)
        : mu_(mu), spec_(spec), floor_(floor), cfg_(cfg), n_(mu.size()), x_(n_), g_(n_), trial_(n_) {}

    // Runs one start and folds every visited point into `best`.
    void run(std::span<const double> start, Candidate& best) {
        project_to_feasible(start, mu_, floor_, x_);
        std::size_t active = 0;
        double dev = 0.0;
        double value = evaluate(x_, active, dev);
        offer(value, best);
        for (int t = 1; t <= cfg_.iterations; ++t) {
            if (value <= 0.0 && spec_.mode == RegretMode::Absolute) break;
            const double sign = spec_.mode == RegretMode::Signed ? 1.0 : (dev > 0.0 ? 1.0 : -1.0);
            kernels::matvec(spec_.scenarios[active].cov, x_, g_);
            // Only the component tangent to the simplex moves the iterate.
            double mean = 0.0;
            for (double gi : g_) mean += gi;
            mean /= static_cast<double>(n_);
            double norm2 = 0.0;
            for (double& gi : g_) {
                gi = sign * (gi - mean);
                norm2 += gi * gi;
            }
            if (!(norm2 > 0.0)) break;
            const double step = cfg_.step0 / std::sqrt(static_cast<double>(t)) / std::sqrt(norm2);
            for (std::size_t i = 0; i < n_; ++i) trial_[i] = x_[i] - step * g_[i];
            project_to_feasible(trial_, mu_, floor_, x_);
            value = evaluate(x_, active, dev);
            offer(value, best);
        }
    }

private:
    double evaluate(std::span<const double> x, std::size_t& active, double& dev) const {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < spec_.size(); ++s) {
            const double d = kernels::quad_form(spec_.scenarios[s].cov, x) - spec_.reference[s];
            const double c = spec_.mode == RegretMode::Absolute ? std::abs(d) : d;
            if (c > worst) {
                worst = c;
                active = s;
                dev = d;
            }
        }
        return worst;
    }

    void offer(double value, Candidate& best) const {
        const double ret = kernels::dot(mu_, x_);
        if (value > best.regret) return;
        Candidate c{x_, value, ret};
        if (better(c, best)) best = std::move(c);
    }

    std::span<const double> mu_;
    const RegretSpec& spec_;
    double floor_;
    const RobustConfig& cfg_;
    std::size_t n_;
    Vector x_, g_, trial_;
};

RobustFrontPoint to_front_point(std::span<const double> mu, const RegretSpec& spec, const Candidate& c,
                                double floor) {
    RobustFrontPoint p;
    p.x = Portfolio(c.x);
    p.ret = portfolio_return(p.x, mu);
    RegretEvaluation eval = regret_risk(p.x, spec);
    p.regret = eval.value;
    p.per_scenario = std::move(eval.per_scenario);
    p.argmax_scenario = p.per_scenario.at(eval.argmax).label;
    p.target_r = floor;
    return p;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

void check_floor(std::span<const double> mu, const RegretSpec& spec, double r) {
    if (spec.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty regret specification");
    if (mu.size() != spec.scenarios.dimension())
        throw Error(ErrorCode::DimensionMismatch, "returns and scenarios differ in size");
    const double top = *std::max_element(mu.begin(), mu.end());
    if (r > top + 1e-12)
        throw Error(ErrorCode::InfeasibleReturn,
                    "return floor " + std::to_string(r) + " exceeds the best asset return");
}

}  // namespace

RobustFrontPoint solve_robust_point(std::span<const double> mu, const RegretSpec& spec, double r,
                                    const RobustConfig& config, std::uint64_t stream,
                                    std::span<const Portfolio> floor_starts) {
    config.validate();
    check_floor(mu, spec, r);
    const std::size_t n = mu.size();

    RegretDescent descent(mu, spec, r, config);
    Candidate best;
    for (const Portfolio& b : spec.benchmarks) descent.run(b.weights(), best);
    for (const Portfolio& f : floor_starts) descent.run(f.weights(), best);

    std::mt19937_64 rng = stream_rng(config.solver.seed, stream);
    std::exponential_distribution<double> expo(1.0);
    Vector draw(n);
    for (std::size_t k = 0; k < config.multistart; ++k) {
        double total = 0.0;
        for (double& d : draw) total += (d = expo(rng));
        for (double& d : draw) d /= total;
        descent.run(draw, best);
    }
    if (best.x.empty()) {
        // No iterations requested and no starts: fall back to the projected
        // uniform portfolio.
        Vector uniform(n, 1.0 / static_cast<double>(n));
        RobustConfig none = config;
        none.iterations = 0;
        RegretDescent(mu, spec, r, none).run(uniform, best);
    }
    return to_front_point(mu, spec, best, r);
}

RobustFrontPoint solve_robust_point(std::span<const double> mu, const RegretSpec& spec, double r,
                                    const RobustConfig& config, std::uint64_t stream) {
    check_floor(mu, spec, r);
    std::vector<Portfolio> floors;
    for (const auto& s : spec.scenarios.scenarios())
        floors.push_back(min_variance_with_return_floor(mu, s.cov, r, config.solver).x);
    return solve_robust_point(mu, spec, r, config, stream, floors);
}

Vector robust_return_grid(std::span<const double> mu, const UncertaintySet& scenarios,
                          std::size_t n_points, const SolverConfig& config) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : scenarios.scenarios())
        lo = std::min(lo, portfolio_return(min_quadratic_over_simplex(s.cov, {}, config).x, mu));
    const double hi = *std::max_element(mu.begin(), mu.end());
    return uniform_grid(std::min(lo, hi), hi, n_points);
}

std::vector<RobustFrontPoint> trace_robust_front(std::span<const double> mu, const RegretSpec& spec,
                                                 std::size_t n_points, const RobustConfig& config) {
    config.validate();
    const Vector grid = robust_return_grid(mu, spec.scenarios, n_points, config.solver);

    // Scenario return-floor optima along the grid, warm-started point to point.
    std::vector<std::vector<Portfolio>> floors(grid.size());
    for (const auto& s : spec.scenarios.scenarios()) {
        Vector warm;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            SolveReport rep = min_variance_with_return_floor(mu, s.cov, grid[k], config.solver, warm);
            warm.assign(rep.x.weights().begin(), rep.x.weights().end());
            floors[k].push_back(std::move(rep.x));
        }
    }

    std::vector<RobustFrontPoint> raw;
    raw.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        raw.push_back(solve_robust_point(mu, spec, grid[k], config, k, floors[k]));

    auto front = nondominated_filter(raw, [](const RobustFrontPoint& p) { return p.objective(); });
    std::stable_sort(front.begin(), front.end(),
                     [](const RobustFrontPoint& a, const RobustFrontPoint& b) { return a.ret < b.ret; });
    return front;
}

}  // namespace regretfolio
