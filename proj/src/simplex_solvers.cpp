#include "regretfolio/simplex_solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "regretfolio/error.hpp"
#include "regretfolio/kernels.hpp"

namespace regretfolio {

void SolverConfig::validate() const {
    if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
    if (!(backtrack_factor > 1.0))
        throw Error(ErrorCode::InvalidArgument, "backtrack_factor must be > 1");
}

std::string_view to_string(SignMode mode) noexcept {
    return mode == SignMode::Standard ? "standard" : "paper-literal";
}

void project_to_simplex(std::span<const double> v, std::span<double> out) {
    const std::size_t n = v.size();
    if (out.size() != n) throw Error(ErrorCode::DimensionMismatch, "projection buffer size");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot project an empty vector");
    double sorted[64];
    std::vector<double> heap;
    double* u = sorted;
    if (n > 64) {
        heap.resize(n);
        u = heap.data();
    }
    std::copy(v.begin(), v.end(), u);
    std::sort(u, u + n, std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
}

Portfolio project_to_simplex(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite projection input");
    Vector out(v.size());
    project_to_simplex(v, out);
    return Portfolio(std::move(out));
}

namespace detail {

double curvature_bound(const Matrix& q) { return std::max(max_eigenvalue(q), 1e-300); }

namespace {

struct Quadratic {
    const Matrix& q;
    double weight;
    std::span<const double> linear;

    double value(std::span<const double> x) const {
        double v = weight * kernels::quad_form(q, x);
        if (!linear.empty()) v += kernels::dot(linear, x);
        return v;
    }

    void gradient(std::span<const double> x, std::span<double> g) const {
        kernels::matvec(q, x, g);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 2.0 * weight;
        if (!linear.empty()) kernels::axpy(1.0, linear, g);
    }
};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

bool active_set_solve(const Matrix& q, double quad_weight, std::span<const double> linear,
                      std::span<const double> floor_mu, double r, std::vector<std::size_t> support,
                      Vector& x) {
    const std::size_t n = q.rows();
    const bool has_floor = !floor_mu.empty();
    std::vector<char> in(n, 0);
    for (std::size_t i : support) in[i] = 1;

    Vector g(n);
    const int max_rounds = static_cast<int>(3 * n + 10);
    for (int round = 0; round < max_rounds; ++round) {
        support.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (in[i]) support.push_back(i);
        const auto m = static_cast<Eigen::Index>(support.size());
        if (m == 0) return false;
        const Eigen::Index k = m + (has_floor ? 2 : 1);

        // Stationarity on the support plus the active equality rows.
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k, k);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index b = 0; b < m; ++b) kkt(a, b) = 2.0 * quad_weight * q(support[a], support[b]);
            kkt(a, m) = -1.0;
            kkt(m, a) = 1.0;
            if (has_floor) {
                kkt(a, m + 1) = -floor_mu[support[a]];
                kkt(m + 1, a) = floor_mu[support[a]];
            }
            rhs(a) = linear.empty() ? 0.0 : -linear[support[a]];
        }
        rhs(m) = 1.0;
        if (has_floor) rhs(m + 1) = r;
        const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
        const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
        if (!sol.allFinite() || (kkt * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-9 * scale) return false;

        // Primal feasibility: drop the most negative weight.
        Eigen::Index worst = -1;
        for (Eigen::Index a = 0; a < m; ++a)
            if (sol(a) < -1e-13 && (worst < 0 || sol(a) < sol(worst))) worst = a;
        if (worst >= 0) {
            in[support[worst]] = 0;
            continue;
        }
        const double nu = sol(m);
        const double gamma = has_floor ? sol(m + 1) : 0.0;
        if (has_floor && gamma < -1e-10 * std::max(1.0, std::abs(nu))) return false;

        Vector cand(n, 0.0);
        for (Eigen::Index a = 0; a < m; ++a) cand[support[a]] = std::max(sol(a), 0.0);
        kernels::matvec(q, cand, g);
        // Dual feasibility: add the most violated excluded coordinate.
        double gmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = 2.0 * quad_weight * g[i] + (linear.empty() ? 0.0 : linear[i]);
            gmax = std::max(gmax, std::abs(g[i]));
        }
        const double tol = 1e-10 * std::max({1.0, gmax, std::abs(nu)});
        std::size_t add = n;
        double most = -tol;
        for (std::size_t i = 0; i < n; ++i) {
            if (in[i]) continue;
            const double reduced = g[i] - nu - (has_floor ? gamma * floor_mu[i] : 0.0);
            if (reduced < most) {
                most = reduced;
                add = i;
            }
        }
        if (add < n) {
            in[add] = 1;
            continue;
        }
        x = std::move(cand);
        return true;
    }
    return false;
}

namespace {

std::vector<std::size_t> support_of(std::span<const double> x, double threshold = 1e-9) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > threshold) s.push_back(i);
    return s;
}

// Accepts the certified face optimum when it is no worse than x.
bool try_certify(const Quadratic& f, Vector& x, double& fx) {
    Vector cand;
    if (!active_set_solve(f.q, f.weight, f.linear, {}, 0.0, support_of(x), cand)) return false;
    const double total = std::accumulate(cand.begin(), cand.end(), 0.0);
    for (double& c : cand) c /= total;
    const double fc = f.value(cand);
    if (fc <= fx) {
        x = std::move(cand);
        fx = fc;
    }
    return fc <= fx + 1e-12 * std::max(1.0, std::abs(fx));
}

}  // namespace

SolveReport minimize_quadratic(const Matrix& q, double quad_weight, std::span<const double> linear,
                               const SolverConfig& config, std::span<const double> start,
                               double curvature, bool keep_trace) {
    config.validate();
    const std::size_t n = q.rows();
    if (!q.square() || n == 0) throw Error(ErrorCode::DimensionMismatch, "quadratic term must be square");
    if (!linear.empty() && linear.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "linear term length mismatch");
    if (!start.empty() && start.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "start point length mismatch");

    const Quadratic f{q, quad_weight, linear};
    if (!(curvature > 0.0)) curvature = curvature_bound(q);
    double lip = std::max(2.0 * quad_weight * curvature, 1e-12);

    Vector x(n), x_prev(n), y(n), z(n), g(n), step(n), probe(n);
    if (start.empty())
        std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(n));
    else
        project_to_simplex(start, x);
    double fx = f.value(x);
    y = x;
    double t = 1.0;

    SolveReport report;
    if (keep_trace) report.objective_trace.push_back(fx);
    bool converged = false;
    bool certified = false;
    int next_certify = 8;
    int iter = 0;
    // Monotone accelerated projected gradient: the candidate z is accepted
    // only when it does not increase the objective; momentum restarts
    // otherwise, so the accepted sequence is nonincreasing.
    for (iter = 1; iter <= config.max_iters; ++iter) {
        f.gradient(y, g);
        const double fy = f.value(y);
        double fz = 0.0;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < n; ++i) step[i] = y[i] - g[i] / lip;
            project_to_simplex(step, z);
            fz = f.value(z);
            double model = fy;
            double dist2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = z[i] - y[i];
                model += g[i] * d;
                dist2 += d * d;
            }
            model += 0.5 * lip * dist2;
            if (fz <= model + 1e-15 * std::max(1.0, std::abs(model))) break;
            lip *= config.backtrack_factor;
        }

        if (fz <= fx) {
            x_prev = x;
            x = z;
            fx = fz;
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            for (std::size_t i = 0; i < n; ++i)
                y[i] = x[i] + ((t - 1.0) / t_next) * (x[i] - x_prev[i]);
            t = t_next;
        } else {
            y = x;
            t = 1.0;
        }

        // Stationarity via the gradient mapping at the accepted iterate.
        f.gradient(x, g);
        for (std::size_t i = 0; i < n; ++i) step[i] = x[i] - g[i] / lip;
        project_to_simplex(step, probe);
        const bool stationary = max_abs_diff(probe, x) <= config.tol;
        if (stationary || iter == config.max_iters) {
            const double fp = f.value(probe);
            if (fp < fx) {
                x = probe;
                fx = fp;
            }
        }
        if (stationary) {
            if (keep_trace) report.objective_trace.push_back(fx);
            converged = true;
            break;
        }
        // Once the support settles, an exact KKT solve on it usually
        // finishes the job.
        if (iter == next_certify) {
            next_certify *= 2;
            if (try_certify(f, x, fx)) {
                if (keep_trace) report.objective_trace.push_back(fx);
                certified = true;
                break;
            }
        }
        if (keep_trace) report.objective_trace.push_back(fx);
    }

    if (!certified && try_certify(f, x, fx)) {
        if (keep_trace) report.objective_trace.push_back(fx);
        certified = true;
    }
    converged = converged || certified;

    report.x = Portfolio(x);
    report.objective_value = fx;
    report.iterations = std::min(iter, config.max_iters);
    report.converged = converged;
    report.status = converged ? "converged" : "NotConverged: iteration limit reached";
    return report;
}

// Minimum variance over the face spanned by the highest-return assets.
SolveReport min_variance_binding_floor(std::span<const double> mu, const Matrix& cov, double r,
                                       const SolverConfig& config, double curvature,
                                       std::span<const double> start) {
    const auto best = static_cast<std::size_t>(std::max_element(mu.begin(), mu.end()) - mu.begin());
    auto seeded = [&](std::span<const double> from) {
        std::vector<std::size_t> s = support_of(from);
        if (std::find(s.begin(), s.end(), best) == s.end()) s.push_back(best);
        std::sort(s.begin(), s.end());
        return s;
    };
    auto exact = [&](Vector x, int steps) {
        SolveReport rep;
        rep.objective_value = portfolio_variance(x, cov);
        rep.x = Portfolio(std::move(x));
        rep.iterations = steps;
        rep.converged = true;
        rep.status = "converged";
        return rep;
    };

    Vector x;
    if (!start.empty() && active_set_solve(cov, 1.0, {}, mu, r, seeded(start), x)) return exact(std::move(x), 0);

    Vector neg_mu(mu.begin(), mu.end());
    for (double& m : neg_mu) m = -m;
    // Subproblem  min x'Sx - lambda mu'x ; its return is nondecreasing in
    // lambda. Each iterate's support seeds an exact attempt.
    auto solve = [&](double lambda, std::span<const double> from) {
        return minimize_quadratic(cov, 1.0 / lambda, neg_mu, config, from, curvature);
    };
    double lo = 0.0;
    double hi = 1.0;
    SolveReport hi_sol = solve(hi, start);
    int steps = 1;
    while (portfolio_return(hi_sol.x, mu) < r && steps < 200) {
        if (active_set_solve(cov, 1.0, {}, mu, r, seeded(hi_sol.x.weights()), x)) return exact(std::move(x), steps);
        lo = hi;
        hi *= 2.0;
        hi_sol = solve(hi, hi_sol.x.weights());
        ++steps;
    }
    if (portfolio_return(hi_sol.x, mu) < r) return best_return_face(mu, cov, config);
    for (; steps < 400; ++steps) {
        if (active_set_solve(cov, 1.0, {}, mu, r, seeded(hi_sol.x.weights()), x)) return exact(std::move(x), steps);
        if (portfolio_return(hi_sol.x, mu) - r <= 1e-12 || hi - lo <= 1e-15 * hi) break;
        const double mid = 0.5 * (lo + hi);
        SolveReport mid_sol = solve(mid, hi_sol.x.weights());
        if (portfolio_return(mid_sol.x, mu) < r) {
            lo = mid;
        } else {
            hi = mid;
            hi_sol = std::move(mid_sol);
        }
    }
    hi_sol.iterations = steps;
    return hi_sol;
}

SolveReport best_return_face(std::span<const double> mu, const Matrix& cov, const SolverConfig& config) {
    const double top = *std::max_element(mu.begin(), mu.end());
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] >= top - 1e-15) face.push_back(i);
    const std::size_t n = mu.size();
    if (face.size() == 1) {
        SolveReport r;
        r.x = Portfolio::vertex(n, face.front());
        r.objective_value = cov(face.front(), face.front());
        r.converged = true;
        r.status = "converged";
        return r;
    }
    Matrix sub(face.size(), face.size());
    for (std::size_t a = 0; a < face.size(); ++a)
        for (std::size_t b = 0; b < face.size(); ++b) sub(a, b) = cov(face[a], face[b]);
    SolveReport inner = detail::minimize_quadratic(sub, 1.0, {}, config, {});
    Vector w(n, 0.0);
    for (std::size_t a = 0; a < face.size(); ++a) w[face[a]] = inner.x[a];
    inner.x = Portfolio(std::move(w));
    inner.objective_trace.clear();
    return inner;
}

}  // namespace detail

SolveReport min_quadratic_over_simplex(const Matrix& cov, std::span<const double> linear,
                                       const SolverConfig& config, std::span<const double> start) {
    return detail::minimize_quadratic(cov, 1.0, linear, config, start, 0.0, true);
}

namespace {

void check_problem(std::span<const double> mu, const Matrix& cov) {
    if (!cov.square() || cov.rows() != mu.size())
        throw Error(ErrorCode::DimensionMismatch, "returns and covariance differ in size");
    if (mu.empty()) throw Error(ErrorCode::InvalidArgument, "empty asset universe");
}

Vector negated(std::span<const double> v) {
    Vector out(v.begin(), v.end());
    for (double& x : out) x = -x;
    return out;
}

}  // namespace

SolveReport max_return_with_variance_cap(std::span<const double> mu, const Matrix& cov, double cap,
                                         const SolverConfig& config) {
    check_problem(mu, cov);
    if (!(cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "variance cap must be positive");

    SolveReport top = detail::best_return_face(mu, cov, config);
    if (portfolio_variance(top.x, cov) <= cap) {
        top.objective_value = portfolio_return(top.x, mu);
        top.status = "converged: cap slack at the best-return portfolio";
        return top;
    }

    const double curvature = detail::curvature_bound(cov);
    SolveReport min_var = detail::minimize_quadratic(cov, 1.0, {}, config, {}, curvature);
    if (cap < min_var.objective_value - 1e-12)
        throw Error(ErrorCode::InfeasibleCap, "variance cap " + std::to_string(cap) +
                                                  " is below the minimum variance " +
                                                  std::to_string(min_var.objective_value));

    // The capped optimum lies on the efficient frontier, whose variance
    // increases with the return floor: bisect the floor.
    double lo = portfolio_return(min_var.x, mu);
    double hi = portfolio_return(top.x, mu);
    SolveReport lo_sol = min_var;
    int steps = 0;
    for (; steps < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++steps) {
        const double mid = 0.5 * (lo + hi);
        SolveReport mid_sol =
            detail::min_variance_binding_floor(mu, cov, mid, config, curvature, lo_sol.x.weights());
        if (portfolio_variance(mid_sol.x, cov) > cap) {
            hi = mid;
        } else {
            lo = mid;
            lo_sol = std::move(mid_sol);
        }
    }
    SolveReport hi_sol = std::move(lo_sol);
    SolveReport out;
    out.x = hi_sol.x;
    out.objective_value = portfolio_return(out.x, mu);
    out.iterations = steps;
    const double residual = std::abs(portfolio_variance(out.x, cov) - cap);
    out.converged = residual <= 1e-6;
    out.status = out.converged ? "converged: cap binding"
                               : "NotConverged: cap residual " + std::to_string(residual);
    return out;
}

SolveReport weighted_sum_optimum(std::span<const double> mu, const Matrix& cov, double lambda,
                                 SignMode mode, const SolverConfig& config) {
    check_problem(mu, cov);
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
    const Vector linear = mode == SignMode::Standard ? negated(mu) : Vector(mu.begin(), mu.end());
    SolveReport r = detail::minimize_quadratic(cov, lambda, linear, config, {});
    r.status = std::string(to_string(mode)) + " mode; " + r.status;
    return r;
}

SolveReport max_sharpe_dinkelbach(std::span<const double> mu, const Matrix& cov,
                                  const SolverConfig& config) {
    check_problem(mu, cov);
    const std::size_t n = mu.size();
    if (*std::max_element(mu.begin(), mu.end()) <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "Sharpe ratio needs at least one positive return");

    auto ratio_of = [&](const Portfolio& x) {
        const double v = portfolio_variance(x, cov);
        if (!(v > 1e-300)) throw Error(ErrorCode::DegenerateRisk, "zero-variance portfolio encountered");
        return portfolio_return(x, mu) / v;
    };

    Portfolio x = Portfolio::uniform(n);
    double q = ratio_of(x);
    if (q <= 0.0) {
        // Uniform start has nonpositive return; the best positive vertex does not.
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (mu[i] <= 0.0) continue;
            Portfolio v = Portfolio::vertex(n, i);
            const double r = ratio_of(v);
            if (r > best) {
                best = r;
                x = v;
            }
        }
        q = best;
    }

    const Vector neg_mu = negated(mu);
    const double curvature = detail::curvature_bound(cov);
    SolveReport out;
    bool converged = false;
    int k = 0;
    for (; k < 200; ++k) {
        SolveReport sub = detail::minimize_quadratic(cov, q, neg_mu, config, x.weights(), curvature);
        const double gain = -sub.objective_value;  // max mu'x - q x'Sx
        const double q_next = ratio_of(sub.x);
        if (q_next > q) {
            x = sub.x;
            q = q_next;
        }
        if (gain <= 1e-9) {
            converged = true;
            break;
        }
    }
    out.x = x;
    out.objective_value = q;
    out.iterations = k + 1;
    out.converged = converged;
    out.status = converged ? "converged" : "NotConverged: Dinkelbach iteration limit";
    return out;
}

VertexMax max_variance_over_simplex(const Matrix& cov) {
    if (!cov.square() || cov.rows() == 0)
        throw Error(ErrorCode::DimensionMismatch, "covariance must be square and nonempty");
    VertexMax best{cov(0, 0), 0};
    for (std::size_t i = 1; i < cov.rows(); ++i)
        if (cov(i, i) > best.value) best = {cov(i, i), i};
    return best;
}

}  // namespace regretfolio
