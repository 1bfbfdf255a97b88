#pragma once

// Independent reference solvers for tests. Nothing here calls the library's
// solvers; only the plain evaluators (return, variance) are shared.
//
// Line oracles: every simplex line with one coordinate fixed on a grid of
// step h (three families for n = 3, the single edge for n = 2) is optimized
// exactly in closed form, then the search zooms in around the incumbent. The
// error is second order in the step for smooth optima and constraint
// boundaries are hit exactly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "regretfolio/core_model.hpp"
#include "regretfolio/matrix.hpp"

namespace oracle {

using regretfolio::Matrix;
using regretfolio::Vector;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Line {
    Vector p;
    Vector d;
    double tmax = 1.0;
    Vector at(double t) const {
        Vector x(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) x[i] = std::max(p[i] + t * d[i], 0.0);
        return x;
    }
};

inline std::vector<Line> simplex_lines(std::size_t n, double h) {
    std::vector<Line> lines;
    if (n == 2) {
        lines.push_back({{0.0, 1.0}, {1.0, -1.0}, 1.0});
        return lines;
    }
    const int steps = static_cast<int>(std::lround(1.0 / h));
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t j = (k + 1) % 3, l = (k + 2) % 3;
        for (int i = 0; i <= steps; ++i) {
            const double a = std::min(1.0, i * h);
            Line line{Vector(3, 0.0), Vector(3, 0.0), 1.0 - a};
            line.p[k] = a;
            line.p[l] = 1.0 - a;
            line.d[j] = 1.0;
            line.d[l] = -1.0;
            lines.push_back(line);
        }
    }
    return lines;
}

/// Lines with the fixed coordinate within +-width of center[k], step h.
inline std::vector<Line> simplex_lines_near(const Vector& center, double h, double width) {
    std::vector<Line> lines;
    if (center.size() == 2) return simplex_lines(2, h);
    const int m = static_cast<int>(std::lround(width / h));
    for (std::size_t k = 0; k < 3; ++k) {
        const std::size_t j = (k + 1) % 3, l = (k + 2) % 3;
        for (int i = -m; i <= m; ++i) {
            const double a = center[k] + i * h;
            if (a < 0.0 || a > 1.0) continue;
            Line line{Vector(3, 0.0), Vector(3, 0.0), 1.0 - a};
            line.p[k] = a;
            line.p[l] = 1.0 - a;
            line.d[j] = 1.0;
            line.d[l] = -1.0;
            lines.push_back(line);
        }
    }
    return lines;
}

// ret(t) = a0 + a1 t ; var(t) = q0 + q1 t + q2 t^2 along a line.
struct LineModel {
    double a0, a1, q0, q1, q2;
    LineModel(const Line& line, const Vector& mu, const Matrix& cov) {
        const std::size_t n = mu.size();
        a0 = a1 = q0 = q1 = q2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a0 += mu[i] * line.p[i];
            a1 += mu[i] * line.d[i];
            for (std::size_t k = 0; k < n; ++k) {
                q0 += line.p[i] * cov(i, k) * line.p[k];
                q1 += 2.0 * line.p[i] * cov(i, k) * line.d[k];
                q2 += line.d[i] * cov(i, k) * line.d[k];
            }
        }
    }
    double ret(double t) const { return a0 + a1 * t; }
    double var(double t) const { return q0 + t * (q1 + t * q2); }
};

// argmin of c0 + c1 t + c2 t^2 over [lo, hi] (c2 >= 0).
inline double argmin_quadratic(double c1, double c2, double lo, double hi) {
    if (c2 > 0.0) return std::clamp(-c1 / (2.0 * c2), lo, hi);
    return c1 >= 0.0 ? lo : hi;
}

struct Result {
    double value = kInf;
    Vector x;
};

/// Coarse pass over all lines of step h, then two zoomed passes (h/10,
/// h/100) around the incumbent. `on_line` returns the line's best value
/// (smaller is better) and point.
template <typename OnLine>
Result line_search(std::size_t n, double h, OnLine on_line) {
    Result best;
    auto scan = [&](const std::vector<Line>& lines) {
        for (const auto& line : lines) {
            Result r = on_line(line);
            if (r.value < best.value) best = std::move(r);
        }
    };
    scan(simplex_lines(n, h));
    for (double fine : {h / 10.0, h / 100.0}) {
        if (best.x.empty()) break;
        scan(simplex_lines_near(best.x, fine, 10.0 * fine));
    }
    return best;
}

inline Result min_variance(const Vector& mu, const Matrix& cov, double h = 0.005) {
    return line_search(mu.size(), h, [&](const Line& line) -> Result {
        LineModel m(line, mu, cov);
        const double t = argmin_quadratic(m.q1, m.q2, 0.0, line.tmax);
        return {m.var(t), line.at(t)};
    });
}

/// min lambda * var - ret.
inline Result weighted_sum(const Vector& mu, const Matrix& cov, double lambda, double h = 0.005) {
    return line_search(mu.size(), h, [&](const Line& line) -> Result {
        LineModel m(line, mu, cov);
        const double t = argmin_quadratic(lambda * m.q1 - m.a1, lambda * m.q2, 0.0, line.tmax);
        return {lambda * m.var(t) - m.ret(t), line.at(t)};
    });
}

/// min var subject to ret >= r.
inline Result eps_constraint(const Vector& mu, const Matrix& cov, double r, double h = 0.005) {
    return line_search(mu.size(), h, [&](const Line& line) -> Result {
        LineModel m(line, mu, cov);
        double lo = 0.0, hi = line.tmax;
        if (std::abs(m.a1) < 1e-300) {
            if (m.a0 < r) return {};
        } else if (m.a1 > 0) {
            lo = std::max(lo, (r - m.a0) / m.a1);
        } else {
            hi = std::min(hi, (r - m.a0) / m.a1);
        }
        if (lo > hi) return {};
        const double t = argmin_quadratic(m.q1, m.q2, lo, hi);
        return {m.var(t), line.at(t)};
    });
}

/// max ret subject to var <= cap; value is the return (-inf when infeasible).
inline Result bounded_risk(const Vector& mu, const Matrix& cov, double cap, double h = 0.005) {
    Result best = line_search(mu.size(), h, [&](const Line& line) -> Result {
        LineModel m(line, mu, cov);
        double lo = 0.0, hi = line.tmax;
        if (m.q2 > 0.0) {
            const double disc = m.q1 * m.q1 - 4.0 * m.q2 * (m.q0 - cap);
            if (disc < 0.0) return {};
            const double s = std::sqrt(disc);
            lo = std::max(lo, (-m.q1 - s) / (2.0 * m.q2));
            hi = std::min(hi, (-m.q1 + s) / (2.0 * m.q2));
        } else if (m.var(0.0) > cap && m.var(line.tmax) > cap) {
            return {};
        }
        if (lo > hi) return {};
        Result r;
        for (double t : {lo, hi})
            if (m.var(t) <= cap * (1.0 + 1e-12) && -m.ret(t) < r.value) r = {-m.ret(t), line.at(t)};
        return r;
    });
    best.value = -best.value;
    return best;
}

/// max ret / var (variance, not standard deviation).
inline Result sharpe(const Vector& mu, const Matrix& cov, double h = 0.005) {
    Result best = line_search(mu.size(), h, [&](const Line& line) -> Result {
        LineModel m(line, mu, cov);
        std::vector<double> ts{0.0, line.tmax};
        // d/dt (a0 + a1 t)/(q0 + q1 t + q2 t^2) = 0
        const double A = -m.a1 * m.q2, B = -2.0 * m.a0 * m.q2, C = m.a1 * m.q0 - m.a0 * m.q1;
        if (std::abs(A) > 1e-300) {
            const double disc = B * B - 4.0 * A * C;
            if (disc >= 0.0) {
                ts.push_back((-B - std::sqrt(disc)) / (2.0 * A));
                ts.push_back((-B + std::sqrt(disc)) / (2.0 * A));
            }
        } else if (std::abs(B) > 1e-300) {
            ts.push_back(-C / B);
        }
        Result r;
        for (double t : ts) {
            if (t < 0.0 || t > line.tmax || !(m.var(t) > 0.0)) continue;
            const double v = -m.ret(t) / m.var(t);
            if (v < r.value) r = {v, line.at(t)};
        }
        return r;
    });
    best.value = -best.value;
    return best;
}

/// Calls f(x) for every grid point of the simplex with step h (n = 2 or 3).
inline void for_each_grid_point(std::size_t n, double h, const std::function<void(const Vector&)>& f) {
    const int steps = static_cast<int>(std::lround(1.0 / h));
    if (n == 2) {
        for (int i = 0; i <= steps; ++i) {
            const double a = static_cast<double>(i) / steps;
            f({a, 1.0 - a});
        }
        return;
    }
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j) {
            const double a = static_cast<double>(i) / steps, b = static_cast<double>(j) / steps;
            f({a, b, std::max(0.0, 1.0 - a - b)});
        }
}

/// Dense grid minimum of an objective over { x in simplex : mu'x >= r }.
inline Result grid_min(const Vector& mu, double r, const std::function<double(const Vector&)>& objective,
                       double h = 0.005) {
    Result best;
    for_each_grid_point(mu.size(), h, [&](const Vector& x) {
        if (regretfolio::portfolio_return(x, mu) < r - 1e-12) return;
        const double v = objective(x);
        if (v < best.value) best = {v, x};
    });
    return best;
}

/// Sort-free simplex projection by bisection on the threshold.
inline Vector simplex_projection_bisect(const Vector& v) {
    double lo = *std::min_element(v.begin(), v.end()) - 1.0, hi = *std::max_element(v.begin(), v.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double s = 0.0;
        for (double x : v) s += std::max(x - mid, 0.0);
        (s > 1.0 ? lo : hi) = mid;
    }
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - 0.5 * (lo + hi), 0.0);
    return out;
}

/// Dykstra's alternating projections onto the simplex and {mu'x >= r}.
inline Vector dykstra_feasible(const Vector& v, const Vector& mu, double r, int iterations = 20000) {
    const std::size_t n = v.size();
    Vector x = v, p(n, 0.0), q(n, 0.0), y(n), tmp(n);
    double mm = 0.0;
    for (double m : mu) mm += m * m;
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + p[i];
        y = simplex_projection_bisect(tmp);
        for (std::size_t i = 0; i < n; ++i) p[i] = tmp[i] - y[i];
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + q[i];
        double ret = 0.0;
        for (std::size_t i = 0; i < n; ++i) ret += mu[i] * tmp[i];
        Vector next = tmp;
        if (ret < r)
            for (std::size_t i = 0; i < n; ++i) next[i] += (r - ret) / mm * mu[i];
        for (std::size_t i = 0; i < n; ++i) q[i] = tmp[i] - next[i];
        x = next;
    }
    return simplex_projection_bisect(x);
}

// --- random instances --------------------------------------------------

/// Random correlation matrix from a Gram matrix with a ridge.
inline Matrix random_correlation(std::size_t n, std::mt19937_64& rng, double ridge = 0.2) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = g(rng);
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = i == j ? ridge : 0.0;
            for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
            c(i, j) = s;
        }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = i == j ? 1.0 : c(i, j) / std::sqrt(c(i, i) * c(j, j));
    return out;
}

inline Vector uniform_vector(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (double& x : v) x = u(rng);
    return v;
}

/// Asset 0 is kept low-volatility so a 0.03 variance cap is always feasible.
inline regretfolio::RegimeScenario random_scenario(const std::string& label, std::size_t n,
                                                   std::mt19937_64& rng) {
    Vector stds = uniform_vector(n, 0.05, 0.25, rng);
    stds[0] = std::uniform_real_distribution<double>(0.05, 0.15)(rng);
    return regretfolio::make_scenario(label, stds, random_correlation(n, rng));
}

}  // namespace oracle
