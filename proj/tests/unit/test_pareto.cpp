#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "regretfolio/error.hpp"
#include "regretfolio/pareto.hpp"

using namespace regretfolio;
using doctest::Approx;

namespace {

const Vector kMu{0.1, 0.05};
const Matrix kCov = Matrix::diagonal(Vector{0.04, 0.01});

}  // namespace

TEST_CASE("return_grid") {
    auto g = return_grid(kMu, kCov, 5);
    REQUIRE(g.size() == 5);
    const double want[] = {0.06, 0.07, 0.08, 0.09, 0.10};
    for (std::size_t i = 0; i < 5; ++i) CHECK(g[i] == Approx(want[i]).epsilon(1e-9));

    CHECK(return_grid(Vector{0.07, 0.07, 0.07}, Matrix::identity(3), 10).size() == 1);

    auto two = return_grid(kMu, kCov, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Approx(0.06));
    CHECK(two[1] == Approx(0.1));

    CHECK_THROWS_AS(return_grid(kMu, kCov, 1), Error);
}

TEST_CASE("min_variance_with_return_floor") {
    SUBCASE("slack floor gives the minimum-variance portfolio") {
        auto r = min_variance_with_return_floor(kMu, kCov, 0.03);
        CHECK(r.x[0] == Approx(0.2));
        CHECK(r.objective_value == Approx(0.008));
    }
    SUBCASE("floor at the best asset") {
        auto r = min_variance_with_return_floor(kMu, kCov, 0.1);
        CHECK(r.x[0] == Approx(1.0));
    }
    SUBCASE("binding floor") {
        auto r = min_variance_with_return_floor(kMu, kCov, 0.08);
        CHECK(r.x[0] == Approx(0.6));
        CHECK(r.objective_value == Approx(0.016));
    }
    SUBCASE("infeasible floor") {
        try {
            min_variance_with_return_floor(kMu, kCov, 0.11);
            FAIL("expected InfeasibleReturn");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InfeasibleReturn);
        }
    }
    SUBCASE("random instances against the line oracle") {
        std::mt19937_64 rng(41);
        for (int t = 0; t < 15; ++t) {
            auto sc = oracle::random_scenario("s", 3, rng);
            Vector mu = oracle::uniform_vector(3, 0.02, 0.1, rng);
            const double top = std::max({mu[0], mu[1], mu[2]});
            const double r = top - 0.4 * (top - std::min({mu[0], mu[1], mu[2]}));
            auto got = min_variance_with_return_floor(mu, sc.cov, r);
            auto ref = oracle::eps_constraint(mu, sc.cov, r);
            CHECK(portfolio_return(got.x, mu) >= r - 1e-9);
            CHECK(std::abs(got.objective_value - ref.value) <= 1e-4);
            CHECK(got.objective_value <= ref.value + 1e-10);
        }
    }
}

TEST_CASE("trace_scenario_front on the identity") {
    auto sc = scenario_from_covariance("I", Matrix::identity(3));
    auto f = trace_scenario_front(Vector{0.02, 0.05, 0.09}, sc, 20);
    REQUIRE(f.points.size() >= 2);
    for (std::size_t i = 1; i < f.points.size(); ++i) {
        CHECK(f.points[i].ret > f.points[i - 1].ret);
        CHECK(f.points[i].risk > f.points[i - 1].risk);
    }
    CHECK(f.points.back().x[2] == Approx(1.0));
}

TEST_CASE("two-asset front is the closed-form parabola") {
    auto sc = scenario_from_covariance("D", kCov);
    auto f = trace_scenario_front(kMu, sc, 30);
    REQUIRE(f.points.size() == 30);
    for (const auto& p : f.points) {
        const double x1 = (p.ret - 0.05) / 0.05;
        CHECK(std::abs(p.risk - (0.05 * x1 * x1 - 0.02 * x1 + 0.01)) <= 1e-5);
        CHECK(p.ret >= p.target_r - 1e-6);
    }
}

TEST_CASE("three-asset fronts against the grid front") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 5; ++t) {
        auto sc = oracle::random_scenario("s", 3, rng);
        Vector mu = oracle::uniform_vector(3, 0.02, 0.1, rng);
        auto f = trace_scenario_front(mu, sc, 40);
        REQUIRE(f.points.size() >= 2);

        std::vector<ObjectivePoint> grid;
        oracle::for_each_grid_point(3, 0.005, [&](const Vector& x) {
            grid.push_back({portfolio_return(x, mu), portfolio_variance(x, sc.cov)});
        });
        auto grid_front = nondominated_filter(grid);

        // Every traced point lies within 2e-3 of the grid front.
        double worst = 0.0;
        for (const auto& p : f.points) {
            double best = oracle::kInf;
            for (const auto& q : grid_front)
                best = std::min(best, std::max(std::abs(p.ret - q.ret), std::abs(p.risk - q.risk)));
            worst = std::max(worst, best);
        }
        CHECK(worst <= 2e-3);

        // Invariants: ascending, nondominated, simplex, floor, convex.
        for (std::size_t i = 0; i < f.points.size(); ++i) {
            const auto& p = f.points[i];
            CHECK(on_simplex(p.x.weights()));
            CHECK(p.ret >= p.target_r - 1e-6);
            for (std::size_t j = 0; j < f.points.size(); ++j)
                if (i != j) CHECK_FALSE(dominates(f.points[j].objective(), p.objective()));
            if (i > 0) {
                CHECK(p.ret >= f.points[i - 1].ret);
                CHECK(p.risk >= f.points[i - 1].risk);
            }
        }
        auto grid_r = return_grid(mu, sc.cov, 40);
        Vector v;
        for (double r : grid_r) v.push_back(min_variance_with_return_floor(mu, sc.cov, r).objective_value);
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            CHECK(v[i] <= v[i + 1] + 1e-12);
            CHECK(v[i] <= 0.5 * (v[i - 1] + v[i + 1]) + 1e-8);
        }
    }
}

TEST_CASE("uniform_grid") {
    auto g = uniform_grid(0.0, 1.0, 3);
    REQUIRE(g.size() == 3);
    CHECK(g[1] == Approx(0.5));
    CHECK(uniform_grid(0.5, 0.5, 7).size() == 1);
}
