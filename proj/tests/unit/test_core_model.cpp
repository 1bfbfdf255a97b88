#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "../support/oracles.hpp"
#include "regretfolio/core_model.hpp"
#include "regretfolio/error.hpp"

using namespace regretfolio;
using doctest::Approx;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("assemble_covariance") {
    SUBCASE("identity") {
        CHECK(assemble_covariance(Vector{1, 1}, Matrix::identity(2)) == Matrix::identity(2));
    }
    SUBCASE("elementwise product") {
        Matrix cov = assemble_covariance(Vector{0.2, 0.1}, Matrix{{1, 0.5}, {0.5, 1}});
        CHECK(cov(0, 0) == Approx(0.04));
        CHECK(cov(0, 1) == Approx(0.01));
        CHECK(cov(1, 0) == Approx(0.01));
        CHECK(cov(1, 1) == Approx(0.01));
    }
    SUBCASE("indefinite") {
        CHECK(code_of([] { assemble_covariance(Vector{1, 1}, Matrix{{1, 1.5}, {1.5, 1}}); }) ==
              ErrorCode::NotPositiveSemidefinite);
    }
    SUBCASE("errors") {
        CHECK(code_of([] { assemble_covariance(Vector{1, 1, 1}, Matrix::identity(2)); }) ==
              ErrorCode::DimensionMismatch);
        CHECK(code_of([] { assemble_covariance(Vector{1, 1}, Matrix{{1, 0.2}, {0.3, 1}}); }) ==
              ErrorCode::NonSymmetric);
        CHECK(code_of([] { assemble_covariance(Vector{1, 1}, Matrix{{0.9, 0.2}, {0.2, 1}}); }) ==
              ErrorCode::ValidationError);
        CHECK(code_of([] { assemble_covariance(Vector{1, 0}, Matrix::identity(2)); }) ==
              ErrorCode::ValidationError);
    }
    SUBCASE("output is exactly symmetric") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 20; ++t) {
            const std::size_t n = 2 + t % 6;
            Matrix cov = assemble_covariance(oracle::uniform_vector(n, 0.01, 0.3, rng),
                                             oracle::random_correlation(n, rng));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) CHECK(cov(i, j) == cov(j, i));
        }
    }
}

TEST_CASE("portfolio_return") {
    const Vector mu{0.1, 0.05};
    CHECK(portfolio_return(Vector{1, 0}, mu) == Approx(0.1));
    CHECK(portfolio_return(Vector{0.5, 0.5}, mu) == Approx(0.075));
    CHECK(portfolio_return(Vector{0.2, 0.8}, mu) == Approx(0.06));
    CHECK(code_of([&] { portfolio_return(Vector{1, 0, 0}, mu); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("portfolio_variance") {
    CHECK(portfolio_variance(Portfolio::vertex(4, 0), Matrix::identity(4)) == Approx(1.0));
    CHECK(portfolio_variance(Portfolio::uniform(5), Matrix::identity(5)) == Approx(0.2));
    CHECK(portfolio_variance(Vector{0.2, 0.8}, Matrix::diagonal(Vector{0.04, 0.01})) == Approx(0.008));
    CHECK(code_of([] { portfolio_variance(Vector{1, 0}, Matrix::identity(3)); }) ==
          ErrorCode::DimensionMismatch);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto sc = oracle::random_scenario("s", 6, rng);
        Vector x = oracle::uniform_vector(6, 0.0, 1.0, rng);
        double s = 0;
        for (double v : x) s += v;
        for (double& v : x) v /= s;
        CHECK(portfolio_variance(x, sc.cov) >= -1e-10);
    }
}

TEST_CASE("portfolio construction") {
    CHECK(Portfolio(Vector{0.5, 0.5 + 5e-9}).size() == 2);
    CHECK(Portfolio(Vector{1.0 + 5e-11, -5e-11})[1] == 0.0);
    CHECK(code_of([] { Portfolio(Vector{0.6, 0.6}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { Portfolio(Vector{1.1, -0.1}); }) == ErrorCode::InvalidArgument);
    CHECK(on_simplex(Vector{0.25, 0.75}));
    CHECK_FALSE(on_simplex(Vector{0.25, 0.7}));
}

TEST_CASE("dominates") {
    CHECK(dominates({0.10, 0.02}, {0.05, 0.03}));
    CHECK_FALSE(dominates({0.10, 0.02}, {0.10, 0.02}));
    CHECK_FALSE(dominates({0.10, 0.03}, {0.05, 0.02}));

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> pick(0, 4);
    std::vector<ObjectivePoint> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({pick(rng) * 0.01, pick(rng) * 0.01});
    for (const auto& p : pts) {
        CHECK_FALSE(dominates(p, p));
        for (const auto& q : pts)
            for (const auto& r : pts)
                if (dominates(p, q) && dominates(q, r)) CHECK(dominates(p, r));
    }
}

TEST_CASE("nondominated_filter") {
    auto a = nondominated_filter(std::vector<ObjectivePoint>{{0.1, 0.02}, {0.05, 0.03}});
    REQUIRE(a.size() == 1);
    CHECK(a[0].ret == 0.1);
    CHECK(nondominated_filter(std::vector<ObjectivePoint>{{0.1, 0.02}, {0.05, 0.01}}).size() == 2);

    SUBCASE("matches the pairwise oracle on random points") {
        std::mt19937_64 rng(21);
        std::uniform_int_distribution<int> coarse(0, 30);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<ObjectivePoint> pts;
            for (int i = 0; i < 100; ++i) pts.push_back({coarse(rng) * 0.001, coarse(rng) * 0.001});
            std::vector<std::size_t> expected;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                bool keep = true;
                for (std::size_t j = 0; j < pts.size() && keep; ++j) {
                    if (dominates(pts[j], pts[i])) keep = false;
                    if (j < i && pts[j].ret == pts[i].ret && pts[j].risk == pts[i].risk) keep = false;
                }
                if (keep) expected.push_back(i);
            }
            CHECK(nondominated_indices(pts) == expected);

            auto once = nondominated_filter(pts);
            auto twice = nondominated_filter(once);
            REQUIRE(once.size() == twice.size());
            for (std::size_t i = 0; i < once.size(); ++i) {
                CHECK(once[i].ret == twice[i].ret);
                CHECK(once[i].risk == twice[i].risk);
            }
        }
    }

    SUBCASE("payload and order preserved") {
        struct Item {
            int id;
            ObjectivePoint p;
        };
        std::vector<Item> items{{0, {0.05, 0.01}}, {1, {0.04, 0.02}}, {2, {0.08, 0.03}}, {3, {0.08, 0.03}}};
        auto kept = nondominated_filter(items, [](const Item& it) { return it.p; });
        REQUIRE(kept.size() == 2);
        CHECK(kept[0].id == 0);
        CHECK(kept[1].id == 2);
    }
}

TEST_CASE("uncertainty set") {
    auto s1 = make_scenario("C", Vector{0.1, 0.2}, Matrix::identity(2));
    auto s2 = make_scenario("G", Vector{0.1, 0.2}, Matrix{{1, 0.3}, {0.3, 1}});
    UncertaintySet u({s1, s2});
    CHECK(u.labels() == std::vector<std::string>{"C", "G"});
    REQUIRE(u.find("G") != nullptr);
    CHECK(u.find("G")->cov(0, 1) == Approx(0.006));
    CHECK(u.find("X") == nullptr);
    CHECK(code_of([&] { UncertaintySet({s1, s1}); }) == ErrorCode::ValidationError);
    auto s3 = make_scenario("N", Vector{0.1, 0.2, 0.3}, Matrix::identity(3));
    CHECK(code_of([&] { UncertaintySet({s1, s3}); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([] { UncertaintySet(std::vector<RegimeScenario>{}); }) == ErrorCode::ValidationError);

    auto back = scenario_from_covariance("x", s2.cov);
    CHECK(back.stds[1] == Approx(0.2));
    CHECK(back.corr(0, 1) == Approx(0.3));
}
