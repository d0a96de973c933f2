#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qangle/search.hpp"

using namespace qangle;

namespace {
const GridSpec gaussian_grid(-16, 16, 4096);
}

TEST(Sweep, DilationLeavesProductUnchanged) {
    SweepOptions opts;
    opts.scale_grid = true;
    const auto res = sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "sigma", {0.5, 1.0, 2.0, 4.0}, {}, opts);
    ASSERT_EQ(res.rows.size(), 4u);
    for (const auto& row : res.rows) {
        ASSERT_TRUE(row.report) << row.error;
        EXPECT_NEAR(row.report->product_over_hbar, res.rows[1].report->product_over_hbar, 1e-4);
        EXPECT_NEAR(row.report->product_over_hbar, oracle::tail_z(), 2e-4);
    }
    EXPECT_NEAR(res.rows[0].report->delta_x * 2, res.rows[1].report->delta_x, 1e-12);
}

TEST(Sweep, BoostLeavesWidthUnchanged) {
    const auto res = sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "p0", {0.0, 1.0, 2.0});
    for (const auto& row : res.rows) {
        ASSERT_TRUE(row.report);
        EXPECT_NEAR(row.report->delta_x, res.rows[0].report->delta_x, 1e-8);
        EXPECT_NEAR(row.report->delta_p, 0.5, 1e-8);
    }
}

TEST(Sweep, EmptyAndFailingPoints) {
    EXPECT_TRUE(sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "sigma", {}).rows.empty());
    const auto res = sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "sigma", {1.0, 0.001, 1.5});
    EXPECT_TRUE(res.rows[0].report);
    EXPECT_FALSE(res.rows[1].report);
    EXPECT_FALSE(res.rows[1].error.empty());
    EXPECT_TRUE(res.rows[2].report);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    SweepOptions one, four;
    four.threads = 4;
    const std::vector<double> xs{-2, -1, 0, 1, 2, 3};
    const auto a = sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "x0", xs, {}, one);
    const auto b = sweep(FamilySpec::gaussian(0, 1), gaussian_grid, "x0", xs, {}, four);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_EQ(a.rows[i].report->product_over_hbar, b.rows[i].report->product_over_hbar);
    }
}

TEST(Minimize, GaussianWidthIsFlat) {
    SearchOptions opts;
    opts.free_params = {"sigma"};
    opts.init = {3.0};
    opts.budget = 200;
    opts.seed = 1;
    const auto res = minimize_product(FamilySpec::gaussian(0, 1), GridSpec(-32, 32, 4096), opts);
    EXPECT_NEAR(res.best_product_over_hbar, 1.4100, 2e-3);
    EXPECT_LE(res.evaluations_used, 200);
    EXPECT_TRUE(res.findings.empty());
}

TEST(Minimize, BudgetOneReturnsInit) {
    SearchOptions opts;
    opts.free_params = {"sigma"};
    opts.init = {1.5};
    opts.budget = 1;
    const auto res = minimize_product(FamilySpec::gaussian(0, 1), gaussian_grid, opts);
    EXPECT_EQ(res.evaluations_used, 1);
    ASSERT_EQ(res.best_params.size(), 1u);
    EXPECT_EQ(res.best_params[0], 1.5);
    EXPECT_EQ(res.stop_reason, "budget");
}

TEST(Minimize, MixtureStaysAboveBound) {
    SearchOptions opts;
    opts.free_params = {"c0.x0", "c1.x0", "c1.sigma", "c1.re", "c1.im"};
    opts.init = {-2.0, 2.0, 1.0, 1.0, 0.0};
    opts.budget = 500;
    opts.seed = 11;
    const auto family = FamilySpec::superposition({{-2, 1, 0, 0, {1, 0}}, {2, 1, 0, 0, {1, 0}}});
    const auto res = minimize_product(family, GridSpec(-32, 32, 4096), opts);
    EXPECT_GE(res.best_product_over_hbar, 1.0 - 1e-4);
    EXPECT_TRUE(res.findings.empty());
    EXPECT_LE(res.evaluations_used, 500);
    for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_LE(res.trace[i], res.trace[i - 1]);

    const auto again = minimize_product(family, GridSpec(-32, 32, 4096), opts);
    EXPECT_EQ(again.best_params, res.best_params);
    EXPECT_EQ(again.trace, res.trace);
}

TEST(Minimize, RejectsBadInit) {
    SearchOptions opts;
    opts.free_params = {"sigma"};
    opts.init = {};
    EXPECT_THROW((void)minimize_product(FamilySpec::gaussian(0, 1), gaussian_grid, opts), InitError);
    opts.init = {0.001};
    EXPECT_THROW((void)minimize_product(FamilySpec::gaussian(0, 1), gaussian_grid, opts), InitError);
    opts.free_params = {};
    EXPECT_THROW((void)minimize_product(FamilySpec::gaussian(0, 1), gaussian_grid, opts), InitError);
}
