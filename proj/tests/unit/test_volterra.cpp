#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "core/volterra.hpp"

using namespace cdpa;
using Catch::Approx;

TEST_CASE("pole at the origin degenerates to pure delays") {
    LaguerreConfig cfg;
    cfg.num_basis = 3;
    cfg.pole = 0.0;
    std::vector<double> x = {1.0, 0.0, 0.0, 0.0, 0.0};
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    REQUIRE(bank.rows() == 5);
    REQUIRE(bank.cols() == 3);
    for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 5; ++t)
            CHECK(bank(t, s) == Approx(t == s ? 1.0 : 0.0).margin(1e-12));
}

TEST_CASE("first stage impulse response is the one-pole decay") {
    LaguerreConfig cfg;
    cfg.num_basis = 1;
    cfg.pole = 0.5;
    std::vector<double> x(6, 0.0);
    x[0] = 1.0;
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    const double gain = std::sqrt(1.0 - 0.25);
    for (int t = 0; t < 6; ++t)
        CHECK(bank(t, 0) == Approx(gain * std::pow(0.5, t)).margin(1e-12));
}

TEST_CASE("impulse responses are orthonormal") {
    LaguerreConfig cfg;
    cfg.num_basis = 5;
    cfg.pole = 0.994;
    std::vector<double> x(100000, 0.0);
    x[0] = 1.0;
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    const Eigen::MatrixXd gram = bank.transpose() * bank;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(gram(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-3));
}

TEST_CASE("pole magnitude must stay below one") {
    LaguerreConfig cfg;
    cfg.pole = 1.0;
    std::vector<double> x(4, 0.0);
    CHECK_THROWS_AS(laguerre_bank(x, cfg), std::invalid_argument);
}

TEST_CASE("regressor tuple enumeration") {
    LaguerreConfig cfg;
    cfg.num_basis = 2;
    cfg.max_order = 2;

    SECTION("symmetric kernels collapse permutations") {
        const auto tuples = kernel_index_tuples(cfg);
        REQUIRE(tuples.size() == 5); // (0) (1) (00) (01) (11)
        CHECK(tuples[0] == std::vector<int>{0});
        CHECK(tuples[1] == std::vector<int>{1});
        CHECK(tuples[2] == std::vector<int>{0, 0});
        CHECK(tuples[3] == std::vector<int>{0, 1});
        CHECK(tuples[4] == std::vector<int>{1, 1});
    }
    SECTION("ordered tuples keep both orders") {
        cfg.symmetric_kernels = false;
        CHECK(kernel_index_tuples(cfg).size() == 6);
    }
    SECTION("default configuration has 55 parameters") {
        LaguerreConfig def;
        CHECK(kernel_index_tuples(def).size() == 55); // 5 + 15 + 35
    }
}

namespace {

std::vector<double> random_input(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& v : x) v = dist(gen);
    return x;
}

} // namespace

TEST_CASE("fit recovers a constructed linear relation") {
    LaguerreConfig cfg;
    cfg.num_basis = 3;
    cfg.pole = 0.7;
    cfg.max_order = 2;

    const std::vector<double> x = random_input(400, 31);
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < y.size(); ++t)
        y[t] = 2.5 * bank(static_cast<Eigen::Index>(t), 0);

    const VolterraModel model = fit_volterra_laguerre(x, y, cfg);
    REQUIRE(model.parameter_count == 9); // 3 + 6
    CHECK_FALSE(model.rank_deficient);
    CHECK(model.coefficients[0] == Approx(2.5).margin(1e-8));
    for (int i = 1; i < model.parameter_count; ++i)
        CHECK(std::abs(model.coefficients[i]) < 1e-6);
    CHECK(model.residual_sse < 1e-12);

    const std::vector<double> pred = volterra_predict(model, x);
    for (std::size_t t = 0; t < y.size(); ++t)
        CHECK(pred[t] == Approx(y[t]).margin(1e-8));
}

TEST_CASE("fit captures a quadratic nonlinearity") {
    LaguerreConfig cfg;
    cfg.num_basis = 2;
    cfg.pole = 0.5;
    cfg.max_order = 2;

    const std::vector<double> x = random_input(500, 57);
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        const auto r = static_cast<Eigen::Index>(t);
        y[t] = 0.8 * bank(r, 1) - 1.2 * bank(r, 0) * bank(r, 1);
    }

    const VolterraModel model = fit_volterra_laguerre(x, y, cfg);
    CHECK(model.residual_sse < 1e-12);
    // tuple order: (0) (1) (00) (01) (11)
    CHECK(model.coefficients[1] == Approx(0.8).margin(1e-8));
    CHECK(model.coefficients[3] == Approx(-1.2).margin(1e-8));
}

TEST_CASE("zero target gives zero coefficients") {
    LaguerreConfig cfg;
    cfg.num_basis = 2;
    cfg.pole = 0.3;
    cfg.max_order = 2;
    const std::vector<double> x = random_input(200, 5);
    const std::vector<double> y(x.size(), 0.0);
    const VolterraModel model = fit_volterra_laguerre(x, y, cfg);
    CHECK(model.coefficients.cwiseAbs().maxCoeff() < 1e-12);
    const std::vector<double> pred = volterra_predict(model, x);
    for (double v : pred) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("ordered tuples produce a rank-deficient fit that still works") {
    LaguerreConfig cfg;
    cfg.num_basis = 2;
    cfg.pole = 0.5;
    cfg.max_order = 2;
    cfg.symmetric_kernels = false; // x0*x1 and x1*x0 duplicate a column

    const std::vector<double> x = random_input(300, 42);
    const Eigen::MatrixXd bank = laguerre_bank(x, cfg);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        const auto r = static_cast<Eigen::Index>(t);
        y[t] = bank(r, 0) + 0.5 * bank(r, 0) * bank(r, 1);
    }

    const VolterraModel model = fit_volterra_laguerre(x, y, cfg);
    CHECK(model.rank_deficient);
    const std::vector<double> pred = volterra_predict(model, x);
    for (std::size_t t = 0; t < y.size(); ++t)
        CHECK(pred[t] == Approx(y[t]).margin(1e-8));
}

TEST_CASE("fit never loses to the zero model on its own training data") {
    LaguerreConfig cfg;
    cfg.num_basis = 3;
    cfg.pole = 0.6;
    cfg.max_order = 2;
    const std::vector<double> x = random_input(300, 77);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < y.size(); ++t)
        y[t] = std::tanh(1.7 * x[t]) + (t > 0 ? 0.3 * x[t - 1] : 0.0);

    const VolterraModel model = fit_volterra_laguerre(x, y, cfg);
    double zero_sse = 0.0;
    for (double v : y) zero_sse += 0.5 * v * v;
    CHECK(model.residual_sse <= zero_sse);

    const std::vector<double> pred = volterra_predict(model, x);
    double recomputed = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double d = y[t] - pred[t];
        recomputed += 0.5 * d * d;
    }
    CHECK(recomputed == Approx(model.residual_sse).margin(1e-9));
}

TEST_CASE("too few samples for the parameter count is rejected") {
    LaguerreConfig cfg; // 55 parameters
    const std::vector<double> x = random_input(40, 3);
    CHECK_THROWS_AS(fit_volterra_laguerre(x, x, cfg), std::invalid_argument);
}
