#include "core/volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace cdpa {

namespace {

void check_config(const LaguerreConfig& cfg) {
    if (cfg.num_basis < 1)
        throw std::invalid_argument("laguerre: num_basis must be >= 1");
    if (!(std::abs(cfg.pole) < 1.0))
        throw std::invalid_argument("laguerre: |pole| must be < 1");
    if (cfg.max_order < 1)
        throw std::invalid_argument("laguerre: max_order must be >= 1");
}

} // namespace

Eigen::MatrixXd laguerre_bank(const std::vector<double>& x,
                              const LaguerreConfig& cfg) {
    check_config(cfg);
    const auto n = static_cast<Eigen::Index>(x.size());
    const int k = cfg.num_basis;
    const double lam = cfg.pole;
    const double gain = std::sqrt(1.0 - lam * lam);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, k);
    // y_0[t] = lam y_0[t-1] + gain x[t]
    // y_s[t] = lam y_s[t-1] + y_{s-1}[t-1] - lam y_{s-1}[t]
    double prev0 = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        prev0 = lam * prev0 + gain * x[static_cast<std::size_t>(t)];
        out(t, 0) = prev0;
    }
    for (int s = 1; s < k; ++s) {
        double prev_out = 0.0;
        double prev_in = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) {
            const double cur_in = out(t, s - 1);
            prev_out = lam * prev_out + prev_in - lam * cur_in;
            out(t, s) = prev_out;
            prev_in = cur_in;
        }
    }
    return out;
}

std::vector<std::vector<int>> kernel_index_tuples(const LaguerreConfig& cfg) {
    check_config(cfg);
    std::vector<std::vector<int>> tuples;
    std::vector<int> current;

    // Depth-first enumeration of index tuples of each degree; symmetric
    // kernels restrict to non-decreasing tuples (multisets).
    auto extend = [&](auto&& self, int degree_left, int min_index) -> void {
        if (degree_left == 0) {
            tuples.push_back(current);
            return;
        }
        const int start = cfg.symmetric_kernels ? min_index : 0;
        for (int i = start; i < cfg.num_basis; ++i) {
            current.push_back(i);
            self(self, degree_left - 1, i);
            current.pop_back();
        }
    };
    for (int degree = 1; degree <= cfg.max_order; ++degree)
        extend(extend, degree, 0);
    return tuples;
}

namespace {

Eigen::MatrixXd regressor_matrix(const Eigen::MatrixXd& bank,
                                 const std::vector<std::vector<int>>& tuples) {
    Eigen::MatrixXd phi(bank.rows(), static_cast<Eigen::Index>(tuples.size()));
    for (std::size_t c = 0; c < tuples.size(); ++c) {
        Eigen::VectorXd col = Eigen::VectorXd::Ones(bank.rows());
        for (int idx : tuples[c]) col = col.cwiseProduct(bank.col(idx));
        phi.col(static_cast<Eigen::Index>(c)) = col;
    }
    return phi;
}

} // namespace

VolterraModel fit_volterra_laguerre(const std::vector<double>& input,
                                    const std::vector<double>& target,
                                    const LaguerreConfig& cfg) {
    check_config(cfg);
    if (input.size() != target.size())
        throw std::invalid_argument("volterra fit: trace length mismatch");

    const auto tuples = kernel_index_tuples(cfg);
    if (input.size() < tuples.size())
        throw std::invalid_argument(
            "volterra fit: need at least as many samples as parameters");

    const Eigen::MatrixXd bank = laguerre_bank(input, cfg);
    const Eigen::MatrixXd phi = regressor_matrix(bank, tuples);
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(target.data(),
                                          static_cast<Eigen::Index>(target.size()));

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(phi);
    VolterraModel model;
    model.config = cfg;
    model.parameter_count = static_cast<int>(tuples.size());
    model.coefficients = cod.solve(y);
    model.rank_deficient = cod.rank() < phi.cols();
    model.residual_sse = 0.5 * (y - phi * model.coefficients).squaredNorm();
    return model;
}

std::vector<double> volterra_predict(const VolterraModel& model,
                                     const std::vector<double>& input) {
    const auto tuples = kernel_index_tuples(model.config);
    if (model.coefficients.size() != static_cast<Eigen::Index>(tuples.size()))
        throw std::invalid_argument("volterra predict: coefficient count mismatch");

    const Eigen::MatrixXd bank = laguerre_bank(input, model.config);
    const Eigen::MatrixXd phi = regressor_matrix(bank, tuples);
    const Eigen::VectorXd y = phi * model.coefficients;
    return {y.data(), y.data() + y.size()};
}

} // namespace cdpa
