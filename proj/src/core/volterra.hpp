#pragma once

#include <vector>

#include <Eigen/Dense>

namespace cdpa {

/// Truncated Volterra model on a discrete Laguerre filter basis.
struct LaguerreConfig {
    int num_basis = 5;             ///< number of Laguerre stages K
    double pole = 0.994;           ///< Laguerre pole, |pole| < 1
    int max_order = 3;             ///< highest polynomial degree P
    bool symmetric_kernels = true; ///< collapse permuted index tuples
};

/// Outputs of the K-stage Laguerre bank, one column per stage.  Stage 0 is
/// sqrt(1 - pole^2) / (1 - pole q^-1); each later stage adds the all-pass
/// factor (q^-1 - pole) / (1 - pole q^-1).  Zero initial conditions.
Eigen::MatrixXd laguerre_bank(const std::vector<double>& x,
                              const LaguerreConfig& cfg);

/// Index tuples (one per regressor) for all monomials of degree 1..P over the
/// K stage outputs; non-decreasing tuples when symmetric, ordered otherwise.
std::vector<std::vector<int>> kernel_index_tuples(const LaguerreConfig& cfg);

struct VolterraModel {
    LaguerreConfig config;
    Eigen::VectorXd coefficients;       ///< one per index tuple
    double residual_sse = 0.0;          ///< 0.5 * ||y - prediction||^2
    bool rank_deficient = false;        ///< minimum-norm solution was taken
    int parameter_count = 0;
};

/// Least-squares fit of the polynomial coefficients by complete orthogonal
/// decomposition; rank-deficient regressor matrices get the minimum-norm
/// solution and set the warning flag.
VolterraModel fit_volterra_laguerre(const std::vector<double>& input,
                                    const std::vector<double>& target,
                                    const LaguerreConfig& cfg);

/// Reconstructs the model output for a given input sequence.
std::vector<double> volterra_predict(const VolterraModel& model,
                                     const std::vector<double>& input);

} // namespace cdpa
