#pragma once

#include <cstdint>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace cdpa {

double sigmoid(double x);
double sigmoid_deriv(double x); ///< f'(x) = f(x) (1 - f(x))

/// Morlet wavelet cos(1.75 z) exp(-z^2 / 2) and its derivative.
double morlet(double z);
double morlet_deriv(double z);

/// Scales a vector by 1 / max|v_i|; the zero vector is returned unchanged.
Eigen::VectorXd normalize_hidden(const Eigen::VectorXd& raw);

struct LearningRates {
    double w1 = 0.01;
    double w2 = 0.01;
    double w3 = 0.01;
    double a = 0.01;
    double b = 0.01;
};

/// Recurrent single-hidden-layer state shared by both network variants.
///
/// Layout follows the index conventions w1(i,m), w2(j,i), w3(k,i) with
/// j an input index, i/k hidden indices and m an output index, so the
/// forward pass applies the transposes.  The context vector feeds back
/// alpha * hidden from the previous call, and dh_dw2 / dh_dw3 carry the
/// recursive output sensitivities (diagonal-in-w3 approximation) between
/// gradient steps.
class ElmanState {
  public:
    ElmanState(int input_size, int hidden_size, int output_size, double alpha);

    int input_size() const { return static_cast<int>(w2.rows()); }
    int hidden_size() const { return static_cast<int>(w1.rows()); }
    int output_size() const { return static_cast<int>(w1.cols()); }

    Eigen::MatrixXd w1; ///< hidden -> output, L x M
    Eigen::MatrixXd w2; ///< input -> hidden, N x L
    Eigen::MatrixXd w3; ///< context -> hidden, L x L
    Eigen::VectorXd context;
    Eigen::MatrixXd dh_dw2;
    Eigen::MatrixXd dh_dw3;
    double alpha = 0.0;

    /// Quantities cached by the most recent forward call, consumed by the
    /// matching gradient step.
    struct Cache {
        enum class Kind { none, benn, ewnn } kind = Kind::none;
        Eigen::VectorXd preact;
        Eigen::VectorXd hidden;
        Eigen::VectorXd output;
        Eigen::VectorXd context_used;
        Eigen::VectorXd z;        ///< normalized wavelet argument (ewnn only)
        double norm_denom = 1.0;  ///< max|z'| before normalization (ewnn only)
    };
    Cache cache;
};

/// Dilation/translation parameters of the wavelet hidden layer.  With
/// update_enabled false the dilation stays fixed at 1 everywhere.
struct WaveletParams {
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    bool update_enabled = false;
    Eigen::VectorXd da_mem; ///< recursive dH/da memory
    Eigen::VectorXd db_mem; ///< recursive dH/db memory

    /// a = 1, b drawn once from the standard normal distribution.
    static WaveletParams seeded(int hidden_size, std::uint64_t seed,
                                bool update_enabled = false);
};

struct ForwardResult {
    Eigen::VectorXd y;
    Eigen::VectorXd hidden;
};

struct EwnnForwardResult {
    Eigen::VectorXd y;
    Eigen::VectorXd hidden;
    Eigen::VectorXd z;
};

/// Sigmoid-hidden forward pass; sets the context for the next call to
/// alpha * hidden.
ForwardResult benn_forward(ElmanState& state, const Eigen::VectorXd& u);

/// Wavelet-hidden forward pass: z' = (preact - b) / a, z = z' / max|z'|,
/// hidden = morlet(z).  Returns z for gradient reuse.
EwnnForwardResult ewnn_forward(ElmanState& state, const WaveletParams& wp,
                               const Eigen::VectorXd& u);

/// One gradient-descent update from the cached forward pass.  Returns the
/// error 0.5 ||y_d - y||^2 evaluated before the update.  Requires a matching
/// forward call immediately before.
double benn_grad_step(ElmanState& state, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& y_d, const LearningRates& rates);

/// Wavelet counterpart of benn_grad_step.  The normalization denominator is
/// treated as a constant of the iteration and the dilation factor in the
/// weight gradients stays at 1; when wp.update_enabled, a and b receive their
/// own recursive updates and |a_i| is clamped to at least 0.1.
double ewnn_grad_step(ElmanState& state, WaveletParams& wp,
                      const Eigen::VectorXd& u, const Eigen::VectorXd& y_d,
                      const LearningRates& rates);

/// JSON weight document: dimensions, row-major matrices, a, b, alpha, seed.
/// Doubles survive the round trip bit-exactly.
nlohmann::json model_to_json(const ElmanState& state, const WaveletParams* wp,
                             const std::string& kind, std::uint64_t seed);

struct LoadedModel {
    ElmanState state;
    WaveletParams wavelet;
    bool has_wavelet = false;
    std::string kind;
    std::uint64_t seed = 0;
};
LoadedModel model_from_json(const nlohmann::json& doc);

} // namespace cdpa
