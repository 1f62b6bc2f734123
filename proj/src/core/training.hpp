#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/models.hpp"
#include "core/signal.hpp"

namespace cdpa {

enum class ModelKind { benn, ewnn, ewnn_ab };

std::string to_string(ModelKind kind);
std::optional<ModelKind> model_kind_from_string(const std::string& name);

struct TrainConfig {
    ModelKind model = ModelKind::ewnn;
    int hidden_count = 30;
    int max_iterations = 100;
    double sse_threshold = 1e-3;
    double alpha = 0.001; ///< context feedback gain
    LearningRates rates;
    std::uint64_t seed = 1;
    /// Both traces are rescaled to this peak before training; gradient
    /// descent with the fixed rates is only well behaved near unit scale.
    double target_amplitude = 0.25;
};

enum class StopReason { threshold_met, max_iterations };

std::string to_string(StopReason reason);

struct TrainingRecord {
    TrainConfig config;
    std::vector<double> sse_curve; ///< one entry per iteration, pre-update
    int iterations_used = 0;
    StopReason stop_reason = StopReason::max_iterations;
    double final_sse = 0.0;
    double max_time_error_v = 0.0; ///< max |target - prediction| in volts
    double scale_input = 1.0;      ///< applied to the input trace
    double scale_output = 1.0;     ///< applied to the target trace
    nlohmann::json final_model;
    std::vector<double> prediction_v; ///< final reconstruction in volts
};

/// 0.5 * sum of squared differences.
double sse(const std::vector<double>& target, const std::vector<double>& y);

/// Full-batch gradient descent: the whole input trace is the network input
/// vector and the whole target trace the output vector.  Stops as soon as the
/// pre-update error drops below sse_threshold or max_iterations is reached.
/// Throws DivergenceError (with the iteration) on non-finite error.
TrainingRecord train(const SignalTrace& input, const SignalTrace& target,
                     const TrainConfig& cfg);

struct SweepEntry {
    int hidden_count = 0;
    std::optional<TrainingRecord> record;
    std::string error; ///< set when this run failed
};

/// Re-trains with each hidden-layer size; per-run failures are captured in
/// the entry rather than aborting the sweep.
std::vector<SweepEntry> sweep_hidden(const SignalTrace& input,
                                     const SignalTrace& target,
                                     const TrainConfig& base,
                                     const std::vector<int>& hidden_sizes);

struct AbComparison {
    TrainingRecord updates_on;  ///< dilation/translation updates active
    TrainingRecord updates_off; ///< plain wavelet network
};

/// Runs the wavelet network twice from the same seed, with and without the
/// dilation/translation updates.
AbComparison compare_ab_updates(const SignalTrace& input,
                                const SignalTrace& target,
                                const TrainConfig& cfg);

/// Serialization used by the command layer: the record without the bulky
/// weight document (referenced by file name instead).
nlohmann::json record_to_json(const TrainingRecord& record,
                              const std::string& model_file);
nlohmann::json train_config_to_json(const TrainConfig& cfg);

/// Writes `iteration,sse` rows, full double precision.
void write_sse_csv(const std::string& path, const std::vector<double>& curve);

} // namespace cdpa
