#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/circuit.hpp"
#include "core/spectrum.hpp"
#include "core/training.hpp"
#include "core/volterra.hpp"

namespace cdpa {

/// Hidden-size ranges swept per model and the input-frequency range of the
/// asymmetry sweep.
struct SweepConfig {
    int hidden_benn_min = 10, hidden_benn_step = 10, hidden_benn_max = 110;
    int hidden_ewnn_min = 10, hidden_ewnn_step = 5, hidden_ewnn_max = 60;
    double freq_min = 1900.0, freq_step = 100.0, freq_max = 4300.0;
};

/// Everything a command run needs, resolvable from a flat key/value file.
struct ExperimentConfig {
    CircuitConfig circuit;
    TrainConfig train;
    LaguerreConfig laguerre;
    SweepConfig sweep;
    int compare_max_iterations = 40;
    std::string out_dir = "out";
};

/// Applies one `section.key = value` assignment.  Unknown keys and malformed
/// values raise ConfigError.
void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value);

/// Reads a flat key/value file: one `section.key = value` per line, `#`
/// comments, blank lines ignored.  Unknown keys are hard errors.
ExperimentConfig load_config(const std::string& path);

/// Full resolved configuration, suitable for echoing next to outputs.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Looks one resolved key up again (string form); throws ConfigError on
/// unknown keys.
std::string get_key(const ExperimentConfig& cfg, const std::string& key);

enum class TrainTarget { benn, ewnn, ewnn_ab, volterra };
enum class SweepKind { hidden, frequency, ab_updates };

/// Per-model outcome inside a comparison run.
struct CompareModelResult {
    std::string name;
    bool ok = false;
    std::string error;
    double sse = 0.0;              ///< training / residual SSE on scaled traces
    double max_time_error_v = 0.0;
    int iterations_used = 0;       ///< 0 for the least-squares fit
    int parameter_count = 0;       ///< Volterra only
    double spectrum_error_db[7] = {};
    std::vector<double> prediction_v;
};

struct ComparisonReport {
    ImdReport measured;
    std::vector<CompareModelResult> models; ///< benn, ewnn, volterra
};

/// Simulates, then writes `traces.csv` and the config echo into out_dir.
void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);

/// Simulates, trains (or fits) one model and writes record, SSE curve and
/// weight files.
void cmd_train(const ExperimentConfig& cfg, TrainTarget target,
               const std::string& out_dir);

/// Trains the two networks (capped at compare_max_iterations), fits the
/// Volterra model, and writes the comparison report plus per-model
/// reconstructions and spectra.  Individual model failures are recorded in
/// the report; throws only if every model fails.
ComparisonReport cmd_compare(const ExperimentConfig& cfg,
                             const std::string& out_dir);

/// Runs one of the three sweeps and writes its summary files.
void cmd_sweep(const ExperimentConfig& cfg, SweepKind kind, TrainTarget model,
               const std::string& out_dir);

/// Least-squares Volterra fit under the shared amplitude scaling; used by
/// cmd_train and cmd_compare.
struct ScaledVolterraFit {
    VolterraModel model;
    double scale_input = 1.0;
    double scale_output = 1.0;
    double max_time_error_v = 0.0;
    std::vector<double> prediction_v;
};
ScaledVolterraFit fit_volterra_scaled(const SignalTrace& input,
                                      const SignalTrace& target,
                                      const LaguerreConfig& cfg,
                                      double target_amplitude);

} // namespace cdpa
