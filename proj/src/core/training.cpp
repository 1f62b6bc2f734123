#include "core/training.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace cdpa {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::benn: return "benn";
        case ModelKind::ewnn: return "ewnn";
        case ModelKind::ewnn_ab: return "ewnn-ab";
    }
    return "?";
}

std::optional<ModelKind> model_kind_from_string(const std::string& name) {
    if (name == "benn") return ModelKind::benn;
    if (name == "ewnn") return ModelKind::ewnn;
    if (name == "ewnn-ab") return ModelKind::ewnn_ab;
    return std::nullopt;
}

std::string to_string(StopReason reason) {
    return reason == StopReason::threshold_met ? "threshold-met" : "max-iterations";
}

double sse(const std::vector<double>& target, const std::vector<double>& y) {
    if (target.size() != y.size())
        throw std::invalid_argument("sse: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double d = target[i] - y[i];
        acc += d * d;
    }
    return 0.5 * acc;
}

namespace {

void check_train_config(const TrainConfig& cfg) {
    if (cfg.hidden_count < 1)
        throw std::invalid_argument("train: hidden_count must be >= 1");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("train: max_iterations must be >= 1");
    if (!(cfg.sse_threshold > 0.0))
        throw std::invalid_argument("train: sse_threshold must be > 0");
    if (!(cfg.target_amplitude > 0.0))
        throw std::invalid_argument("train: target_amplitude must be > 0");
}

double scale_factor(const Eigen::VectorXd& v, double target_amplitude) {
    const double peak = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    return peak > 0.0 ? target_amplitude / peak : 1.0;
}

} // namespace

TrainingRecord train(const SignalTrace& input, const SignalTrace& target,
                     const TrainConfig& cfg) {
    check_train_config(cfg);
    if (input.size() != target.size() || input.size() == 0)
        throw std::invalid_argument("train: traces must be non-empty and equal length");

    const auto n = static_cast<Eigen::Index>(input.size());
    const Eigen::VectorXd u_raw =
        Eigen::Map<const Eigen::VectorXd>(input.samples.data(), n);
    const Eigen::VectorXd y_raw =
        Eigen::Map<const Eigen::VectorXd>(target.samples.data(), n);

    TrainingRecord rec;
    rec.config = cfg;
    rec.scale_input = scale_factor(u_raw, cfg.target_amplitude);
    rec.scale_output = scale_factor(y_raw, cfg.target_amplitude);

    const Eigen::VectorXd u = rec.scale_input * u_raw;
    const Eigen::VectorXd y_d = rec.scale_output * y_raw;
    const std::vector<double> y_d_vec(y_d.data(), y_d.data() + y_d.size());

    const bool is_benn = cfg.model == ModelKind::benn;
    ElmanState state(static_cast<int>(n), cfg.hidden_count, static_cast<int>(n),
                     cfg.alpha);
    WaveletParams wavelet =
        is_benn ? WaveletParams{}
                : WaveletParams::seeded(cfg.hidden_count, cfg.seed,
                                        cfg.model == ModelKind::ewnn_ab);

    Eigen::VectorXd y_final;
    for (int p = 1;; ++p) {
        const Eigen::VectorXd y =
            is_benn ? benn_forward(state, u).y : ewnn_forward(state, wavelet, u).y;
        const std::vector<double> y_vec(y.data(), y.data() + y.size());
        const double err = sse(y_d_vec, y_vec);
        if (!std::isfinite(err))
            throw DivergenceError(p, "training diverged at iteration " +
                                         std::to_string(p));
        rec.sse_curve.push_back(err);
        rec.iterations_used = p;
        if (err < cfg.sse_threshold) {
            rec.stop_reason = StopReason::threshold_met;
            y_final = y;
            break;
        }
        if (p >= cfg.max_iterations) {
            rec.stop_reason = StopReason::max_iterations;
            y_final = y;
            break;
        }
        try {
            if (is_benn)
                benn_grad_step(state, u, y_d, cfg.rates);
            else
                ewnn_grad_step(state, wavelet, u, y_d, cfg.rates);
        } catch (const DivergenceError& e) {
            throw DivergenceError(p, std::string(e.what()) + " at iteration " +
                                         std::to_string(p));
        }
    }

    rec.final_sse = rec.sse_curve.back();
    const Eigen::VectorXd prediction = y_final / rec.scale_output;
    rec.prediction_v.assign(prediction.data(), prediction.data() + prediction.size());
    rec.max_time_error_v = (y_raw - prediction).cwiseAbs().maxCoeff();
    rec.final_model = model_to_json(state, is_benn ? nullptr : &wavelet,
                                    to_string(cfg.model), cfg.seed);
    return rec;
}

std::vector<SweepEntry> sweep_hidden(const SignalTrace& input,
                                     const SignalTrace& target,
                                     const TrainConfig& base,
                                     const std::vector<int>& hidden_sizes) {
    std::vector<SweepEntry> entries;
    entries.reserve(hidden_sizes.size());
    for (int l : hidden_sizes) {
        SweepEntry entry;
        entry.hidden_count = l;
        try {
            TrainConfig cfg = base;
            cfg.hidden_count = l;
            entry.record = train(input, target, cfg);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

AbComparison compare_ab_updates(const SignalTrace& input,
                                const SignalTrace& target,
                                const TrainConfig& cfg) {
    TrainConfig on = cfg;
    on.model = ModelKind::ewnn_ab;
    TrainConfig off = cfg;
    off.model = ModelKind::ewnn;
    return {train(input, target, on), train(input, target, off)};
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
    return {
        {"model", to_string(cfg.model)},
        {"hidden_count", cfg.hidden_count},
        {"max_iterations", cfg.max_iterations},
        {"sse_threshold", cfg.sse_threshold},
        {"alpha", cfg.alpha},
        {"rate_w1", cfg.rates.w1},
        {"rate_w2", cfg.rates.w2},
        {"rate_w3", cfg.rates.w3},
        {"rate_a", cfg.rates.a},
        {"rate_b", cfg.rates.b},
        {"seed", cfg.seed},
        {"target_amplitude", cfg.target_amplitude},
    };
}

nlohmann::json record_to_json(const TrainingRecord& record,
                              const std::string& model_file) {
    nlohmann::json doc;
    doc["config"] = train_config_to_json(record.config);
    doc["iterations_used"] = record.iterations_used;
    doc["stop_reason"] = to_string(record.stop_reason);
    doc["sse_curve"] = record.sse_curve;
    doc["final_sse"] = record.final_sse;
    doc["max_time_error_v"] = record.max_time_error_v;
    doc["scale_input"] = record.scale_input;
    doc["scale_output"] = record.scale_output;
    doc["final_model"] = model_file;
    return doc;
}

void write_sse_csv(const std::string& path, const std::vector<double>& curve) {
    std::string body = "iteration,sse\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        body += std::to_string(i + 1);
        body += ',';
        body += format_full(curve[i]);
        body += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path);
}

} // namespace cdpa
