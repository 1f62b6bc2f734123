#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "core/errors.hpp"
#include "core/spectrum.hpp"

namespace fs = std::filesystem;

namespace cdpa {

namespace {

// ---------------------------------------------------------------------------
// key/value registry
// ---------------------------------------------------------------------------

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_uint(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const std::uint64_t i = std::stoull(v, &pos);
        if (pos != v.size() || (!v.empty() && v[0] == '-'))
            throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw ConfigError("invalid unsigned integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

struct KeyEntry {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<nlohmann::json(const ExperimentConfig&)> get;
};

template <class Access>
KeyEntry dbl_key(std::string key, Access acc) {
    return {key,
            [acc, key](ExperimentConfig& c, const std::string& v) {
                acc(c) = parse_double(v, key);
            },
            [acc](const ExperimentConfig& c) {
                return nlohmann::json(acc(const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Access>
KeyEntry int_key(std::string key, Access acc) {
    return {key,
            [acc, key](ExperimentConfig& c, const std::string& v) {
                acc(c) = static_cast<int>(parse_int(v, key));
            },
            [acc](const ExperimentConfig& c) {
                return nlohmann::json(acc(const_cast<ExperimentConfig&>(c)));
            }};
}

const std::vector<KeyEntry>& key_table() {
    static const std::vector<KeyEntry> table = [] {
        std::vector<KeyEntry> t;
        auto C = [](auto member) {
            return [member](ExperimentConfig& c) -> auto& { return c.circuit.*member; };
        };
        auto T = [](auto member) {
            return [member](ExperimentConfig& c) -> auto& { return c.train.*member; };
        };
        auto R = [](auto member) {
            return
                [member](ExperimentConfig& c) -> auto& { return c.train.rates.*member; };
        };
        auto L = [](auto member) {
            return [member](ExperimentConfig& c) -> auto& { return c.laguerre.*member; };
        };
        auto S = [](auto member) {
            return [member](ExperimentConfig& c) -> auto& { return c.sweep.*member; };
        };

        t.push_back(dbl_key("circuit.supply_voltage", C(&CircuitConfig::supply_voltage)));
        t.push_back(dbl_key("circuit.ripple_fraction", C(&CircuitConfig::ripple_fraction)));
        t.push_back(dbl_key("circuit.ripple_freq", C(&CircuitConfig::ripple_freq)));
        t.push_back(dbl_key("circuit.carrier_freq", C(&CircuitConfig::carrier_freq)));
        t.push_back(dbl_key("circuit.carrier_amp", C(&CircuitConfig::carrier_amp)));
        t.push_back(dbl_key("circuit.input_amp", C(&CircuitConfig::input_amp)));
        t.push_back(dbl_key("circuit.input_freq", C(&CircuitConfig::input_freq)));
        t.push_back(dbl_key("circuit.filter_inductance", C(&CircuitConfig::filter_inductance)));
        t.push_back(dbl_key("circuit.filter_esr", C(&CircuitConfig::filter_esr)));
        t.push_back(dbl_key("circuit.filter_capacitance", C(&CircuitConfig::filter_capacitance)));
        t.push_back(dbl_key("circuit.load_resistance", C(&CircuitConfig::load_resistance)));
        t.push_back(dbl_key("circuit.supply_resistance", C(&CircuitConfig::supply_resistance)));
        t.push_back(dbl_key("circuit.decoupling_capacitance",
                            C(&CircuitConfig::decoupling_capacitance)));
        t.push_back(dbl_key("circuit.supply_imbalance",
                            C(&CircuitConfig::supply_imbalance)));
        t.push_back(dbl_key("circuit.filter_saturation_current",
                            C(&CircuitConfig::filter_saturation_current)));
        t.push_back(dbl_key("circuit.internal_step", C(&CircuitConfig::internal_step)));
        t.push_back(dbl_key("circuit.sample_rate", C(&CircuitConfig::sample_rate)));
        t.push_back(dbl_key("circuit.window_start", C(&CircuitConfig::window_start)));
        t.push_back(dbl_key("circuit.window_end", C(&CircuitConfig::window_end)));

        t.push_back({"train.model",
                     [](ExperimentConfig& c, const std::string& v) {
                         const auto kind = model_kind_from_string(v);
                         if (!kind)
                             throw ConfigError("invalid model for train.model: '" + v +
                                               "' (benn, ewnn or ewnn-ab)");
                         c.train.model = *kind;
                     },
                     [](const ExperimentConfig& c) {
                         return nlohmann::json(to_string(c.train.model));
                     }});
        t.push_back(int_key("train.hidden_count", T(&TrainConfig::hidden_count)));
        t.push_back(int_key("train.max_iterations", T(&TrainConfig::max_iterations)));
        t.push_back(dbl_key("train.sse_threshold", T(&TrainConfig::sse_threshold)));
        t.push_back(dbl_key("train.alpha", T(&TrainConfig::alpha)));
        t.push_back(dbl_key("train.rate_w1", R(&LearningRates::w1)));
        t.push_back(dbl_key("train.rate_w2", R(&LearningRates::w2)));
        t.push_back(dbl_key("train.rate_w3", R(&LearningRates::w3)));
        t.push_back(dbl_key("train.rate_a", R(&LearningRates::a)));
        t.push_back(dbl_key("train.rate_b", R(&LearningRates::b)));
        t.push_back({"train.seed",
                     [](ExperimentConfig& c, const std::string& v) {
                         c.train.seed = parse_uint(v, "train.seed");
                     },
                     [](const ExperimentConfig& c) {
                         return nlohmann::json(c.train.seed);
                     }});
        t.push_back(dbl_key("train.target_amplitude", T(&TrainConfig::target_amplitude)));

        t.push_back(int_key("laguerre.num_basis", L(&LaguerreConfig::num_basis)));
        t.push_back(dbl_key("laguerre.pole", L(&LaguerreConfig::pole)));
        t.push_back(int_key("laguerre.max_order", L(&LaguerreConfig::max_order)));
        t.push_back({"laguerre.symmetric_kernels",
                     [](ExperimentConfig& c, const std::string& v) {
                         c.laguerre.symmetric_kernels =
                             parse_bool(v, "laguerre.symmetric_kernels");
                     },
                     [](const ExperimentConfig& c) {
                         return nlohmann::json(c.laguerre.symmetric_kernels);
                     }});

        t.push_back(int_key("compare.max_iterations",
                            [](ExperimentConfig& c) -> auto& {
                                return c.compare_max_iterations;
                            }));

        t.push_back(int_key("sweep.hidden_benn_min", S(&SweepConfig::hidden_benn_min)));
        t.push_back(int_key("sweep.hidden_benn_step", S(&SweepConfig::hidden_benn_step)));
        t.push_back(int_key("sweep.hidden_benn_max", S(&SweepConfig::hidden_benn_max)));
        t.push_back(int_key("sweep.hidden_ewnn_min", S(&SweepConfig::hidden_ewnn_min)));
        t.push_back(int_key("sweep.hidden_ewnn_step", S(&SweepConfig::hidden_ewnn_step)));
        t.push_back(int_key("sweep.hidden_ewnn_max", S(&SweepConfig::hidden_ewnn_max)));
        t.push_back(dbl_key("sweep.freq_min", S(&SweepConfig::freq_min)));
        t.push_back(dbl_key("sweep.freq_step", S(&SweepConfig::freq_step)));
        t.push_back(dbl_key("sweep.freq_max", S(&SweepConfig::freq_max)));

        t.push_back({"output.dir",
                     [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; },
                     [](const ExperimentConfig& c) {
                         return nlohmann::json(c.out_dir);
                     }});
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

void write_json_file(const fs::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    const std::string body = doc.dump(2) + "\n";
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

void make_out_dir(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
}

nlohmann::json imd_to_json(const ImdReport& rep) {
    static const char* names[7] = {"f1", "f2", "f3", "f4", "f5", "f6", "f7"};
    nlohmann::json components = nlohmann::json::array();
    for (int i = 0; i < 7; ++i) {
        components.push_back({{"name", names[i]},
                              {"freq_hz", rep.freq_hz[i]},
                              {"level_db", rep.level_db[i]}});
    }
    return {{"components", components},
            {"psimd2_asym_db", rep.psimd2_asym_db},
            {"psimd3_asym_db", rep.psimd3_asym_db}};
}

} // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
    for (const auto& entry : key_table()) {
        if (entry.key == key) {
            entry.set(cfg, value);
            return;
        }
    }
    throw ConfigError("unknown config key: '" + key + "'");
}

std::string get_key(const ExperimentConfig& cfg, const std::string& key) {
    for (const auto& entry : key_table()) {
        if (entry.key == key) {
            const nlohmann::json v = entry.get(cfg);
            return v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    throw ConfigError("unknown config key: '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);

    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json doc;
    for (const auto& entry : key_table()) {
        const auto dot = entry.key.find('.');
        doc[entry.key.substr(0, dot)][entry.key.substr(dot + 1)] = entry.get(cfg);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

ScaledVolterraFit fit_volterra_scaled(const SignalTrace& input,
                                      const SignalTrace& target,
                                      const LaguerreConfig& cfg,
                                      double target_amplitude) {
    if (input.size() != target.size() || input.size() == 0)
        throw std::invalid_argument("volterra fit: traces must be non-empty and equal length");

    auto peak = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    ScaledVolterraFit fit;
    const double pin = peak(input.samples);
    const double pout = peak(target.samples);
    fit.scale_input = pin > 0.0 ? target_amplitude / pin : 1.0;
    fit.scale_output = pout > 0.0 ? target_amplitude / pout : 1.0;

    std::vector<double> u(input.samples), y(target.samples);
    for (double& v : u) v *= fit.scale_input;
    for (double& v : y) v *= fit.scale_output;

    fit.model = fit_volterra_laguerre(u, y, cfg);

    const std::vector<double> pred_scaled = volterra_predict(fit.model, u);
    fit.prediction_v.resize(pred_scaled.size());
    double max_err = 0.0;
    for (std::size_t i = 0; i < pred_scaled.size(); ++i) {
        fit.prediction_v[i] = pred_scaled[i] / fit.scale_output;
        max_err = std::max(max_err,
                           std::abs(target.samples[i] - fit.prediction_v[i]));
    }
    fit.max_time_error_v = max_err;
    return fit;
}

void cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    const SimulationResult sim = simulate(cfg.circuit);
    make_out_dir(out_dir);
    const fs::path out(out_dir);
    write_trace_csv((out / "traces.csv").string(), sim.input, sim.output);
    write_json_file(out / "config.json", config_to_json(cfg));
}

namespace {

nlohmann::json volterra_fit_json(const ScaledVolterraFit& fit,
                                 const std::string& model_file) {
    return {{"parameter_count", fit.model.parameter_count},
            {"residual_sse", fit.model.residual_sse},
            {"rank_deficient", fit.model.rank_deficient},
            {"max_time_error_v", fit.max_time_error_v},
            {"scale_input", fit.scale_input},
            {"scale_output", fit.scale_output},
            {"final_model", model_file}};
}

nlohmann::json volterra_model_json(const VolterraModel& model) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.coefficients.size(); ++i)
        coeffs.push_back(model.coefficients[i]);
    return {{"kind", "volterra-laguerre"},
            {"num_basis", model.config.num_basis},
            {"pole", model.config.pole},
            {"max_order", model.config.max_order},
            {"symmetric_kernels", model.config.symmetric_kernels},
            {"coefficients", coeffs}};
}

} // namespace

void cmd_train(const ExperimentConfig& cfg, TrainTarget target,
               const std::string& out_dir) {
    const SimulationResult sim = simulate(cfg.circuit);
    const fs::path out(out_dir);

    if (target == TrainTarget::volterra) {
        const ScaledVolterraFit fit = fit_volterra_scaled(
            sim.input, sim.output, cfg.laguerre, cfg.train.target_amplitude);
        make_out_dir(out_dir);
        write_json_file(out / "model_volterra.json", volterra_model_json(fit.model));
        write_json_file(out / "fit_volterra.json",
                        volterra_fit_json(fit, "model_volterra.json"));
        write_sse_csv((out / "sse_volterra.csv").string(),
                      {fit.model.residual_sse});
        write_json_file(out / "config.json", config_to_json(cfg));
        return;
    }

    TrainConfig tc = cfg.train;
    tc.model = target == TrainTarget::benn  ? ModelKind::benn
               : target == TrainTarget::ewnn ? ModelKind::ewnn
                                             : ModelKind::ewnn_ab;
    const TrainingRecord rec = train(sim.input, sim.output, tc);

    const std::string name = to_string(tc.model);
    make_out_dir(out_dir);
    write_json_file(out / ("model_" + name + ".json"), rec.final_model);
    write_json_file(out / ("train_" + name + ".json"),
                    record_to_json(rec, "model_" + name + ".json"));
    write_sse_csv((out / ("sse_" + name + ".csv")).string(), rec.sse_curve);
    write_json_file(out / "config.json", config_to_json(cfg));
}

ComparisonReport cmd_compare(const ExperimentConfig& cfg,
                             const std::string& out_dir) {
    const SimulationResult sim = simulate(cfg.circuit);
    const SpectrumReport measured_spec = dft_db(sim.output);

    ComparisonReport report;
    report.measured = measure_imd(measured_spec, cfg.circuit.input_freq,
                                  cfg.circuit.ripple_freq);

    std::vector<SpectrumReport> model_specs;
    for (const std::string name : {"benn", "ewnn", "volterra"}) {
        CompareModelResult r;
        r.name = name;
        try {
            if (name == "volterra") {
                const ScaledVolterraFit fit = fit_volterra_scaled(
                    sim.input, sim.output, cfg.laguerre, cfg.train.target_amplitude);
                r.sse = fit.model.residual_sse;
                r.max_time_error_v = fit.max_time_error_v;
                r.parameter_count = fit.model.parameter_count;
                r.prediction_v = fit.prediction_v;
            } else {
                TrainConfig tc = cfg.train;
                tc.model = name == "benn" ? ModelKind::benn : ModelKind::ewnn;
                tc.max_iterations = cfg.compare_max_iterations;
                const TrainingRecord rec = train(sim.input, sim.output, tc);
                r.sse = rec.final_sse;
                r.max_time_error_v = rec.max_time_error_v;
                r.iterations_used = rec.iterations_used;
                r.prediction_v = rec.prediction_v;
            }
            SignalTrace pred;
            pred.sample_rate = sim.output.sample_rate;
            pred.start_time = sim.output.start_time;
            pred.samples = r.prediction_v;
            const SpectrumReport ps = dft_db(pred);
            const ImdReport pm =
                measure_imd(ps, cfg.circuit.input_freq, cfg.circuit.ripple_freq);
            for (int i = 0; i < 7; ++i)
                r.spectrum_error_db[i] =
                    std::abs(pm.level_db[i] - report.measured.level_db[i]);
            model_specs.push_back(ps);
            r.ok = true;
        } catch (const std::exception& e) {
            r.error = e.what();
            model_specs.push_back(SpectrumReport{});
        }
        report.models.push_back(std::move(r));
    }

    if (std::none_of(report.models.begin(), report.models.end(),
                     [](const CompareModelResult& m) { return m.ok; }))
        throw std::runtime_error("all models failed: " + report.models[0].error);

    make_out_dir(out_dir);
    const fs::path out(out_dir);

    nlohmann::json models = nlohmann::json::array();
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        const CompareModelResult& r = report.models[i];
        nlohmann::json m = {{"name", r.name}, {"ok", r.ok}};
        if (r.ok) {
            m["sse"] = r.sse;
            m["max_time_error_v"] = r.max_time_error_v;
            if (r.name == "volterra")
                m["parameter_count"] = r.parameter_count;
            else
                m["iterations_used"] = r.iterations_used;
            nlohmann::json errs;
            static const char* names[7] = {"f1", "f2", "f3", "f4", "f5", "f6", "f7"};
            for (int k = 0; k < 7; ++k) errs[names[k]] = r.spectrum_error_db[k];
            m["spectrum_error_db"] = errs;

            SignalTrace pred;
            pred.sample_rate = sim.output.sample_rate;
            pred.start_time = sim.output.start_time;
            pred.samples = r.prediction_v;
            write_series_csv((out / ("predict_" + r.name + ".csv")).string(),
                             "time_s", "predicted_v", pred);
            write_spectrum_csv((out / ("spectrum_" + r.name + ".csv")).string(),
                               model_specs[i]);
        } else {
            m["error"] = r.error;
        }
        models.push_back(std::move(m));
    }

    write_json_file(out / "compare.json",
                    {{"measured", imd_to_json(report.measured)},
                     {"models", models}});
    write_spectrum_csv((out / "spectrum_measured.csv").string(), measured_spec);
    write_json_file(out / "config.json", config_to_json(cfg));
    return report;
}

namespace {

nlohmann::json iterations_to_threshold(const std::vector<double>& curve,
                                       double threshold) {
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (curve[i] < threshold) return static_cast<int>(i + 1);
    return nullptr;
}

double mean_abs_first_difference(const std::vector<double>& curve,
                                 std::size_t skip) {
    if (curve.size() <= skip + 1) return 0.0;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = skip; i + 1 < curve.size(); ++i) {
        acc += std::abs(curve[i + 1] - curve[i]);
        ++count;
    }
    return acc / static_cast<double>(count);
}

std::string padded(int value) {
    std::string s = std::to_string(value);
    while (s.size() < 3) s.insert(s.begin(), '0');
    return s;
}

} // namespace

void cmd_sweep(const ExperimentConfig& cfg, SweepKind kind, TrainTarget model,
               const std::string& out_dir) {
    const fs::path out(out_dir);

    if (kind == SweepKind::hidden) {
        if (model == TrainTarget::volterra)
            throw ConfigError("hidden sweep requires a network model");
        const bool benn = model == TrainTarget::benn;
        const int lo = benn ? cfg.sweep.hidden_benn_min : cfg.sweep.hidden_ewnn_min;
        const int step = benn ? cfg.sweep.hidden_benn_step : cfg.sweep.hidden_ewnn_step;
        const int hi = benn ? cfg.sweep.hidden_benn_max : cfg.sweep.hidden_ewnn_max;
        if (step < 1 || lo < 1 || hi < lo)
            throw ConfigError("invalid hidden sweep range");

        std::vector<int> sizes;
        for (int l = lo; l <= hi; l += step) sizes.push_back(l);

        const SimulationResult sim = simulate(cfg.circuit);
        TrainConfig tc = cfg.train;
        tc.model = benn ? ModelKind::benn
                        : (model == TrainTarget::ewnn_ab ? ModelKind::ewnn_ab
                                                         : ModelKind::ewnn);
        const auto entries = sweep_hidden(sim.input, sim.output, tc, sizes);

        make_out_dir(out_dir);
        const std::string name = to_string(tc.model);
        nlohmann::json summary = nlohmann::json::array();
        for (const auto& entry : entries) {
            nlohmann::json e = {{"hidden_count", entry.hidden_count},
                                {"ok", entry.record.has_value()}};
            if (entry.record) {
                e["iterations_used"] = entry.record->iterations_used;
                e["final_sse"] = entry.record->final_sse;
                e["stop_reason"] = to_string(entry.record->stop_reason);
                e["iterations_to_sse_0_1"] =
                    iterations_to_threshold(entry.record->sse_curve, 0.1);
                write_sse_csv((out / ("sse_" + name + "_L" +
                                      padded(entry.hidden_count) + ".csv"))
                                  .string(),
                              entry.record->sse_curve);
            } else {
                e["error"] = entry.error;
            }
            summary.push_back(std::move(e));
        }
        write_json_file(out / ("sweep_hidden_" + name + ".json"), summary);
        write_json_file(out / "config.json", config_to_json(cfg));
        return;
    }

    if (kind == SweepKind::frequency) {
        if (!(cfg.sweep.freq_step > 0.0) || cfg.sweep.freq_max < cfg.sweep.freq_min)
            throw ConfigError("invalid frequency sweep range");
        std::vector<double> freqs;
        for (double f = cfg.sweep.freq_min; f <= cfg.sweep.freq_max + 1e-9;
             f += cfg.sweep.freq_step)
            freqs.push_back(f);

        const auto points = sweep_asymmetry(cfg.circuit, freqs);

        make_out_dir(out_dir);
        nlohmann::json arr = nlohmann::json::array();
        std::string csv =
            "freq_hz,f1_db,f2_db,f3_db,f4_db,f5_db,f6_db,f7_db,"
            "psimd2_asym_db,psimd3_asym_db\n";
        for (const auto& pt : points) {
            nlohmann::json e = {{"input_freq", pt.input_freq},
                                {"ok", pt.report.has_value()}};
            if (pt.report) {
                e["report"] = imd_to_json(*pt.report);
                csv += format_full(pt.input_freq);
                for (int i = 0; i < 7; ++i) {
                    csv += ',';
                    csv += format_full(pt.report->level_db[i]);
                }
                csv += ',';
                csv += format_full(pt.report->psimd2_asym_db);
                csv += ',';
                csv += format_full(pt.report->psimd3_asym_db);
                csv += '\n';
            } else {
                e["error"] = pt.error;
            }
            arr.push_back(std::move(e));
        }
        std::ofstream csv_out(out / "sweep_frequency.csv", std::ios::binary);
        if (!csv_out) throw IoError("cannot open for writing: sweep_frequency.csv");
        csv_out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
        write_json_file(out / "sweep_frequency.json", arr);
        write_json_file(out / "config.json", config_to_json(cfg));
        return;
    }

    // dilation/translation update comparison
    const SimulationResult sim = simulate(cfg.circuit);
    const AbComparison cmp = compare_ab_updates(sim.input, sim.output, cfg.train);

    make_out_dir(out_dir);
    auto run_json = [](const TrainingRecord& rec) {
        return nlohmann::json{
            {"iterations_used", rec.iterations_used},
            {"final_sse", rec.final_sse},
            {"stop_reason", to_string(rec.stop_reason)},
            {"mean_abs_sse_step_after_5",
             mean_abs_first_difference(rec.sse_curve, 5)}};
    };
    write_sse_csv((out / "sse_ab_on.csv").string(), cmp.updates_on.sse_curve);
    write_sse_csv((out / "sse_ab_off.csv").string(), cmp.updates_off.sse_curve);
    write_json_file(out / "sweep_ab.json",
                    {{"updates_on", run_json(cmp.updates_on)},
                     {"updates_off", run_json(cmp.updates_off)}});
    write_json_file(out / "config.json", config_to_json(cfg));
}

} // namespace cdpa
