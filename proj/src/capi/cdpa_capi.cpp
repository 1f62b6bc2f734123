#include "cdpa.h"

#include <cstdio>
#include <cstring>
#include <string>
#include <utility>

#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/signal.hpp"
#include "core/spectrum.hpp"
#include "core/training.hpp"

struct cdpa_config {
    cdpa::ExperimentConfig cfg;
};

struct cdpa_traces {
    cdpa::SimulationResult sim;
};

struct cdpa_record {
    cdpa::TrainingRecord rec;
    std::string stop_reason;
};

struct cdpa_spectrum {
    cdpa::SpectrumReport spec;
};

namespace {

thread_local std::string g_error = "";
thread_local long long g_error_index = -1;

template <class Fn>
cdpa_status wrap(Fn&& fn) {
    g_error.clear();
    g_error_index = -1;
    try {
        fn();
        return CDPA_OK;
    } catch (const cdpa::DivergenceError& e) {
        g_error = e.what();
        g_error_index = e.index;
        return CDPA_ERR_DIVERGED;
    } catch (const cdpa::ConfigError& e) {
        g_error = e.what();
        return CDPA_ERR_PARSE;
    } catch (const cdpa::IoError& e) {
        g_error = e.what();
        return CDPA_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_error = e.what();
        return CDPA_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_error = e.what();
        return CDPA_ERR_INTERNAL;
    } catch (...) {
        g_error = "unknown error";
        return CDPA_ERR_INTERNAL;
    }
}

cdpa_status bad_arg(const char* msg) {
    g_error = msg;
    g_error_index = -1;
    return CDPA_ERR_INVALID_ARGUMENT;
}

cdpa::TrainTarget target_from(const std::string& name) {
    if (name == "benn") return cdpa::TrainTarget::benn;
    if (name == "ewnn") return cdpa::TrainTarget::ewnn;
    if (name == "ewnn-ab") return cdpa::TrainTarget::ewnn_ab;
    if (name == "volterra") return cdpa::TrainTarget::volterra;
    throw cdpa::ConfigError("unknown model: '" + name + "'");
}

std::string resolve_out_dir(const cdpa_config* cfg, const char* out_dir) {
    return out_dir ? std::string(out_dir) : cfg->cfg.out_dir;
}

void fill_report(const cdpa::ImdReport& src, cdpa_imd_report* dst) {
    for (int i = 0; i < 7; ++i) {
        dst->freq_hz[i] = src.freq_hz[i];
        dst->level_db[i] = src.level_db[i];
    }
    dst->psimd2_asym_db = src.psimd2_asym_db;
    dst->psimd3_asym_db = src.psimd3_asym_db;
}

} // namespace

extern "C" {

const char* cdpa_last_error(void) { return g_error.c_str(); }

long long cdpa_last_error_index(void) { return g_error_index; }

const char* cdpa_version(void) { return "0.1.0"; }

/* ------------------------------------------------------------------ */

cdpa_status cdpa_config_create(cdpa_config** out) {
    if (!out) return bad_arg("out is NULL");
    return wrap([&] { *out = new cdpa_config(); });
}

cdpa_status cdpa_config_load(const char* path, cdpa_config** out) {
    if (!path || !out) return bad_arg("path or out is NULL");
    return wrap([&] {
        auto cfg = cdpa::load_config(path);
        *out = new cdpa_config{std::move(cfg)};
    });
}

cdpa_status cdpa_config_set(cdpa_config* cfg, const char* key,
                            const char* value) {
    if (!cfg || !key || !value) return bad_arg("cfg, key or value is NULL");
    return wrap([&] { cdpa::apply_key(cfg->cfg, key, value); });
}

cdpa_status cdpa_config_get(const cdpa_config* cfg, const char* key, char* buf,
                            size_t buf_size) {
    if (!cfg || !key || !buf) return bad_arg("cfg, key or buf is NULL");
    return wrap([&] {
        const std::string v = cdpa::get_key(cfg->cfg, key);
        if (v.size() + 1 > buf_size)
            throw std::invalid_argument("buffer too small for value of '" +
                                        std::string(key) + "'");
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

cdpa_status cdpa_config_write_json(const cdpa_config* cfg, const char* path) {
    if (!cfg || !path) return bad_arg("cfg or path is NULL");
    return wrap([&] {
        const std::string body = cdpa::config_to_json(cfg->cfg).dump(2) + "\n";
        std::FILE* f = std::fopen(path, "wb");
        if (!f) throw cdpa::IoError("cannot open for writing: " + std::string(path));
        const size_t written = std::fwrite(body.data(), 1, body.size(), f);
        std::fclose(f);
        if (written != body.size())
            throw cdpa::IoError("write failed: " + std::string(path));
    });
}

void cdpa_config_free(cdpa_config* cfg) { delete cfg; }

/* ------------------------------------------------------------------ */

cdpa_status cdpa_simulate(const cdpa_config* cfg, cdpa_traces** out) {
    if (!cfg || !out) return bad_arg("cfg or out is NULL");
    return wrap([&] {
        auto sim = cdpa::simulate(cfg->cfg.circuit);
        *out = new cdpa_traces{std::move(sim)};
    });
}

size_t cdpa_traces_count(const cdpa_traces* tr) {
    return tr ? tr->sim.output.size() : 0;
}

double cdpa_traces_sample_rate(const cdpa_traces* tr) {
    return tr ? tr->sim.output.sample_rate : 0.0;
}

double cdpa_traces_start_time(const cdpa_traces* tr) {
    return tr ? tr->sim.output.start_time : 0.0;
}

cdpa_status cdpa_traces_copy(const cdpa_traces* tr, double* input,
                             double* output) {
    if (!tr) return bad_arg("tr is NULL");
    return wrap([&] {
        const size_t n = tr->sim.output.size();
        if (input)
            std::memcpy(input, tr->sim.input.samples.data(), n * sizeof(double));
        if (output)
            std::memcpy(output, tr->sim.output.samples.data(),
                        n * sizeof(double));
    });
}

cdpa_status cdpa_traces_write_csv(const cdpa_traces* tr, const char* path) {
    if (!tr || !path) return bad_arg("tr or path is NULL");
    return wrap([&] { cdpa::write_trace_csv(path, tr->sim.input, tr->sim.output); });
}

void cdpa_traces_free(cdpa_traces* tr) { delete tr; }

/* ------------------------------------------------------------------ */

cdpa_status cdpa_train(const cdpa_config* cfg, const cdpa_traces* tr,
                       const char* model, cdpa_record** out) {
    if (!cfg || !tr || !out) return bad_arg("cfg, tr or out is NULL");
    return wrap([&] {
        cdpa::TrainConfig tc = cfg->cfg.train;
        if (model) {
            const auto kind = cdpa::model_kind_from_string(model);
            if (!kind)
                throw cdpa::ConfigError("unknown model: '" + std::string(model) +
                                        "' (benn, ewnn or ewnn-ab)");
            tc.model = *kind;
        }
        auto rec = cdpa::train(tr->sim.input, tr->sim.output, tc);
        auto* handle = new cdpa_record{std::move(rec), ""};
        handle->stop_reason = cdpa::to_string(handle->rec.stop_reason);
        *out = handle;
    });
}

int cdpa_record_iterations(const cdpa_record* rec) {
    return rec ? rec->rec.iterations_used : 0;
}

double cdpa_record_final_sse(const cdpa_record* rec) {
    return rec ? rec->rec.final_sse : 0.0;
}

double cdpa_record_max_time_error(const cdpa_record* rec) {
    return rec ? rec->rec.max_time_error_v : 0.0;
}

const char* cdpa_record_stop_reason(const cdpa_record* rec) {
    return rec ? rec->stop_reason.c_str() : "";
}

size_t cdpa_record_curve_len(const cdpa_record* rec) {
    return rec ? rec->rec.sse_curve.size() : 0;
}

cdpa_status cdpa_record_copy_curve(const cdpa_record* rec, double* out) {
    if (!rec || !out) return bad_arg("rec or out is NULL");
    return wrap([&] {
        std::memcpy(out, rec->rec.sse_curve.data(),
                    rec->rec.sse_curve.size() * sizeof(double));
    });
}

cdpa_status cdpa_record_write_json(const cdpa_record* rec, const char* path,
                                   const char* model_file) {
    if (!rec || !path) return bad_arg("rec or path is NULL");
    return wrap([&] {
        const std::string body =
            cdpa::record_to_json(rec->rec, model_file ? model_file : "").dump(2) +
            "\n";
        std::FILE* f = std::fopen(path, "wb");
        if (!f) throw cdpa::IoError("cannot open for writing: " + std::string(path));
        const size_t written = std::fwrite(body.data(), 1, body.size(), f);
        std::fclose(f);
        if (written != body.size())
            throw cdpa::IoError("write failed: " + std::string(path));
    });
}

cdpa_status cdpa_record_write_model_json(const cdpa_record* rec,
                                         const char* path) {
    if (!rec || !path) return bad_arg("rec or path is NULL");
    return wrap([&] {
        const std::string body = rec->rec.final_model.dump(2) + "\n";
        std::FILE* f = std::fopen(path, "wb");
        if (!f) throw cdpa::IoError("cannot open for writing: " + std::string(path));
        const size_t written = std::fwrite(body.data(), 1, body.size(), f);
        std::fclose(f);
        if (written != body.size())
            throw cdpa::IoError("write failed: " + std::string(path));
    });
}

cdpa_status cdpa_record_write_sse_csv(const cdpa_record* rec,
                                      const char* path) {
    if (!rec || !path) return bad_arg("rec or path is NULL");
    return wrap([&] { cdpa::write_sse_csv(path, rec->rec.sse_curve); });
}

void cdpa_record_free(cdpa_record* rec) { delete rec; }

/* ------------------------------------------------------------------ */

cdpa_status cdpa_spectrum_compute(const cdpa_traces* tr,
                                  cdpa_trace_channel channel,
                                  cdpa_spectrum** out) {
    if (!tr || !out) return bad_arg("tr or out is NULL");
    if (channel != CDPA_TRACE_INPUT && channel != CDPA_TRACE_OUTPUT)
        return bad_arg("invalid trace channel");
    return wrap([&] {
        const cdpa::SignalTrace& trace =
            channel == CDPA_TRACE_INPUT ? tr->sim.input : tr->sim.output;
        *out = new cdpa_spectrum{cdpa::dft_db(trace)};
    });
}

size_t cdpa_spectrum_bins(const cdpa_spectrum* sp) {
    return sp ? sp->spec.magnitudes_db.size() : 0;
}

double cdpa_spectrum_bin_width(const cdpa_spectrum* sp) {
    return sp ? sp->spec.bin_width : 0.0;
}

cdpa_status cdpa_spectrum_copy(const cdpa_spectrum* sp, double* out) {
    if (!sp || !out) return bad_arg("sp or out is NULL");
    return wrap([&] {
        std::memcpy(out, sp->spec.magnitudes_db.data(),
                    sp->spec.magnitudes_db.size() * sizeof(double));
    });
}

cdpa_status cdpa_spectrum_measure_imd(const cdpa_spectrum* sp,
                                      double input_freq, double ripple_freq,
                                      cdpa_imd_report* out) {
    if (!sp || !out) return bad_arg("sp or out is NULL");
    return wrap([&] {
        const cdpa::ImdReport rep =
            cdpa::measure_imd(sp->spec, input_freq, ripple_freq);
        fill_report(rep, out);
    });
}

cdpa_status cdpa_spectrum_write_csv(const cdpa_spectrum* sp, const char* path) {
    if (!sp || !path) return bad_arg("sp or path is NULL");
    return wrap([&] { cdpa::write_spectrum_csv(path, sp->spec); });
}

void cdpa_spectrum_free(cdpa_spectrum* sp) { delete sp; }

/* ------------------------------------------------------------------ */

cdpa_status cdpa_run_simulate(const cdpa_config* cfg, const char* out_dir) {
    if (!cfg) return bad_arg("cfg is NULL");
    return wrap([&] { cdpa::cmd_simulate(cfg->cfg, resolve_out_dir(cfg, out_dir)); });
}

cdpa_status cdpa_run_train(const cdpa_config* cfg, const char* model,
                           const char* out_dir) {
    if (!cfg) return bad_arg("cfg is NULL");
    return wrap([&] {
        const cdpa::TrainTarget target =
            target_from(model ? model : cdpa::to_string(cfg->cfg.train.model));
        cdpa::cmd_train(cfg->cfg, target, resolve_out_dir(cfg, out_dir));
    });
}

cdpa_status cdpa_run_compare(const cdpa_config* cfg, const char* out_dir,
                             cdpa_imd_report* measured) {
    if (!cfg) return bad_arg("cfg is NULL");
    return wrap([&] {
        const cdpa::ComparisonReport report =
            cdpa::cmd_compare(cfg->cfg, resolve_out_dir(cfg, out_dir));
        if (measured) fill_report(report.measured, measured);
    });
}

cdpa_status cdpa_run_sweep(const cdpa_config* cfg, const char* kind,
                           const char* model, const char* out_dir) {
    if (!cfg || !kind) return bad_arg("cfg or kind is NULL");
    return wrap([&] {
        cdpa::SweepKind sweep_kind;
        const std::string k = kind;
        if (k == "hidden")
            sweep_kind = cdpa::SweepKind::hidden;
        else if (k == "frequency")
            sweep_kind = cdpa::SweepKind::frequency;
        else if (k == "ab-updates")
            sweep_kind = cdpa::SweepKind::ab_updates;
        else
            throw cdpa::ConfigError("unknown sweep kind: '" + k +
                                    "' (hidden, frequency or ab-updates)");
        const cdpa::TrainTarget target =
            target_from(model ? model : cdpa::to_string(cfg->cfg.train.model));
        cdpa::cmd_sweep(cfg->cfg, sweep_kind, target, resolve_out_dir(cfg, out_dir));
    });
}

} // extern "C"
