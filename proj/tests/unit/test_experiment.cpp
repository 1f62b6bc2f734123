#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "test_util.hpp"

using namespace cdpa;
using Catch::Approx;

namespace {

// Cheap settings for command-level tests: short window, few iterations.
ExperimentConfig quick_config() {
    ExperimentConfig cfg;
    cfg.circuit.window_start = 0.003;
    cfg.circuit.window_end = 0.004;
    cfg.train.hidden_count = 6;
    cfg.train.max_iterations = 3;
    cfg.compare_max_iterations = 3;
    return cfg;
}

} // namespace

TEST_CASE("single key assignment and readback") {
    ExperimentConfig cfg;
    apply_key(cfg, "circuit.input_freq", "2500");
    CHECK(cfg.circuit.input_freq == 2500.0);
    CHECK(get_key(cfg, "circuit.input_freq") == "2500.0");

    apply_key(cfg, "train.model", "benn");
    CHECK(cfg.train.model == ModelKind::benn);
    CHECK(get_key(cfg, "train.model") == "benn");

    apply_key(cfg, "train.seed", "12345");
    CHECK(cfg.train.seed == 12345);

    apply_key(cfg, "laguerre.symmetric_kernels", "false");
    CHECK_FALSE(cfg.laguerre.symmetric_kernels);

    apply_key(cfg, "output.dir", "results");
    CHECK(cfg.out_dir == "results");

    CHECK_THROWS_AS(apply_key(cfg, "circuit.nonsense", "1"), ConfigError);
    CHECK_THROWS_AS(apply_key(cfg, "circuit.input_freq", "fast"), ConfigError);
    CHECK_THROWS_AS(apply_key(cfg, "train.model", "perceptron"), ConfigError);
    CHECK_THROWS_AS(apply_key(cfg, "train.seed", "-3"), ConfigError);
    CHECK_THROWS_AS(get_key(cfg, "circuit.nonsense"), ConfigError);
}

TEST_CASE("config file parsing") {
    testutil::TempDir dir("config");
    const std::string path = dir.file("run.conf");
    {
        std::ofstream out(path);
        out << "# sweep setup\n"
            << "\n"
            << "circuit.input_freq = 2100   # moved tone\n"
            << "train.model = ewnn-ab\n"
            << "  train.hidden_count=12\n";
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.circuit.input_freq == 2100.0);
    CHECK(cfg.train.model == ModelKind::ewnn_ab);
    CHECK(cfg.train.hidden_count == 12);
    // untouched keys keep their defaults
    CHECK(cfg.circuit.carrier_freq == 58000.0);

    SECTION("bad lines are reported with their line number") {
        const std::string bad = dir.file("bad.conf");
        {
            std::ofstream out(bad);
            out << "circuit.input_freq = 2100\n"
                << "circuit.supply_voltage\n";
        }
        try {
            load_config(bad);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SECTION("missing files are I/O errors") {
        CHECK_THROWS_AS(load_config(dir.file("absent.conf")), IoError);
    }
}

TEST_CASE("resolved config serializes by section") {
    ExperimentConfig cfg;
    cfg.train.seed = 9;
    const nlohmann::json doc = config_to_json(cfg);
    CHECK(doc.at("circuit").at("carrier_freq") == 58000.0);
    CHECK(doc.at("train").at("seed") == 9);
    CHECK(doc.at("train").at("model") == "ewnn");
    CHECK(doc.at("laguerre").at("num_basis") == 5);
    CHECK(doc.at("sweep").at("freq_min") == 1900.0);
    CHECK(doc.at("compare").at("max_iterations") == 40);
    CHECK(doc.at("output").at("dir") == "out");
}

TEST_CASE("simulate command writes traces and a config echo") {
    const ExperimentConfig cfg = quick_config();
    testutil::TempDir dir("cmd_simulate");
    cmd_simulate(cfg, dir.file("a"));

    namespace fs = std::filesystem;
    CHECK(fs::exists(dir.file("a") + "/traces.csv"));
    CHECK(fs::exists(dir.file("a") + "/config.json"));

    const std::string traces = testutil::slurp(dir.file("a") + "/traces.csv");
    CHECK(traces.rfind("time_s,input_v,output_v\n", 0) == 0);
    CHECK(std::count(traces.begin(), traces.end(), '\n') == 101);

    // reruns are byte-identical
    cmd_simulate(cfg, dir.file("b"));
    CHECK(testutil::slurp(dir.file("b") + "/traces.csv") == traces);

    const nlohmann::json echo =
        nlohmann::json::parse(testutil::slurp(dir.file("a") + "/config.json"));
    CHECK(echo.at("circuit").at("window_end") == 0.004);
}

TEST_CASE("train command writes record, curve and weights") {
    const ExperimentConfig cfg = quick_config();
    testutil::TempDir dir("cmd_train");

    SECTION("network model") {
        cmd_train(cfg, TrainTarget::benn, dir.file("t"));
        namespace fs = std::filesystem;
        CHECK(fs::exists(dir.file("t") + "/train_benn.json"));
        CHECK(fs::exists(dir.file("t") + "/sse_benn.csv"));
        CHECK(fs::exists(dir.file("t") + "/model_benn.json"));
        CHECK(fs::exists(dir.file("t") + "/config.json"));

        const nlohmann::json rec =
            nlohmann::json::parse(testutil::slurp(dir.file("t") + "/train_benn.json"));
        CHECK(rec.at("final_model") == "model_benn.json");
        CHECK(rec.at("iterations_used") == 3);

        const std::string curve = testutil::slurp(dir.file("t") + "/sse_benn.csv");
        CHECK(std::count(curve.begin(), curve.end(), '\n') == 4);
    }
    SECTION("least squares model") {
        cmd_train(cfg, TrainTarget::volterra, dir.file("v"));
        namespace fs = std::filesystem;
        CHECK(fs::exists(dir.file("v") + "/fit_volterra.json"));
        CHECK(fs::exists(dir.file("v") + "/model_volterra.json"));
        CHECK(fs::exists(dir.file("v") + "/sse_volterra.csv"));

        const nlohmann::json fit =
            nlohmann::json::parse(testutil::slurp(dir.file("v") + "/fit_volterra.json"));
        CHECK(fit.at("parameter_count") == 55);
        CHECK(fit.at("residual_sse").get<double>() >= 0.0);
        const nlohmann::json model = nlohmann::json::parse(
            testutil::slurp(dir.file("v") + "/model_volterra.json"));
        CHECK(model.at("coefficients").size() == 55);
    }
}

TEST_CASE("compare command tabulates all three models") {
    const ExperimentConfig cfg = quick_config();
    testutil::TempDir dir("cmd_compare");
    const ComparisonReport report = cmd_compare(cfg, dir.file("c"));

    REQUIRE(report.models.size() == 3);
    CHECK(report.models[0].name == "benn");
    CHECK(report.models[1].name == "ewnn");
    CHECK(report.models[2].name == "volterra");
    for (const auto& m : report.models) {
        INFO(m.name << ": " << m.error);
        CHECK(m.ok);
    }
    CHECK(report.measured.freq_hz[4] == Approx(3700.0));

    namespace fs = std::filesystem;
    for (const char* name :
         {"compare.json", "spectrum_measured.csv", "predict_benn.csv",
          "predict_ewnn.csv", "predict_volterra.csv", "spectrum_benn.csv",
          "spectrum_ewnn.csv", "spectrum_volterra.csv", "config.json"})
        CHECK(fs::exists(dir.file("c") + "/" + name));

    const nlohmann::json doc =
        nlohmann::json::parse(testutil::slurp(dir.file("c") + "/compare.json"));
    CHECK(doc.at("models").size() == 3);
    CHECK(doc.at("measured").at("components").size() == 7);
    CHECK(doc.at("models").at(2).at("parameter_count") == 55);
}

TEST_CASE("sweep command variants") {
    ExperimentConfig cfg = quick_config();
    testutil::TempDir dir("cmd_sweep");
    namespace fs = std::filesystem;

    SECTION("hidden sizes") {
        cfg.sweep.hidden_ewnn_min = 4;
        cfg.sweep.hidden_ewnn_step = 4;
        cfg.sweep.hidden_ewnn_max = 8;
        cmd_sweep(cfg, SweepKind::hidden, TrainTarget::ewnn, dir.file("h"));
        CHECK(fs::exists(dir.file("h") + "/sweep_hidden_ewnn.json"));
        CHECK(fs::exists(dir.file("h") + "/sse_ewnn_L004.csv"));
        CHECK(fs::exists(dir.file("h") + "/sse_ewnn_L008.csv"));

        const nlohmann::json doc = nlohmann::json::parse(
            testutil::slurp(dir.file("h") + "/sweep_hidden_ewnn.json"));
        REQUIRE(doc.size() == 2);
        CHECK(doc.at(0).at("hidden_count") == 4);
        CHECK(doc.at(0).at("ok") == true);

        CHECK_THROWS_AS(cmd_sweep(cfg, SweepKind::hidden, TrainTarget::volterra,
                                  dir.file("x")),
                        ConfigError);
    }
    SECTION("input frequency") {
        cfg.sweep.freq_min = 3600.0;
        cfg.sweep.freq_step = 100.0;
        cfg.sweep.freq_max = 3700.0;
        cmd_sweep(cfg, SweepKind::frequency, TrainTarget::ewnn, dir.file("f"));
        const std::string csv =
            testutil::slurp(dir.file("f") + "/sweep_frequency.csv");
        CHECK(csv.rfind("freq_hz,", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
        const nlohmann::json doc = nlohmann::json::parse(
            testutil::slurp(dir.file("f") + "/sweep_frequency.json"));
        REQUIRE(doc.size() == 2);
        CHECK(doc.at(1).at("input_freq") == 3700.0);
    }
    SECTION("dilation and translation updates") {
        cmd_sweep(cfg, SweepKind::ab_updates, TrainTarget::ewnn, dir.file("ab"));
        CHECK(fs::exists(dir.file("ab") + "/sse_ab_on.csv"));
        CHECK(fs::exists(dir.file("ab") + "/sse_ab_off.csv"));
        const nlohmann::json doc = nlohmann::json::parse(
            testutil::slurp(dir.file("ab") + "/sweep_ab.json"));
        CHECK(doc.at("updates_on").contains("mean_abs_sse_step_after_5"));
        CHECK(doc.at("updates_off").at("iterations_used") == 3);
    }
}

TEST_CASE("scaled least-squares fit reports in volts") {
    const ExperimentConfig cfg = quick_config();
    const SimulationResult sim = simulate(cfg.circuit);
    const ScaledVolterraFit fit = fit_volterra_scaled(
        sim.input, sim.output, cfg.laguerre, cfg.train.target_amplitude);

    CHECK(fit.scale_input ==
          Approx(cfg.train.target_amplitude / 3.0).epsilon(0.05));
    CHECK(fit.prediction_v.size() == sim.output.size());
    CHECK(fit.max_time_error_v >= 0.0);
    // the fit should track the waveform to well under a volt
    CHECK(fit.max_time_error_v < 1.0);
}
