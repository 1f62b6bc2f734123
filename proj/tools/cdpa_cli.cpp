// Command line front end. Everything goes through the C API in cdpa.h so
// this file doubles as a usage example for the shared library.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdpa.h"

namespace {

struct Options {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string model;
    std::string kind;
    unsigned long long seed = 0;
    bool have_seed = false;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

int fail(cdpa_status st) {
    std::fprintf(stderr, "error: %s\n", cdpa_last_error());
    return st == CDPA_ERR_DIVERGED ? 3 : 2;
}

std::string effective_out(const cdpa_config* cfg, const Options& opt) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    char buf[4096];
    if (cdpa_config_get(cfg, "output.dir", buf, sizeof buf) != CDPA_OK)
        return "out";
    return buf;
}

// Builds the config (defaults or file), applies --set/--seed overrides and
// hands it to run. Returns the process exit code.
int with_config(const Options& opt,
                const std::function<cdpa_status(cdpa_config*)>& run) {
    cdpa_config* cfg = nullptr;
    cdpa_status st = opt.config_path.empty()
                         ? cdpa_config_create(&cfg)
                         : cdpa_config_load(opt.config_path.c_str(), &cfg);
    if (st != CDPA_OK) return fail(st);

    int rc = 0;
    for (const auto& kv : opt.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || trim(kv.substr(0, eq)).empty()) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                         kv.c_str());
            rc = 2;
            break;
        }
        st = cdpa_config_set(cfg, trim(kv.substr(0, eq)).c_str(),
                             trim(kv.substr(eq + 1)).c_str());
        if (st != CDPA_OK) {
            rc = fail(st);
            break;
        }
    }
    if (rc == 0 && opt.have_seed) {
        st = cdpa_config_set(cfg, "train.seed",
                             std::to_string(opt.seed).c_str());
        if (st != CDPA_OK) rc = fail(st);
    }
    if (rc == 0) {
        st = run(cfg);
        if (st != CDPA_OK) rc = fail(st);
    }
    cdpa_config_free(cfg);
    return rc;
}

int do_simulate(const Options& opt) {
    return with_config(opt, [&](cdpa_config* cfg) {
        const std::string out = effective_out(cfg, opt);
        const cdpa_status st = cdpa_run_simulate(cfg, out.c_str());
        if (st == CDPA_OK)
            std::printf("wrote %s/traces.csv\n", out.c_str());
        return st;
    });
}

int do_train(const Options& opt) {
    return with_config(opt, [&](cdpa_config* cfg) {
        const std::string out = effective_out(cfg, opt);
        const cdpa_status st = cdpa_run_train(
            cfg, opt.model.empty() ? nullptr : opt.model.c_str(), out.c_str());
        if (st == CDPA_OK)
            std::printf("training results written to %s\n", out.c_str());
        return st;
    });
}

int do_compare(const Options& opt) {
    return with_config(opt, [&](cdpa_config* cfg) {
        const std::string out = effective_out(cfg, opt);
        cdpa_imd_report rep;
        const cdpa_status st = cdpa_run_compare(cfg, out.c_str(), &rep);
        if (st == CDPA_OK) {
            static const char* names[7] = {"f1", "f2", "f3", "f4",
                                           "f5", "f6", "f7"};
            std::printf("measured output spectrum:\n");
            for (int i = 0; i < 7; ++i)
                std::printf("  %-3s %8.1f Hz  %8.2f dB\n", names[i],
                            rep.freq_hz[i], rep.level_db[i]);
            std::printf("  sideband asymmetry (one spacing): %.3f dB\n",
                        rep.psimd2_asym_db);
            std::printf("  sideband asymmetry (two spacings): %.3f dB\n",
                        rep.psimd3_asym_db);
            std::printf("comparison written to %s\n", out.c_str());
        }
        return st;
    });
}

int do_sweep(const Options& opt) {
    return with_config(opt, [&](cdpa_config* cfg) {
        const std::string out = effective_out(cfg, opt);
        const cdpa_status st = cdpa_run_sweep(
            cfg, opt.kind.c_str(),
            opt.model.empty() ? nullptr : opt.model.c_str(), out.c_str());
        if (st == CDPA_OK)
            std::printf("sweep results written to %s\n", out.c_str());
        return st;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"class-D amplifier supply-distortion workbench"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cdpa_version());

    Options opt;
    int rc = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config_path,
                        "config file (key = value lines, # comments)");
        sub->add_option("-s,--set", opt.sets,
                        "override one config key, e.g. circuit.input_freq=2500");
        sub->add_option("-o,--out", opt.out_dir,
                        "output directory (default: output.dir from config)");
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "override train.seed")
            ->each([&](const std::string&) { opt.have_seed = true; });
    };

    auto* sim = app.add_subcommand(
        "simulate", "run the switching amplifier and dump sampled traces");
    add_common(sim);
    sim->callback([&] { rc = do_simulate(opt); });

    auto* train = app.add_subcommand(
        "train", "fit one model to a fresh simulation and record the run");
    add_common(train);
    add_seed(train);
    train->add_option("-m,--model", opt.model,
                      "benn, ewnn, ewnn-ab or volterra (default from config)")
        ->check(CLI::IsMember({"benn", "ewnn", "ewnn-ab", "volterra"}));
    train->callback([&] { rc = do_train(opt); });

    auto* cmp = app.add_subcommand(
        "compare", "fit every model against one simulation and tabulate errors");
    add_common(cmp);
    add_seed(cmp);
    cmp->callback([&] { rc = do_compare(opt); });

    auto* sweep = app.add_subcommand(
        "sweep", "repeat an experiment over a parameter range");
    add_common(sweep);
    add_seed(sweep);
    sweep->add_option("-k,--kind", opt.kind,
                      "hidden, frequency or ab-updates")
        ->required()
        ->check(CLI::IsMember({"hidden", "frequency", "ab-updates"}));
    sweep->add_option("-m,--model", opt.model,
                      "network for the hidden sweep (default from config)")
        ->check(CLI::IsMember({"benn", "ewnn", "ewnn-ab"}));
    sweep->callback([&] { rc = do_sweep(opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return rc;
}
