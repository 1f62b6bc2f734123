#include "core/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "core/errors.hpp"

namespace cdpa {

namespace {
constexpr double db_floor = -200.0;
}

std::vector<std::complex<double>> dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double angle =
            -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        twiddle[m] = {std::cos(angle), std::sin(angle)};
    }

    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * twiddle[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[k] = acc;
    }
    return out;
}

SpectrumReport dft_db(const SignalTrace& trace) {
    if (trace.samples.empty())
        throw std::invalid_argument("dft_db: empty trace");
    if (!(trace.sample_rate > 0.0))
        throw std::invalid_argument("dft_db: sample_rate must be > 0");

    const auto spectrum = dft(trace.samples);
    const std::size_t n = trace.samples.size();

    SpectrumReport rep;
    rep.num_samples = n;
    rep.bin_width = trace.sample_rate / static_cast<double>(n);
    rep.magnitudes_db.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double mag = std::abs(spectrum[k]);
        rep.magnitudes_db[k] =
            mag > 0.0 ? std::max(20.0 * std::log10(mag), db_floor) : db_floor;
    }
    return rep;
}

ImdReport measure_imd(const SpectrumReport& spec, double input_freq,
                      double ripple_freq) {
    if (spec.magnitudes_db.empty())
        throw std::invalid_argument("measure_imd: empty spectrum");
    if (!(input_freq > 0.0) || !(ripple_freq > 0.0))
        throw std::invalid_argument("measure_imd: frequencies must be > 0");

    ImdReport rep;
    rep.freq_hz[0] = ripple_freq;
    rep.freq_hz[1] = 2.0 * ripple_freq;
    rep.freq_hz[2] = input_freq - 2.0 * ripple_freq;
    rep.freq_hz[3] = input_freq - ripple_freq;
    rep.freq_hz[4] = input_freq;
    rep.freq_hz[5] = input_freq + ripple_freq;
    rep.freq_hz[6] = input_freq + 2.0 * ripple_freq;

    const double nyquist =
        spec.bin_width * static_cast<double>(spec.num_samples) / 2.0;
    for (int i = 0; i < 7; ++i) {
        const double f = rep.freq_hz[i];
        if (f < 0.0 || f > nyquist + 1e-9)
            throw std::invalid_argument("measure_imd: component outside [0, Nyquist]");
        const auto bin = static_cast<std::size_t>(std::llround(f / spec.bin_width));
        if (bin >= spec.magnitudes_db.size())
            throw std::invalid_argument("measure_imd: component outside spectrum");
        rep.level_db[i] = spec.magnitudes_db[bin];
    }
    rep.psimd2_asym_db = std::abs(rep.level_db[3] - rep.level_db[5]);
    rep.psimd3_asym_db = std::abs(rep.level_db[2] - rep.level_db[6]);
    return rep;
}

std::vector<AsymmetryPoint> sweep_asymmetry(const CircuitConfig& cfg,
                                            const std::vector<double>& freqs) {
    std::vector<AsymmetryPoint> points;
    points.reserve(freqs.size());
    for (double f : freqs) {
        AsymmetryPoint pt;
        pt.input_freq = f;
        try {
            CircuitConfig c = cfg;
            c.input_freq = f;
            const SimulationResult sim = simulate(c);
            pt.report = measure_imd(dft_db(sim.output), f, c.ripple_freq);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

void write_spectrum_csv(const std::string& path, const SpectrumReport& spec) {
    std::string body = "freq_hz,mag_db\n";
    for (std::size_t k = 0; k < spec.magnitudes_db.size(); ++k) {
        body += format_full(spec.bin_width * static_cast<double>(k));
        body += ',';
        body += format_full(spec.magnitudes_db[k]);
        body += '\n';
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path);
}

} // namespace cdpa
