#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "core/circuit.hpp"
#include "core/signal.hpp"

namespace cdpa {

/// One-sided magnitude spectrum of a rectangular-window DFT.
struct SpectrumReport {
    double bin_width = 0.0;            ///< Hz
    std::size_t num_samples = 0;       ///< N of the underlying window
    std::vector<double> magnitudes_db; ///< bins 0 .. floor(N/2), floored at -200 dB
};

/// Full two-sided DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N).
std::vector<std::complex<double>> dft(const std::vector<double>& x);

/// Raw-magnitude dB spectrum, 20 log10 |X[k]| with no window or 1/N scaling.
SpectrumReport dft_db(const SignalTrace& trace);

/// Supply-ripple intermodulation readout around one input tone.
/// f1 = ripple, f2 = 2 f1, f5 = input, f4/f6 = f5 -/+ f1, f3/f7 = f5 -/+ 2 f1.
struct ImdReport {
    double freq_hz[7] = {};
    double level_db[7] = {};
    double psimd2_asym_db = 0.0; ///< |level(f4) - level(f6)|
    double psimd3_asym_db = 0.0; ///< |level(f3) - level(f7)|
};

/// Reads the seven component levels at their nearest bins.  Throws
/// std::invalid_argument if any target lies beyond Nyquist.
ImdReport measure_imd(const SpectrumReport& spec, double input_freq,
                      double ripple_freq);

/// One entry of a frequency sweep; `error` is set instead of `report` when
/// that point failed (simulation or readout).
struct AsymmetryPoint {
    double input_freq = 0.0;
    std::optional<ImdReport> report;
    std::string error;
};

/// Re-simulates cfg at each input frequency and measures the ripple
/// intermodulation of the output.  Per-point failures are recorded, not thrown.
std::vector<AsymmetryPoint> sweep_asymmetry(const CircuitConfig& cfg,
                                            const std::vector<double>& freqs);

/// Writes `freq_hz,mag_db` rows at full double precision.
void write_spectrum_csv(const std::string& path, const SpectrumReport& spec);

} // namespace cdpa
