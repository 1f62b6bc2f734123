#pragma once

#include "core/signal.hpp"

namespace cdpa {

/// Half-bridge power stage with an LC output filter and rippled supply rails.
///
/// Each rail is a sinusoidally rippled source behind a small series
/// resistance with a decoupling capacitor at the bridge side.  The rail
/// network is what couples switching current back into the supply and gives
/// the ripple-induced sidebands their asymmetry; supply_imbalance models the
/// component tolerance between the two rails (top resistance scaled by
/// 1 - imbalance/2, bottom by 1 + imbalance/2), which is what lets ripple
/// feed through to the output directly.  Set supply_resistance to 0 for
/// ideal (stiff) rails.
///
/// The filter inductor carries a series loss that rises with current as the
/// core approaches saturation: v_drop = R_esr * i * (1 + (i / i_sat)^2).
/// This mild core nonlinearity is what turns ripple-borne current components
/// into second-harmonic and higher-order intermodulation products; i_sat = 0
/// keeps the loss constant and filter_esr = 0 removes it entirely.
struct CircuitConfig {
    double supply_voltage = 10.0;           ///< rail magnitude V_dd [V]
    double ripple_fraction = 0.05;          ///< ripple amplitude relative to V_dd
    double ripple_freq = 400.0;             ///< Hz
    double carrier_freq = 58000.0;          ///< triangle carrier [Hz]
    double carrier_amp = 4.0;               ///< triangle peak [V]
    double input_amp = 3.0;                 ///< modulating sine peak [V]
    double input_freq = 3700.0;             ///< Hz
    double filter_inductance = 56e-6;       ///< H
    double filter_esr = 0.05;               ///< ohm, inductor series loss at low current
    double filter_saturation_current = 1.0; ///< A, scale of the loss rise (0 = constant loss)
    double filter_capacitance = 4.7e-6;     ///< F
    double load_resistance = 8.0;           ///< ohm
    double supply_resistance = 0.5;         ///< per-rail source resistance [ohm]
    double decoupling_capacitance = 100e-6; ///< per-rail decoupling cap [F]
    double supply_imbalance = 0.1;          ///< top/bottom resistance mismatch
    double internal_step = 1e-7;            ///< integrator step [s]
    double sample_rate = 100000.0;          ///< decimated output rate [Hz]
    double window_start = 0.010;            ///< s
    double window_end = 0.020;              ///< s
};

enum class SwitchState { low, high };

/// Throws std::invalid_argument when a field is out of range or the step,
/// sample rate and window are mutually inconsistent.
void validate(const CircuitConfig& cfg);

/// Triangle wave with period 1/freq and range [-amp, +amp]; value -amp at
/// t = 0, rising over the first half period.
double triangle_carrier(double t, double freq, double amp);

/// Comparator: high exactly when input_v > carrier_v (ties resolve low).
SwitchState pwm_state(double input_v, double carrier_v);

/// Instantaneous rail source magnitude V_dd * (1 + ripple_fraction * sin(2 pi f_r t)).
double supply_voltage(double t, const CircuitConfig& cfg);

struct SimulationResult {
    SignalTrace input;  ///< raw modulating sinusoid on the sample grid
    SignalTrace output; ///< filtered bridge voltage, anti-aliased per sample
};

/// Integrates the bridge from t = 0 and returns both traces decimated to
/// cfg.sample_rate over [window_start, window_end).  Each output sample is a
/// triangular-weighted average of the filter voltage over the two surrounding
/// sample periods (zero-phase anti-aliased decimation); the input trace holds
/// the sinusoid values at the sample instants.  Throws DivergenceError (with
/// the failing step index) if the state stops being finite.
SimulationResult simulate(const CircuitConfig& cfg);

} // namespace cdpa
