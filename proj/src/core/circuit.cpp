#include "core/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace cdpa {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct State {
    double il = 0.0; // filter inductor current
    double vc = 0.0; // output capacitor voltage
    double up = 0.0; // top rail node voltage (magnitude)
    double un = 0.0; // bottom rail node voltage (magnitude)
};

struct Deriv {
    double il = 0.0, vc = 0.0, up = 0.0, un = 0.0;
};

bool finite(const State& x) {
    return std::isfinite(x.il) && std::isfinite(x.vc) && std::isfinite(x.up) &&
           std::isfinite(x.un);
}

} // namespace

void validate(const CircuitConfig& cfg) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };

    if (!(cfg.supply_voltage > 0.0)) fail("supply_voltage must be > 0");
    if (!(cfg.ripple_fraction >= 0.0 && cfg.ripple_fraction < 1.0))
        fail("ripple_fraction must be in [0, 1)");
    if (!(cfg.ripple_freq > 0.0)) fail("ripple_freq must be > 0");
    if (!(cfg.carrier_freq > 0.0)) fail("carrier_freq must be > 0");
    if (!(cfg.input_freq > 0.0)) fail("input_freq must be > 0");
    if (!(cfg.input_amp >= 0.0)) fail("input_amp must be >= 0");
    if (!(cfg.carrier_amp > cfg.input_amp))
        fail("carrier_amp must exceed input_amp (no over-modulation)");
    if (!(cfg.filter_inductance > 0.0)) fail("filter_inductance must be > 0");
    if (!(cfg.filter_esr >= 0.0)) fail("filter_esr must be >= 0");
    if (!(cfg.filter_saturation_current >= 0.0))
        fail("filter_saturation_current must be >= 0");
    if (!(cfg.filter_capacitance > 0.0)) fail("filter_capacitance must be > 0");
    if (!(cfg.load_resistance > 0.0)) fail("load_resistance must be > 0");
    if (!(cfg.supply_resistance >= 0.0)) fail("supply_resistance must be >= 0");
    if (cfg.supply_resistance > 0.0 && !(cfg.decoupling_capacitance > 0.0))
        fail("decoupling_capacitance must be > 0 when supply_resistance > 0");
    if (!(cfg.supply_imbalance >= 0.0 && cfg.supply_imbalance < 2.0))
        fail("supply_imbalance must be in [0, 2)");
    if (!(cfg.internal_step > 0.0)) fail("internal_step must be > 0");
    if (cfg.internal_step * cfg.carrier_freq > 1.0 / 20.0)
        fail("internal_step too coarse: need at least 20 steps per carrier period");
    if (!(cfg.sample_rate > 0.0)) fail("sample_rate must be > 0");

    const double steps_per_sample = 1.0 / (cfg.internal_step * cfg.sample_rate);
    if (std::abs(steps_per_sample - std::round(steps_per_sample)) > 1e-6 ||
        steps_per_sample < 1.0 - 1e-9)
        fail("sample_rate must divide the internal step grid evenly");

    if (!(cfg.window_end > cfg.window_start) || !(cfg.window_start >= 0.0))
        fail("require 0 <= window_start < window_end");
    if (std::llround((cfg.window_end - cfg.window_start) * cfg.sample_rate) < 1)
        fail("window too short for one sample");
}

double triangle_carrier(double t, double freq, double amp) {
    if (!(freq > 0.0) || !(amp > 0.0))
        throw std::invalid_argument("triangle_carrier: freq and amp must be > 0");
    const double cycles = t * freq;
    const double phase = cycles - std::floor(cycles); // [0, 1)
    if (phase < 0.5) return -amp + 4.0 * amp * phase;
    return amp - 4.0 * amp * (phase - 0.5);
}

SwitchState pwm_state(double input_v, double carrier_v) {
    return input_v > carrier_v ? SwitchState::high : SwitchState::low;
}

double supply_voltage(double t, const CircuitConfig& cfg) {
    return cfg.supply_voltage *
           (1.0 + cfg.ripple_fraction * std::sin(two_pi * cfg.ripple_freq * t));
}

namespace {

Deriv derivative(double t, const State& x, bool high, const CircuitConfig& cfg,
                 bool rail_dynamics) {
    const double vs = supply_voltage(t, cfg);
    const double vp = rail_dynamics ? x.up : vs;
    const double vn = rail_dynamics ? x.un : vs;
    const double vb = high ? vp : -vn;

    Deriv d;
    double esr = cfg.filter_esr;
    if (cfg.filter_saturation_current > 0.0) {
        const double rel = x.il / cfg.filter_saturation_current;
        esr *= 1.0 + rel * rel; // core loss grows as the inductor saturates
    }
    d.il = (vb - x.vc - esr * x.il) / cfg.filter_inductance;
    d.vc = (x.il - x.vc / cfg.load_resistance) / cfg.filter_capacitance;
    if (rail_dynamics) {
        const double itop = high ? x.il : 0.0;  // drawn from the top rail
        const double ibot = high ? 0.0 : -x.il; // drawn from the bottom rail
        const double r_top = cfg.supply_resistance * (1.0 - 0.5 * cfg.supply_imbalance);
        const double r_bot = cfg.supply_resistance * (1.0 + 0.5 * cfg.supply_imbalance);
        d.up = ((vs - x.up) / r_top - itop) / cfg.decoupling_capacitance;
        d.un = ((vs - x.un) / r_bot - ibot) / cfg.decoupling_capacitance;
    }
    return d;
}

void rk4_piece(State& x, double ta, double tb, bool high,
               const CircuitConfig& cfg, bool rail_dynamics) {
    const double h = tb - ta;
    if (!(h > 0.0)) return;

    auto advance = [&](const Deriv& k, double scale) {
        State s = x;
        s.il += scale * k.il;
        s.vc += scale * k.vc;
        s.up += scale * k.up;
        s.un += scale * k.un;
        return s;
    };

    const Deriv k1 = derivative(ta, x, high, cfg, rail_dynamics);
    const Deriv k2 =
        derivative(ta + 0.5 * h, advance(k1, 0.5 * h), high, cfg, rail_dynamics);
    const Deriv k3 =
        derivative(ta + 0.5 * h, advance(k2, 0.5 * h), high, cfg, rail_dynamics);
    const Deriv k4 = derivative(tb, advance(k3, h), high, cfg, rail_dynamics);

    const double w = h / 6.0;
    x.il += w * (k1.il + 2.0 * k2.il + 2.0 * k3.il + k4.il);
    x.vc += w * (k1.vc + 2.0 * k2.vc + 2.0 * k3.vc + k4.vc);
    x.up += w * (k1.up + 2.0 * k2.up + 2.0 * k3.up + k4.up);
    x.un += w * (k1.un + 2.0 * k2.un + 2.0 * k3.un + k4.un);
}

} // namespace

SimulationResult simulate(const CircuitConfig& cfg) {
    validate(cfg);

    const double dt = cfg.internal_step;
    const long long decim = std::llround(1.0 / (dt * cfg.sample_rate));
    const long long start_step = std::llround(cfg.window_start / dt);
    const std::size_t count = static_cast<std::size_t>(
        std::llround((cfg.window_end - cfg.window_start) * cfg.sample_rate));
    const long long end_step = start_step + static_cast<long long>(count) * decim;
    const bool rail_dynamics = cfg.supply_resistance > 0.0;

    auto input_at = [&](double t) {
        return cfg.input_amp * std::sin(two_pi * cfg.input_freq * t);
    };
    auto is_high = [&](double t) {
        return pwm_state(input_at(t),
                         triangle_carrier(t, cfg.carrier_freq, cfg.carrier_amp)) ==
               SwitchState::high;
    };
    // Locates the comparator flip inside (lo, hi) by bisection; the carrier
    // slope dominates the input slope, so at most one flip per step.
    auto refine_edge = [&](double lo, double hi, bool state_lo) {
        for (int it = 0; it < 80 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (is_high(mid) == state_lo)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    State x;
    x.up = supply_voltage(0.0, cfg);
    x.un = x.up;

    SimulationResult res;
    res.input.sample_rate = cfg.sample_rate;
    res.input.start_time = static_cast<double>(start_step) * dt;
    res.output.sample_rate = cfg.sample_rate;
    res.output.start_time = res.input.start_time;
    res.input.samples.reserve(count);
    res.output.samples.reserve(count);

    // The output sample for t_k is a triangular-weighted average of v_out over
    // [t_k - 1/rate, t_k + 1/rate]: zero-phase anti-aliased decimation.  The
    // sinc^2 response of that window buries carrier-band switching products
    // near multiples of the sample rate, which would otherwise alias straight
    // onto the low-frequency bins under study.
    bool high = is_high(0.0);
    double acc_cur = 0.0, acc_next = 0.0; // weighted integrals, current/next sample
    double wgt_cur = 0.0, wgt_next = 0.0; // accumulated weight (time units)
    // May be negative when the window starts within one sample period of t=0;
    // the weight bookkeeping then normalizes the truncated first window.
    const long long first_step = start_step - decim;
    for (long long n = 0; n < end_step; ++n) {
        const double t0 = static_cast<double>(n) * dt;
        const double t1 = static_cast<double>(n + 1) * dt;

        if (n >= start_step && (n - start_step) % decim == 0 &&
            res.input.samples.size() < count)
            res.input.samples.push_back(input_at(t0));

        const bool next_high = is_high(t1);
        double area;
        if (next_high != high) {
            const double tx = refine_edge(t0, t1, high);
            const double v0 = x.vc;
            rk4_piece(x, t0, tx, high, cfg, rail_dynamics);
            const double vx = x.vc;
            rk4_piece(x, tx, t1, next_high, cfg, rail_dynamics);
            area = 0.5 * (v0 + vx) * (tx - t0) + 0.5 * (vx + x.vc) * (t1 - tx);
        } else {
            const double v0 = x.vc;
            rk4_piece(x, t0, t1, high, cfg, rail_dynamics);
            area = 0.5 * (v0 + x.vc) * (t1 - t0);
        }
        high = next_high;

        if (n >= first_step) {
            // Rising half of the next sample's window, falling half of the
            // current one's; weights indexed by position inside the block.
            const double rise =
                (static_cast<double>((n - first_step) % decim) + 0.5) /
                static_cast<double>(decim);
            acc_cur += (1.0 - rise) * area;
            wgt_cur += (1.0 - rise) * dt;
            acc_next += rise * area;
            wgt_next += rise * dt;
            if ((n + 1 - first_step) % decim == 0) {
                // A sample completes once its falling half has been covered;
                // the block ending at start_step only primes sample zero.
                if (n + 1 > start_step && res.output.samples.size() < count)
                    res.output.samples.push_back(acc_cur / wgt_cur);
                acc_cur = acc_next;
                wgt_cur = wgt_next;
                acc_next = 0.0;
                wgt_next = 0.0;
            }
        }

        if (!finite(x))
            throw DivergenceError(n + 1, "simulation diverged after " +
                                             std::to_string(n + 1) + " steps");
    }

    if (res.output.samples.size() != count)
        throw std::logic_error("sample window not fully covered");
    return res;
}

} // namespace cdpa
