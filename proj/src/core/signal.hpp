#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cdpa {

/// Uniformly sampled voltage sequence.
struct SignalTrace {
    double sample_rate = 0.0; ///< Hz
    double start_time = 0.0;  ///< seconds, time of samples[0]
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t k) const {
        return start_time + static_cast<double>(k) / sample_rate;
    }
};

/// Writes paired traces as `time_s,input_v,output_v` rows at full double
/// precision (17 significant digits).  Both traces must share the same grid.
void write_trace_csv(const std::string& path, const SignalTrace& input,
                     const SignalTrace& output);

/// Writes a single value column with the given header, same precision rules.
void write_series_csv(const std::string& path, const std::string& time_header,
                      const std::string& value_header, const SignalTrace& trace);

/// Formats one double with 17 significant digits (shared CSV convention).
std::string format_full(double v);

} // namespace cdpa
