#include "core/signal.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "core/errors.hpp"

namespace cdpa {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("write failed: " + path);
}

} // namespace

void write_trace_csv(const std::string& path, const SignalTrace& input,
                     const SignalTrace& output) {
    if (input.size() != output.size())
        throw std::invalid_argument("trace length mismatch");
    if (input.sample_rate != output.sample_rate ||
        input.start_time != output.start_time)
        throw std::invalid_argument("trace grid mismatch");

    std::string body = "time_s,input_v,output_v\n";
    for (std::size_t k = 0; k < input.size(); ++k) {
        body += format_full(input.time_at(k));
        body += ',';
        body += format_full(input.samples[k]);
        body += ',';
        body += format_full(output.samples[k]);
        body += '\n';
    }
    write_text_file(path, body);
}

void write_series_csv(const std::string& path, const std::string& time_header,
                      const std::string& value_header, const SignalTrace& trace) {
    std::string body = time_header + "," + value_header + "\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        body += format_full(trace.time_at(k));
        body += ',';
        body += format_full(trace.samples[k]);
        body += '\n';
    }
    write_text_file(path, body);
}

} // namespace cdpa
