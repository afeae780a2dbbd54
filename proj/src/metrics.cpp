#include "isv/metrics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace isv {

namespace {

void check_same_shape(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ShapeMismatch("image geometries differ: " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
    }
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

} // namespace

double mse(const Image& a, const Image& b) {
    check_same_shape(a, b);
    double acc = 0.0;
    const auto sa = a.samples();
    const auto sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double d = sa[i] - sb[i];
        acc += d * d;
    }
    return acc / double(sa.size());
}

double psnr(const Image& a, const Image& b) {
    const double err = mse(a, b);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / err);
}

double compression_ratio(std::size_t t_c, std::size_t t_o) {
    if (t_o == 0) throw ZeroOriginalSize("original size is zero");
    return (1.0 - double(t_c) / double(t_o)) * 100.0;
}

MetricsReport evaluate(const Image& original, const CodecOptions& opts,
                       std::size_t t_o_override) {
    const auto start = std::chrono::steady_clock::now();
    const CompressedStream stream = compress(original, opts);
    const Image decoded = decompress(stream);
    const auto stop = std::chrono::steady_clock::now();

    MetricsReport report;
    report.mse = mse(original, decoded);
    report.psnr_db = psnr(original, decoded);
    report.t_c = stream.byte_size();
    report.t_c_payload = stream.payload_byte_size();
    report.t_o = t_o_override != 0 ? t_o_override : pgm_encoded_size(original);
    report.tau_percent = compression_ratio(report.t_c, report.t_o);
    report.filter = opts.filter.tag;
    report.runtime_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    return report;
}

std::string metrics_csv_header() {
    return "mse,psnr_db,tau_percent,t_c,t_c_payload,t_o,filter,runtime_ms";
}

std::string to_csv_row(const MetricsReport& r) {
    std::ostringstream os;
    os << format_double(r.mse) << ',' << format_double(r.psnr_db) << ','
       << format_double(r.tau_percent) << ',' << r.t_c << ',' << r.t_c_payload << ','
       << r.t_o << ',' << filter_name(r.filter) << ',' << format_double(r.runtime_ms);
    return os.str();
}

std::string to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["mse"] = r.mse;
    if (std::isfinite(r.psnr_db)) {
        j["psnr_db"] = r.psnr_db;
    } else {
        j["psnr_db"] = nullptr;  // JSON has no infinity
    }
    j["tau_percent"] = r.tau_percent;
    j["t_c"] = r.t_c;
    j["t_c_payload"] = r.t_c_payload;
    j["t_o"] = r.t_o;
    j["filter"] = filter_name(r.filter);
    j["runtime_ms"] = r.runtime_ms;
    return j.dump();
}

} // namespace isv
