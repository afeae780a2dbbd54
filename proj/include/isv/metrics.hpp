#pragma once

#include <cstddef>
#include <string>

#include "isv/codec.hpp"
#include "isv/image.hpp"

namespace isv {

struct MetricsReport {
    double mse = 0.0;
    double psnr_db = 0.0;    // +infinity when the images are identical
    double tau_percent = 0.0;
    std::size_t t_c = 0;         // total container bytes
    std::size_t t_c_payload = 0; // entropy-coded payload bytes only
    std::size_t t_o = 0;         // original size in bytes
    FilterTag filter = FilterTag::None;
    double runtime_ms = 0.0;
};

/// (1/(W*H)) * sum of squared sample differences.
double mse(const Image& a, const Image& b);

/// 10 * log10(255^2 / MSE); +infinity when MSE is zero.
double psnr(const Image& a, const Image& b);

/// (1 - t_c/t_o) * 100. Negative when the "compressed" file is larger;
/// reported as-is. Throws ZeroOriginalSize when t_o == 0.
double compression_ratio(std::size_t t_c, std::size_t t_o);

/// Runs compress + decompress and fills every field. MSE compares the
/// unfiltered original against the decoded image. t_o is the source file
/// size when the caller knows it (t_o_override), else the image's P5 size.
MetricsReport evaluate(const Image& original, const CodecOptions& opts,
                       std::size_t t_o_override = 0);

std::string metrics_csv_header();
std::string to_csv_row(const MetricsReport& report);
std::string to_json(const MetricsReport& report);

} // namespace isv
