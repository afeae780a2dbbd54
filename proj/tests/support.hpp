#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isv/image.hpp"
#include "isv/rng.hpp"

namespace test_support {

/// Seeded random image with samples in [0, 255].
inline isv::Image random_image(isv::Rng& rng, int width, int height) {
    std::vector<double> samples(std::size_t(width) * height);
    for (double& v : samples) v = rng.next_unit() * 255.0;
    return isv::Image(width, height, std::move(samples));
}

/// Seeded image with natural-ish structure: smooth gradients plus a few
/// hard rectangles and mild grain, so quantizers and filters have edges and
/// flats to chew on.
inline isv::Image structured_image(isv::Rng& rng, int width, int height) {
    isv::Image img(width, height);
    const double fx = 0.5 + rng.next_unit() * 3.0;
    const double fy = 0.5 + rng.next_unit() * 3.0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(x, y) = 128.0 + 60.0 * std::sin(fx * x / width * 6.28318) +
                           50.0 * std::cos(fy * y / height * 6.28318);
        }
    }
    const int rects = 2 + int(rng.next_below(4));
    for (int r = 0; r < rects; ++r) {
        const int x0 = int(rng.next_below(std::uint64_t(width)));
        const int y0 = int(rng.next_below(std::uint64_t(height)));
        const int w = 1 + int(rng.next_below(std::uint64_t(width - x0)));
        const int h = 1 + int(rng.next_below(std::uint64_t(height - y0)));
        const double level = rng.next_unit() * 255.0;
        for (int y = y0; y < y0 + h; ++y) {
            for (int x = x0; x < x0 + w; ++x) img.at(x, y) = level;
        }
    }
    for (double& v : img.samples()) {
        v = std::clamp(v + (rng.next_unit() - 0.5) * 8.0, 0.0, 255.0);
    }
    return img;
}

/// Unique path in the build's scratch space.
inline std::filesystem::path temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "isv_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace test_support
