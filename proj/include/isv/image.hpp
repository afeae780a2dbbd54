#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "isv/errors.hpp"

namespace isv {

/// Row-major grayscale sample plane. Samples are kept as doubles end to end
/// because wavelet coefficients and codewords are fractional; rounding back
/// to 8-bit happens only when a file is written.
class Image {
public:
    Image() = default;

    Image(int width, int height, double fill = 0.0);

    /// Takes ownership of `samples`; throws Error if the geometry is
    /// inconsistent or any sample is non-finite.
    Image(int width, int height, std::vector<double> samples);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return samples_.empty(); }
    std::size_t pixel_count() const { return samples_.size(); }

    double at(int x, int y) const { return samples_[std::size_t(y) * width_ + x]; }
    double& at(int x, int y) { return samples_[std::size_t(y) * width_ + x]; }

    /// Clamped read: coordinates outside the plane replicate the nearest
    /// edge sample. This is the boundary rule shared by the filters.
    double at_clamped(int x, int y) const;

    std::span<const double> samples() const { return samples_; }
    std::span<double> samples() { return samples_; }

    bool operator==(const Image&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

/// Reads a PGM (P2/P5, maxval <= 255) or uncompressed BMP (8-bit paletted or
/// 24-bit BGR, bottom-up). 24-bit pixels are converted to luma
/// round(0.299 R + 0.587 G + 0.114 B).
Image load_image(const std::filesystem::path& path);

/// Writes binary PGM (P5); samples are rounded and clamped to [0, 255].
/// Returns the number of bytes written, which equals the file size.
std::size_t save_image(const Image& img, const std::filesystem::path& path);

/// Byte size save_image would produce, without touching the disk.
std::size_t pgm_encoded_size(const Image& img);

/// Grows the plane to the smallest multiple of `multiple` in each dimension
/// by replicating edge samples; the original region is left untouched.
Image pad_replicate(const Image& img, int multiple);

/// Top-left width x height sub-plane.
Image crop(const Image& img, int width, int height);

} // namespace isv
