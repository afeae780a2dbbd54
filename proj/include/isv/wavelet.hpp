#pragma once

#include <cstdint>
#include <vector>

#include "isv/image.hpp"

namespace isv {

enum class WaveletFamily : std::uint8_t {
    Haar = 0,
    Daubechies4 = 1,
};

/// Orthonormal analysis low-pass taps for the family. The high-pass and the
/// synthesis bank follow from the quadrature-mirror relation
/// g[k] = (-1)^k h[L-1-k].
std::vector<double> family_coefficients(WaveletFamily family);

struct DetailBands {
    Image lh;  // horizontal low, vertical high
    Image hl;  // horizontal high, vertical low
    Image hh;

    bool operator==(const DetailBands&) const = default;
};

struct SubbandDecomposition {
    int levels = 0;
    Image ll;                          // coarsest approximation
    std::vector<DetailBands> details;  // ordered finest-first
    int original_width = 0;            // geometry before padding
    int original_height = 0;

    bool operator==(const SubbandDecomposition&) const = default;
};

/// Separable 2D DWT, rows then columns per level, periodic extension,
/// recursively applied to the approximation plane. The input is first
/// padded by edge replication so both dimensions divide 2^levels; the
/// pre-padding geometry is recorded for idwt2 to crop back.
SubbandDecomposition dwt2(const Image& img, WaveletFamily family, int levels);

/// Inverse transform; reconstructs the padded plane and crops it to the
/// recorded original geometry.
Image idwt2(const SubbandDecomposition& decomp, WaveletFamily family);

} // namespace isv
