#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "isv/image.hpp"

namespace isv {

/// Container header ids; keep the numeric values stable.
enum class FilterTag : std::uint8_t {
    None = 0,
    Median = 1,
    Gaussian = 2,
    Mean = 3,
    AdaptiveWiener = 4,
};

struct FilterKind {
    FilterTag tag = FilterTag::None;
    int window_radius = 1;    // window edge = 2*radius + 1
    double sigma = 0.5;       // Gaussian only
    std::optional<double> noise_variance;  // Wiener only; estimated when absent
};

const char* filter_name(FilterTag tag);
std::optional<FilterTag> filter_tag_from_name(std::string_view name);

/// Median of the (2r+1)^2 window, edge replication at the borders.
Image median_filter(const Image& img, int radius);

/// Arithmetic mean over the window, edge replication.
Image mean_filter(const Image& img, int radius);

/// Convolution with the sampled 2D Gaussian exp(-(dx^2+dy^2)/(2 sigma^2)),
/// renormalized to sum exactly 1 over the (2r+1)^2 support.
Image gaussian_filter(const Image& img, double sigma, int radius);

/// Locally adaptive Wiener smoother. Per pixel, with window mean mu and
/// variance var: out = mu + gain * (x - mu) where
/// gain = max(var - nu, 0) / max(var, nu) (0 when both are zero) and nu is
/// the given noise variance or, when absent, the mean of all window
/// variances accumulated in row-major order.
Image adaptive_wiener_filter(const Image& img, int radius,
                             std::optional<double> noise_variance = {});

/// Dispatch on kind.tag; FilterTag::None returns the input unchanged.
Image apply_filter(const Image& img, const FilterKind& kind);

} // namespace isv
