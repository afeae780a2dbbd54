#include "isv/filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace isv {

const char* filter_name(FilterTag tag) {
    switch (tag) {
        case FilterTag::None: return "none";
        case FilterTag::Median: return "median";
        case FilterTag::Gaussian: return "gaussian";
        case FilterTag::Mean: return "mean";
        case FilterTag::AdaptiveWiener: return "wiener";
    }
    return "unknown";
}

std::optional<FilterTag> filter_tag_from_name(std::string_view name) {
    if (name == "none") return FilterTag::None;
    if (name == "median") return FilterTag::Median;
    if (name == "gaussian") return FilterTag::Gaussian;
    if (name == "mean") return FilterTag::Mean;
    if (name == "wiener") return FilterTag::AdaptiveWiener;
    return std::nullopt;
}

namespace {

void check_radius(int radius) {
    if (radius < 1) throw Error("filter radius must be >= 1");
}

} // namespace

Image median_filter(const Image& img, int radius) {
    check_radius(radius);
    Image out(img.width(), img.height());
    std::vector<double> window;
    window.reserve(std::size_t(2 * radius + 1) * (2 * radius + 1));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            window.clear();
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    window.push_back(img.at_clamped(x + dx, y + dy));
                }
            }
            auto mid = window.begin() + window.size() / 2;  // odd count, exact middle
            std::nth_element(window.begin(), mid, window.end());
            out.at(x, y) = *mid;
        }
    }
    return out;
}

Image mean_filter(const Image& img, int radius) {
    check_radius(radius);
    Image out(img.width(), img.height());
    const double inv_n = 1.0 / (double(2 * radius + 1) * (2 * radius + 1));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double sum = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    sum += img.at_clamped(x + dx, y + dy);
                }
            }
            out.at(x, y) = sum * inv_n;
        }
    }
    return out;
}

Image gaussian_filter(const Image& img, double sigma, int radius) {
    check_radius(radius);
    if (!(sigma > 0.0)) throw Error("gaussian sigma must be > 0");
    const int edge = 2 * radius + 1;
    std::vector<double> kernel(std::size_t(edge) * edge);
    double sum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-(double(dx) * dx + double(dy) * dy) / (2.0 * sigma * sigma));
            kernel[std::size_t(dy + radius) * edge + (dx + radius)] = w;
            sum += w;
        }
    }
    for (double& w : kernel) w /= sum;

    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    acc += kernel[std::size_t(dy + radius) * edge + (dx + radius)] *
                           img.at_clamped(x + dx, y + dy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

Image adaptive_wiener_filter(const Image& img, int radius,
                             std::optional<double> noise_variance) {
    check_radius(radius);
    if (noise_variance && !(*noise_variance >= 0.0)) {
        throw Error("noise variance must be >= 0");
    }
    const std::size_t n_px = img.pixel_count();
    std::vector<double> local_mean(n_px);
    std::vector<double> local_var(n_px);
    const double inv_n = 1.0 / (double(2 * radius + 1) * (2 * radius + 1));

    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double sum = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    sum += img.at_clamped(x + dx, y + dy);
                }
            }
            const double mu = sum * inv_n;
            double sq = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const double d = img.at_clamped(x + dx, y + dy) - mu;
                    sq += d * d;
                }
            }
            const std::size_t i = std::size_t(y) * img.width() + x;
            local_mean[i] = mu;
            local_var[i] = sq * inv_n;
        }
    }

    double nu;
    if (noise_variance) {
        nu = *noise_variance;
    } else {
        // fixed row-major accumulation keeps the estimate reproducible
        double acc = 0.0;
        for (double v : local_var) acc += v;
        nu = acc / double(n_px);
    }

    Image out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const std::size_t i = std::size_t(y) * img.width() + x;
            const double var = local_var[i];
            const double denom = std::max(var, nu);
            const double gain = denom > 0.0 ? std::max(var - nu, 0.0) / denom : 0.0;
            out.at(x, y) = local_mean[i] + gain * (img.at(x, y) - local_mean[i]);
        }
    }
    return out;
}

Image apply_filter(const Image& img, const FilterKind& kind) {
    switch (kind.tag) {
        case FilterTag::None: return img;
        case FilterTag::Median: return median_filter(img, kind.window_radius);
        case FilterTag::Gaussian: return gaussian_filter(img, kind.sigma, kind.window_radius);
        case FilterTag::Mean: return mean_filter(img, kind.window_radius);
        case FilterTag::AdaptiveWiener:
            return adaptive_wiener_filter(img, kind.window_radius, kind.noise_variance);
    }
    throw Error("unknown filter tag");
}

} // namespace isv
