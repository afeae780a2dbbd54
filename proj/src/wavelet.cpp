#include "isv/wavelet.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace isv {

std::vector<double> family_coefficients(WaveletFamily family) {
    switch (family) {
        case WaveletFamily::Haar: {
            const double h = 1.0 / std::sqrt(2.0);
            return {h, h};
        }
        case WaveletFamily::Daubechies4: {
            const double s3 = std::sqrt(3.0);
            const double norm = 4.0 * std::sqrt(2.0);
            return {(1.0 + s3) / norm, (3.0 + s3) / norm,
                    (3.0 - s3) / norm, (1.0 - s3) / norm};
        }
    }
    throw UnknownFamily("unknown wavelet family id " +
                        std::to_string(static_cast<int>(family)));
}

namespace {

std::vector<double> highpass_from(const std::vector<double>& h) {
    std::vector<double> g(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double v = h[h.size() - 1 - k];
        g[k] = (k % 2 == 0) ? v : -v;
    }
    return g;
}

// One analysis pass over a length-n periodic signal (n even):
// approx[k] = sum_m h[m] x[(2k+m) mod n], detail likewise with g.
void analyze_1d(const double* x, int n, const std::vector<double>& h,
                const std::vector<double>& g, double* approx, double* detail) {
    const int taps = static_cast<int>(h.size());
    const int half = n / 2;
    for (int k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (int m = 0; m < taps; ++m) {
            const double v = x[(2 * k + m) % n];
            a += h[m] * v;
            d += g[m] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

// Transposed synthesis: x[(2k+m) mod n] += approx[k] h[m] + detail[k] g[m].
void synthesize_1d(const double* approx, const double* detail, int n,
                   const std::vector<double>& h, const std::vector<double>& g,
                   double* x) {
    const int taps = static_cast<int>(h.size());
    const int half = n / 2;
    for (int i = 0; i < n; ++i) x[i] = 0.0;
    for (int k = 0; k < half; ++k) {
        for (int m = 0; m < taps; ++m) {
            x[(2 * k + m) % n] += approx[k] * h[m] + detail[k] * g[m];
        }
    }
}

struct LevelBands {
    Image ll, lh, hl, hh;
};

LevelBands analyze_level(const Image& plane, const std::vector<double>& h,
                         const std::vector<double>& g) {
    const int w = plane.width(), hgt = plane.height();
    const int hw = w / 2, hh = hgt / 2;

    // rows: [approx | detail]
    Image rowpass(w, hgt);
    std::vector<double> line(w), a(hw), d(hw);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) line[x] = plane.at(x, y);
        analyze_1d(line.data(), w, h, g, a.data(), d.data());
        for (int k = 0; k < hw; ++k) {
            rowpass.at(k, y) = a[k];
            rowpass.at(hw + k, y) = d[k];
        }
    }

    // columns of both halves
    LevelBands out{Image(hw, hh), Image(hw, hh), Image(hw, hh), Image(hw, hh)};
    std::vector<double> col(hgt), ca(hh), cd(hh);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < hgt; ++y) col[y] = rowpass.at(x, y);
        analyze_1d(col.data(), hgt, h, g, ca.data(), cd.data());
        const bool high_x = x >= hw;
        const int sx = high_x ? x - hw : x;
        for (int k = 0; k < hh; ++k) {
            if (high_x) {
                out.hl.at(sx, k) = ca[k];
                out.hh.at(sx, k) = cd[k];
            } else {
                out.ll.at(sx, k) = ca[k];
                out.lh.at(sx, k) = cd[k];
            }
        }
    }
    return out;
}

Image synthesize_level(const Image& ll, const DetailBands& bands,
                       const std::vector<double>& h, const std::vector<double>& g) {
    const int hw = ll.width(), hh = ll.height();
    const int w = hw * 2, hgt = hh * 2;

    // columns first (inverse of the rows-then-columns analysis)
    Image rowpass(w, hgt);
    std::vector<double> ca(hh), cd(hh), col(hgt);
    for (int x = 0; x < w; ++x) {
        const bool high_x = x >= hw;
        const int sx = high_x ? x - hw : x;
        for (int k = 0; k < hh; ++k) {
            ca[k] = high_x ? bands.hl.at(sx, k) : ll.at(sx, k);
            cd[k] = high_x ? bands.hh.at(sx, k) : bands.lh.at(sx, k);
        }
        synthesize_1d(ca.data(), cd.data(), hgt, h, g, col.data());
        for (int y = 0; y < hgt; ++y) rowpass.at(x, y) = col[y];
    }

    Image plane(w, hgt);
    std::vector<double> ra(hw), rd(hw), line(w);
    for (int y = 0; y < hgt; ++y) {
        for (int k = 0; k < hw; ++k) {
            ra[k] = rowpass.at(k, y);
            rd[k] = rowpass.at(hw + k, y);
        }
        synthesize_1d(ra.data(), rd.data(), w, h, g, line.data());
        for (int x = 0; x < w; ++x) plane.at(x, y) = line[x];
    }
    return plane;
}

} // namespace

SubbandDecomposition dwt2(const Image& img, WaveletFamily family, int levels) {
    if (levels < 1 || levels > 12) {
        throw InvalidLevels("levels must be in [1, 12], got " + std::to_string(levels));
    }
    const int min_dim = std::min(img.width(), img.height());
    if ((1 << levels) > 2 * min_dim) {
        throw InvalidLevels("2^levels = " + std::to_string(1 << levels) +
                            " too deep for a min dimension of " + std::to_string(min_dim));
    }
    const std::vector<double> h = family_coefficients(family);
    const std::vector<double> g = highpass_from(h);

    SubbandDecomposition decomp;
    decomp.levels = levels;
    decomp.original_width = img.width();
    decomp.original_height = img.height();

    Image plane = pad_replicate(img, 1 << levels);
    for (int level = 0; level < levels; ++level) {
        LevelBands bands = analyze_level(plane, h, g);
        decomp.details.push_back({std::move(bands.lh), std::move(bands.hl), std::move(bands.hh)});
        plane = std::move(bands.ll);
    }
    decomp.ll = std::move(plane);
    return decomp;
}

Image idwt2(const SubbandDecomposition& decomp, WaveletFamily family) {
    const int levels = decomp.levels;
    if (levels < 1 || decomp.details.size() != std::size_t(levels)) {
        throw ShapeMismatch("decomposition level count inconsistent");
    }
    int w = decomp.ll.width(), hgt = decomp.ll.height();
    for (int i = levels - 1; i >= 0; --i) {
        const DetailBands& bands = decomp.details[std::size_t(i)];
        if (bands.lh.width() != w || bands.lh.height() != hgt ||
            bands.hl.width() != w || bands.hl.height() != hgt ||
            bands.hh.width() != w || bands.hh.height() != hgt) {
            throw ShapeMismatch("detail plane dims inconsistent at level " + std::to_string(i + 1));
        }
        w *= 2;
        hgt *= 2;
    }
    if (decomp.original_width < 1 || decomp.original_height < 1 ||
        decomp.original_width > w || decomp.original_height > hgt) {
        throw ShapeMismatch("original geometry inconsistent with subband dims");
    }

    const std::vector<double> h = family_coefficients(family);
    const std::vector<double> g = highpass_from(h);

    Image plane = decomp.ll;
    for (int i = levels - 1; i >= 0; --i) {
        plane = synthesize_level(plane, decomp.details[std::size_t(i)], h, g);
    }
    return crop(plane, decomp.original_width, decomp.original_height);
}

} // namespace isv
