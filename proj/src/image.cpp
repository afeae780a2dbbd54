#include "isv/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

namespace isv {

namespace {

void check_geometry(int width, int height) {
    if (width < 1 || height < 1) {
        throw Error("image geometry must be at least 1x1, got " +
                    std::to_string(width) + "x" + std::to_string(height));
    }
}

std::uint8_t to_byte(double v) {
    double r = std::round(v);
    r = std::clamp(r, 0.0, 255.0);
    return static_cast<std::uint8_t>(r);
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>(
        std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed on " + path.string());
    }
    return bytes;
}

// --- PNM header tokens: whitespace separated, '#' comments run to EOL ---

struct PnmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    int next_int(const char* what) {
        skip_space_and_comments();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw CorruptFile(std::string("missing ") + what + " in PNM header");
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000'000) throw CorruptFile(std::string(what) + " out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

Image load_pgm(std::span<const std::uint8_t> bytes, const std::filesystem::path& path) {
    const bool ascii = bytes[1] == '2';
    PnmCursor cur{bytes, 2};
    const int width = cur.next_int("width");
    const int height = cur.next_int("height");
    const int maxval = cur.next_int("maxval");
    if (width < 1 || height < 1) throw CorruptFile("bad PGM geometry in " + path.string());
    if (maxval < 1 || maxval > 255) {
        throw UnsupportedFormat("PGM maxval " + std::to_string(maxval) +
                                " unsupported (must be <= 255)");
    }
    const std::size_t n = std::size_t(width) * height;
    std::vector<double> samples(n);
    if (ascii) {
        for (std::size_t i = 0; i < n; ++i) {
            samples[i] = cur.next_int("pixel");
            if (samples[i] > maxval) throw CorruptFile("P2 sample above maxval");
        }
    } else {
        // single whitespace byte separates the header from the payload
        if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos])) {
            throw CorruptFile("malformed P5 header in " + path.string());
        }
        ++cur.pos;
        if (bytes.size() - cur.pos < n) {
            throw CorruptFile("truncated P5 payload in " + path.string());
        }
        for (std::size_t i = 0; i < n; ++i) samples[i] = bytes[cur.pos + i];
    }
    return Image(width, height, std::move(samples));
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
    return std::uint16_t(b[at] | (b[at + 1] << 8));
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
    return std::uint32_t(b[at]) | (std::uint32_t(b[at + 1]) << 8) |
           (std::uint32_t(b[at + 2]) << 16) | (std::uint32_t(b[at + 3]) << 24);
}

Image load_bmp(std::span<const std::uint8_t> b, const std::filesystem::path& path) {
    if (b.size() < 54) throw CorruptFile("BMP too short: " + path.string());
    const std::uint32_t pixel_offset = le32(b, 10);
    const std::uint32_t header_size = le32(b, 14);
    if (header_size < 40) {
        throw UnsupportedFormat("BMP header size " + std::to_string(header_size) +
                                " (need BITMAPINFOHEADER)");
    }
    const std::int32_t width = static_cast<std::int32_t>(le32(b, 18));
    const std::int32_t height = static_cast<std::int32_t>(le32(b, 22));
    const std::uint16_t planes = le16(b, 26);
    const std::uint16_t bpp = le16(b, 28);
    const std::uint32_t compression = le32(b, 30);
    if (planes != 1 || compression != 0) {
        throw UnsupportedFormat("compressed or multi-plane BMP unsupported");
    }
    if (bpp != 8 && bpp != 24) {
        throw UnsupportedFormat("BMP bit depth " + std::to_string(bpp) +
                                " unsupported (need 8 or 24)");
    }
    if (width < 1 || height < 1) {
        throw UnsupportedFormat("BMP must be bottom-up with positive dimensions");
    }

    const std::uint8_t* palette = nullptr;
    std::uint32_t palette_entries = 0;
    if (bpp == 8) {
        palette_entries = le32(b, 46);
        if (palette_entries == 0) palette_entries = 256;
        const std::size_t palette_at = 14 + header_size;
        if (palette_at + std::size_t(palette_entries) * 4 > b.size()) {
            throw CorruptFile("truncated BMP palette in " + path.string());
        }
        palette = b.data() + palette_at;
    }

    const std::size_t bytes_per_px = bpp / 8;
    const std::size_t row_stride = (std::size_t(width) * bytes_per_px + 3) & ~std::size_t{3};
    if (pixel_offset + row_stride * height > b.size()) {
        throw CorruptFile("truncated BMP payload in " + path.string());
    }

    std::vector<double> samples(std::size_t(width) * height);
    for (std::int32_t y = 0; y < height; ++y) {
        // rows are stored bottom-up
        const std::uint8_t* row = b.data() + pixel_offset + row_stride * (height - 1 - y);
        for (std::int32_t x = 0; x < width; ++x) {
            std::uint8_t value;
            if (bpp == 8) {
                const std::uint8_t idx = row[x];
                if (idx >= palette_entries) throw CorruptFile("BMP palette index out of range");
                const std::uint8_t* e = palette + std::size_t(idx) * 4;  // B,G,R,reserved
                value = luma(e[2], e[1], e[0]);
            } else {
                const std::uint8_t* px = row + std::size_t(x) * 3;  // B,G,R
                value = luma(px[2], px[1], px[0]);
            }
            samples[std::size_t(y) * width + x] = value;
        }
    }
    return Image(width, height, std::move(samples));
}

} // namespace

Image::Image(int width, int height, double fill)
    : width_(width), height_(height) {
    check_geometry(width, height);
    if (!std::isfinite(fill)) throw Error("non-finite fill value");
    samples_.assign(std::size_t(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    check_geometry(width, height);
    if (samples_.size() != std::size_t(width) * height) {
        throw Error("sample count does not match geometry");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw Error("non-finite sample");
    }
}

double Image::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y);
}

Image load_image(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
        return load_pgm(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
        return load_bmp(bytes, path);
    }
    throw UnsupportedFormat("unrecognized image magic in " + path.string());
}

std::size_t save_image(const Image& img, const std::filesystem::path& path) {
    if (img.empty()) throw Error("cannot save an empty image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::vector<std::uint8_t> row(img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) row[x] = to_byte(img.at(x, y));
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
    out.flush();
    if (!out) throw IoError("write failed on " + path.string());
    return header.size() + img.pixel_count();
}

std::size_t pgm_encoded_size(const Image& img) {
    const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    return header.size() + img.pixel_count();
}

Image pad_replicate(const Image& img, int multiple) {
    if (multiple < 1) throw Error("pad multiple must be >= 1");
    const auto round_up = [multiple](int v) { return ((v + multiple - 1) / multiple) * multiple; };
    const int new_w = round_up(img.width());
    const int new_h = round_up(img.height());
    if (new_w == img.width() && new_h == img.height()) return img;
    Image out(new_w, new_h);
    for (int y = 0; y < new_h; ++y) {
        const int sy = std::min(y, img.height() - 1);
        for (int x = 0; x < new_w; ++x) {
            out.at(x, y) = img.at(std::min(x, img.width() - 1), sy);
        }
    }
    return out;
}

Image crop(const Image& img, int width, int height) {
    if (width < 1 || height < 1 || width > img.width() || height > img.height()) {
        throw OutOfBounds("crop " + std::to_string(width) + "x" + std::to_string(height) +
                          " out of bounds for " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()));
    }
    if (width == img.width() && height == img.height()) return img;
    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) out.at(x, y) = img.at(x, y);
    }
    return out;
}

} // namespace isv
