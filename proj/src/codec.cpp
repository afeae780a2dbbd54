#include "isv/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace isv {

namespace {

constexpr char kMagic[4] = {'I', 'S', 'V', '1'};

int padded_to(int value, int multiple) {
    return ((value + multiple - 1) / multiple) * multiple;
}

// ---- byte writer / reader -------------------------------------------------

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

struct Cursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    std::span<const std::uint8_t> take(std::size_t n) {
        if (bytes.size() - pos < n) throw CorruptStream("container truncated");
        auto s = bytes.subspan(pos, n);
        pos += n;
        return s;
    }
    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() {
        auto s = take(2);
        return static_cast<std::uint16_t>(s[0] | (s[1] << 8));
    }
    std::uint32_t u32() {
        auto s = take(4);
        return std::uint32_t(s[0]) | (std::uint32_t(s[1]) << 8) |
               (std::uint32_t(s[2]) << 16) | (std::uint32_t(s[3]) << 24);
    }
    float f32() { return std::bit_cast<float>(u32()); }
    bool done() const { return pos == bytes.size(); }
};

// ---- scalar quantization helpers -------------------------------------------

struct U8Grid {
    float min;
    float scale;
};

U8Grid fit_grid(std::span<const double> values) {
    double lo = values.empty() ? 0.0 : values[0];
    double hi = lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const float min = static_cast<float>(lo);
    const float scale = std::max(static_cast<float>((hi - lo) / 255.0), 1e-6f);
    return {min, scale};
}

std::uint8_t to_grid(double v, const U8Grid& grid) {
    const double q = std::round((v - double(grid.min)) / double(grid.scale));
    return static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
}

double from_grid(std::uint8_t q, const U8Grid& grid) {
    return double(grid.min) + double(grid.scale) * q;
}

void check_payload_padding(const BitPayload& payload) {
    if (payload.bytes.size() != std::size_t((payload.bit_count + 7) / 8)) {
        throw CorruptStream("payload byte count does not match bit count");
    }
    const int tail_bits = static_cast<int>(payload.bit_count % 8);
    if (tail_bits != 0) {
        const std::uint8_t mask = static_cast<std::uint8_t>(0xff >> tail_bits);
        if ((payload.bytes.back() & mask) != 0) {
            throw CorruptStream("nonzero padding bits");
        }
    }
}

HuffmanTable read_embedded_table(Cursor& cur) {
    // peek the size field, then hand the exact slice to the entropy module
    if (cur.bytes.size() - cur.pos < 2) throw CorruptStream("container truncated");
    const std::size_t n = std::size_t(cur.bytes[cur.pos]) |
                          (std::size_t(cur.bytes[cur.pos + 1]) << 8);
    auto slice = cur.take(2 + n);
    try {
        return deserialize_table(slice);
    } catch (const CorruptTable& e) {
        throw CorruptStream(std::string("embedded Huffman table: ") + e.what());
    }
}

BitPayload read_payload(Cursor& cur) {
    BitPayload payload;
    payload.bit_count = cur.u32();
    auto s = cur.take(std::size_t((payload.bit_count + 7) / 8));
    payload.bytes.assign(s.begin(), s.end());
    check_payload_padding(payload);
    return payload;
}

IsomCodebook dequantize_codebook(const QuantizedCodewords& q, int dim) {
    IsomCodebook cb;
    cb.dim = dim;
    cb.count = q.count;
    cb.codewords.reserve(q.values.size());
    const U8Grid grid{q.min, q.scale};
    for (std::uint8_t v : q.values) cb.codewords.push_back(from_grid(v, grid));
    cb.node_errors.assign(std::size_t(cb.count), 0.0);
    return cb;
}

struct SubbandShape {
    int width;
    int height;
};

// Detail subband dims per section, serialization order (finest level first;
// lh, hl, hh within a level).
std::vector<SubbandShape> detail_shapes(int ll_width, int ll_height, int levels) {
    std::vector<SubbandShape> shapes;
    for (int i = 0; i < levels; ++i) {
        const int scale = 1 << (levels - 1 - i);
        for (int b = 0; b < 3; ++b) shapes.push_back({ll_width * scale, ll_height * scale});
    }
    return shapes;
}

DetailSection encode_detail_plane(const Image& plane) {
    DetailSection section;
    const U8Grid grid = fit_grid(plane.samples());
    section.min = grid.min;
    section.scale = grid.scale;
    std::vector<std::uint16_t> symbols(plane.pixel_count());
    std::vector<std::uint64_t> freqs(256, 0);
    for (std::size_t i = 0; i < plane.pixel_count(); ++i) {
        symbols[i] = to_grid(plane.samples()[i], grid);
        ++freqs[symbols[i]];
    }
    section.table = build_table(freqs);
    section.payload = encode(symbols, section.table);
    return section;
}

Image decode_detail_plane(const DetailSection& section, int width, int height) {
    const std::size_t n = std::size_t(width) * height;
    const std::vector<std::uint16_t> symbols = decode(section.payload, section.table, n);
    const U8Grid grid{section.min, section.scale};
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = from_grid(static_cast<std::uint8_t>(symbols[i]), grid);
    }
    return Image(width, height, std::move(samples));
}

void check_table_shape(const HuffmanTable& table) {
    bool any = false;
    for (std::uint8_t len : table.lengths) {
        if (len > kMaxCodeLength) throw CorruptStream("code length above the cap");
        any |= len > 0;
    }
    if (!any) throw CorruptStream("table has no used symbols");
}

void validate_stream(const CompressedStream& s) {
    if (s.filter > FilterTag::AdaptiveWiener) throw CorruptStream("bad filter id");
    if (s.wavelet > WaveletFamily::Daubechies4) throw CorruptStream("bad wavelet id");
    if (s.levels < 1 || s.levels > 12) throw CorruptStream("bad level count");
    if (s.block_edge < 1) throw CorruptStream("bad block edge");
    if (s.original_width < 1 || s.original_height < 1) throw CorruptStream("bad geometry");

    const int divisor = 1 << s.levels;
    if (s.ll_width != padded_to(s.original_width, divisor) / divisor ||
        s.ll_height != padded_to(s.original_height, divisor) / divisor) {
        throw CorruptStream("approximation dims inconsistent with geometry");
    }
    if (s.codebook.count < 1) throw CorruptStream("empty codebook");
    if (!std::isfinite(s.codebook.min) || !std::isfinite(s.codebook.scale) ||
        s.codebook.scale <= 0.0f) {
        throw CorruptStream("bad codebook quantization grid");
    }
    const std::size_t dim = std::size_t(s.block_edge) * s.block_edge;
    if (s.codebook.values.size() != dim * s.codebook.count) {
        throw CorruptStream("codebook byte count mismatch");
    }
    if (s.index_table.symbol_count() != int(s.codebook.count)) {
        throw CorruptStream("index alphabet does not match the codebook");
    }
    check_table_shape(s.index_table);
    const std::uint32_t grid_cols = std::uint32_t((s.ll_width + s.block_edge - 1) / s.block_edge);
    const std::uint32_t grid_rows = std::uint32_t((s.ll_height + s.block_edge - 1) / s.block_edge);
    if (s.index_count != grid_cols * grid_rows) {
        throw CorruptStream("index count does not match the block grid");
    }
    check_payload_padding(s.index_payload);
    if (s.code_details) {
        if (s.details.size() != std::size_t(3) * s.levels) {
            throw CorruptStream("detail section count mismatch");
        }
        for (const DetailSection& d : s.details) {
            if (!std::isfinite(d.min) || !std::isfinite(d.scale) || d.scale <= 0.0f) {
                throw CorruptStream("bad detail quantization grid");
            }
            check_table_shape(d.table);
            check_payload_padding(d.payload);
        }
    } else if (!s.details.empty()) {
        throw CorruptStream("detail sections present but flag unset");
    }
}

} // namespace

std::size_t CompressedStream::byte_size() const {
    std::size_t total = 4 + 1 + 4 * 1 + 4 * 2 + 2;  // magic..codebook size
    total += 4 + 4 + codebook.values.size();
    total += 2 + std::size_t(index_table.symbol_count());
    total += 4 + 4 + index_payload.bytes.size();
    total += 1;
    for (const DetailSection& d : details) {
        total += 4 + 4 + 2 + std::size_t(d.table.symbol_count()) + 4 + d.payload.bytes.size();
    }
    return total;
}

std::size_t CompressedStream::payload_byte_size() const {
    std::size_t total = index_payload.bytes.size();
    for (const DetailSection& d : details) total += d.payload.bytes.size();
    return total;
}

CompressedStream compress(const Image& img, const CodecOptions& opts) {
    if (img.empty()) throw EmptyInput("cannot compress an empty image");
    if (img.width() > 65535 || img.height() > 65535) {
        throw Error("image dims above the container's 16-bit limit");
    }
    if (opts.block_edge < 1 || opts.block_edge > 255) {
        throw Error("block edge must be in [1, 255]");
    }

    const Image filtered = apply_filter(img, opts.filter);
    const SubbandDecomposition decomp = dwt2(filtered, opts.wavelet, opts.levels);
    const BlockSet blocks = extract_blocks(decomp.ll, opts.block_edge);
    const IsomCodebook trained = train(blocks, opts.isom);

    CompressedStream stream;
    stream.filter = opts.filter.tag;
    stream.wavelet = opts.wavelet;
    stream.levels = static_cast<std::uint8_t>(opts.levels);
    stream.block_edge = static_cast<std::uint8_t>(opts.block_edge);
    stream.original_width = static_cast<std::uint16_t>(img.width());
    stream.original_height = static_cast<std::uint16_t>(img.height());
    stream.ll_width = static_cast<std::uint16_t>(decomp.ll.width());
    stream.ll_height = static_cast<std::uint16_t>(decomp.ll.height());

    const U8Grid grid = fit_grid(trained.codewords);
    stream.codebook.min = grid.min;
    stream.codebook.scale = grid.scale;
    stream.codebook.count = static_cast<std::uint16_t>(trained.count);
    stream.codebook.values.reserve(trained.codewords.size());
    for (double v : trained.codewords) stream.codebook.values.push_back(to_grid(v, grid));

    // quantize against the stored codebook so encoder and decoder agree
    const IsomCodebook stored = dequantize_codebook(stream.codebook, blocks.dim);
    const std::vector<std::uint16_t> indices = quantize(blocks, stored);
    std::vector<std::uint64_t> freqs(std::size_t(stored.count), 0);
    for (std::uint16_t idx : indices) ++freqs[idx];
    stream.index_table = build_table(freqs);
    stream.index_count = static_cast<std::uint32_t>(indices.size());
    stream.index_payload = encode(indices, stream.index_table);

    stream.code_details = opts.code_details;
    if (opts.code_details) {
        for (const DetailBands& bands : decomp.details) {
            stream.details.push_back(encode_detail_plane(bands.lh));
            stream.details.push_back(encode_detail_plane(bands.hl));
            stream.details.push_back(encode_detail_plane(bands.hh));
        }
    }
    return stream;
}

Image decompress(const CompressedStream& stream) {
    validate_stream(stream);
    const int dim = int(stream.block_edge) * stream.block_edge;
    const IsomCodebook cb = dequantize_codebook(stream.codebook, dim);

    const int grid_cols = (stream.ll_width + stream.block_edge - 1) / stream.block_edge;
    const int grid_rows = (stream.ll_height + stream.block_edge - 1) / stream.block_edge;

    Image ll;
    try {
        const std::vector<std::uint16_t> indices =
            decode(stream.index_payload, stream.index_table, stream.index_count);
        ll = reconstruct(indices, cb, grid_cols, grid_rows,
                         stream.ll_width, stream.ll_height, stream.block_edge);
    } catch (const IndexOutOfRange& e) {
        throw CorruptStream(std::string("index payload: ") + e.what());
    }

    SubbandDecomposition decomp;
    decomp.levels = stream.levels;
    decomp.ll = std::move(ll);
    decomp.original_width = stream.original_width;
    decomp.original_height = stream.original_height;
    const auto shapes = detail_shapes(stream.ll_width, stream.ll_height, stream.levels);
    for (int i = 0; i < stream.levels; ++i) {
        DetailBands bands;
        const SubbandShape& shape = shapes[std::size_t(i) * 3];
        if (stream.code_details) {
            bands.lh = decode_detail_plane(stream.details[std::size_t(i) * 3], shape.width, shape.height);
            bands.hl = decode_detail_plane(stream.details[std::size_t(i) * 3 + 1], shape.width, shape.height);
            bands.hh = decode_detail_plane(stream.details[std::size_t(i) * 3 + 2], shape.width, shape.height);
        } else {
            bands.lh = Image(shape.width, shape.height, 0.0);
            bands.hl = Image(shape.width, shape.height, 0.0);
            bands.hh = Image(shape.width, shape.height, 0.0);
        }
        decomp.details.push_back(std::move(bands));
    }

    Image out = idwt2(decomp, stream.wavelet);
    for (double& v : out.samples()) {
        v = std::clamp(std::round(v), 0.0, 255.0);
    }
    return out;
}

std::vector<std::uint8_t> write_container(const CompressedStream& stream) {
    validate_stream(stream);
    std::vector<std::uint8_t> out;
    out.reserve(stream.byte_size());
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u8(out, kContainerVersion);
    put_u8(out, static_cast<std::uint8_t>(stream.filter));
    put_u8(out, static_cast<std::uint8_t>(stream.wavelet));
    put_u8(out, stream.levels);
    put_u8(out, stream.block_edge);
    put_u16(out, stream.original_width);
    put_u16(out, stream.original_height);
    put_u16(out, stream.ll_width);
    put_u16(out, stream.ll_height);
    put_u16(out, stream.codebook.count);
    put_f32(out, stream.codebook.min);
    put_f32(out, stream.codebook.scale);
    out.insert(out.end(), stream.codebook.values.begin(), stream.codebook.values.end());
    const auto table_bytes = serialize_table(stream.index_table);
    out.insert(out.end(), table_bytes.begin(), table_bytes.end());
    put_u32(out, stream.index_count);
    put_u32(out, static_cast<std::uint32_t>(stream.index_payload.bit_count));
    out.insert(out.end(), stream.index_payload.bytes.begin(), stream.index_payload.bytes.end());
    put_u8(out, stream.code_details ? 1 : 0);
    for (const DetailSection& d : stream.details) {
        put_f32(out, d.min);
        put_f32(out, d.scale);
        const auto t = serialize_table(d.table);
        out.insert(out.end(), t.begin(), t.end());
        put_u32(out, static_cast<std::uint32_t>(d.payload.bit_count));
        out.insert(out.end(), d.payload.bytes.begin(), d.payload.bytes.end());
    }
    return out;
}

CompressedStream read_container(std::span<const std::uint8_t> bytes) {
    Cursor cur{bytes};
    const auto magic = cur.take(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw BadMagic("not an ISV1 container");
    const std::uint8_t version = cur.u8();
    if (version != kContainerVersion) {
        throw VersionMismatch("container version " + std::to_string(version) +
                              " unsupported (expected " + std::to_string(kContainerVersion) + ")");
    }

    CompressedStream s;
    s.filter = static_cast<FilterTag>(cur.u8());
    s.wavelet = static_cast<WaveletFamily>(cur.u8());
    s.levels = cur.u8();
    s.block_edge = cur.u8();
    s.original_width = cur.u16();
    s.original_height = cur.u16();
    s.ll_width = cur.u16();
    s.ll_height = cur.u16();
    s.codebook.count = cur.u16();
    s.codebook.min = cur.f32();
    s.codebook.scale = cur.f32();
    if (s.block_edge < 1) throw CorruptStream("bad block edge");
    const std::size_t dim = std::size_t(s.block_edge) * s.block_edge;
    {
        auto v = cur.take(dim * s.codebook.count);
        s.codebook.values.assign(v.begin(), v.end());
    }
    s.index_table = read_embedded_table(cur);
    s.index_count = cur.u32();
    s.index_payload = read_payload(cur);
    const std::uint8_t flag = cur.u8();
    if (flag > 1) throw CorruptStream("bad detail flag");
    s.code_details = flag == 1;
    if (s.code_details) {
        if (s.levels < 1 || s.levels > 12) throw CorruptStream("bad level count");
        for (int i = 0; i < 3 * s.levels; ++i) {
            DetailSection d;
            d.min = cur.f32();
            d.scale = cur.f32();
            d.table = read_embedded_table(cur);
            d.payload = read_payload(cur);
            s.details.push_back(std::move(d));
        }
    }
    if (!cur.done()) throw CorruptStream("trailing bytes after container");
    validate_stream(s);
    return s;
}

} // namespace isv
