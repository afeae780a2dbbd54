#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isv/filters.hpp"
#include "isv/huffman.hpp"
#include "isv/image.hpp"
#include "isv/isom.hpp"
#include "isv/wavelet.hpp"

namespace isv {

struct CodecOptions {
    FilterKind filter;
    WaveletFamily wavelet = WaveletFamily::Haar;
    int levels = 1;
    int block_edge = 8;
    IsomConfig isom;
    bool code_details = false;  // default discards detail subbands
};

/// Codewords stored as bytes against a global min/scale grid,
/// value = min + scale * byte. scale = (max - min) / 255, floored at 1e-6.
struct QuantizedCodewords {
    float min = 0.0f;
    float scale = 1.0f;
    std::uint16_t count = 0;
    std::vector<std::uint8_t> values;  // count * dim

    bool operator==(const QuantizedCodewords&) const = default;
};

/// One uniform-quantized, Huffman-coded detail subband (code_details mode).
struct DetailSection {
    float min = 0.0f;
    float scale = 1.0f;
    HuffmanTable table;
    BitPayload payload;

    bool operator==(const DetailSection&) const = default;
};

/// Parsed "ISV1" container. The serialized byte length is the compressed
/// size T_c used by the metrics module.
struct CompressedStream {
    FilterTag filter = FilterTag::None;
    WaveletFamily wavelet = WaveletFamily::Haar;
    std::uint8_t levels = 1;
    std::uint8_t block_edge = 8;
    std::uint16_t original_width = 0;
    std::uint16_t original_height = 0;
    std::uint16_t ll_width = 0;   // approximation plane dims after DWT padding
    std::uint16_t ll_height = 0;
    QuantizedCodewords codebook;
    HuffmanTable index_table;
    std::uint32_t index_count = 0;
    BitPayload index_payload;
    bool code_details = false;
    std::vector<DetailSection> details;  // finest level first; lh, hl, hh within a level

    bool operator==(const CompressedStream&) const = default;

    /// Exact serialized size in bytes (== write_container(*this).size()).
    std::size_t byte_size() const;

    /// Entropy-coded payload bytes only (indices plus detail sections).
    std::size_t payload_byte_size() const;
};

inline constexpr std::uint8_t kContainerVersion = 1;

/// filter -> dwt2 -> extract_blocks of the approximation plane -> train ->
/// quantize -> Huffman. Block indices are matched against the stored
/// (byte-quantized) codebook so encoder and decoder agree on distances.
/// Detail subbands are dropped unless opts.code_details is set.
CompressedStream compress(const Image& img, const CodecOptions& opts);

/// decode indices -> rebuild approximation -> inverse DWT (details zeroed or
/// decoded) -> crop to original geometry -> clamp to [0,255] and round.
Image decompress(const CompressedStream& stream);

std::vector<std::uint8_t> write_container(const CompressedStream& stream);

/// Parses and validates a container; the span must hold exactly one
/// container. Throws BadMagic, VersionMismatch, or CorruptStream.
CompressedStream read_container(std::span<const std::uint8_t> bytes);

} // namespace isv
