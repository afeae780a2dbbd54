#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isv/errors.hpp"

namespace isv {

/// Canonical Huffman code. Code lengths fully determine the codes: symbols
/// are assigned codes in (length, symbol) order, so only the lengths are
/// ever stored or compared. Length 0 marks an unused symbol. Lengths are
/// capped at 16; the builder rebalances in the unlikely case the optimal
/// tree is deeper.
struct HuffmanTable {
    std::vector<std::uint8_t> lengths;

    int symbol_count() const { return static_cast<int>(lengths.size()); }

    bool operator==(const HuffmanTable& other) const { return lengths == other.lengths; }
};

inline constexpr int kMaxCodeLength = 16;

/// Optimal prefix code lengths from symbol frequencies, canonicalized.
/// Priority-queue ties break toward lower symbols, then earlier-built
/// subtrees, so equal frequency maps give identical tables. A single-symbol
/// alphabet gets a 1-bit code. Throws EmptyAlphabet if every count is zero.
HuffmanTable build_table(std::span<const std::uint64_t> frequencies);

/// Packed code bits, MSB-first; the final byte is zero-padded.
struct BitPayload {
    std::uint64_t bit_count = 0;
    std::vector<std::uint8_t> bytes;

    bool operator==(const BitPayload&) const = default;
};

BitPayload encode(std::span<const std::uint16_t> symbols, const HuffmanTable& table);

std::vector<std::uint16_t> decode(const BitPayload& payload, const HuffmanTable& table,
                                  std::size_t symbol_count);

/// symbol_count (u16 LE) followed by one length byte per symbol.
std::vector<std::uint8_t> serialize_table(const HuffmanTable& table);

/// Inverse of serialize_table; the span must be exactly one table. Throws
/// CorruptTable on size mismatch, zero used symbols, lengths over the cap,
/// or a Kraft sum above one.
HuffmanTable deserialize_table(std::span<const std::uint8_t> bytes);

} // namespace isv
