#include "isv/huffman.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <queue>
#include <string>

namespace isv {

namespace {

struct Node {
    std::uint64_t weight = 0;
    int left = -1;
    int right = -1;
    int symbol = -1;  // leaves only
};

// Heap ordering: weight, then leaves before internal nodes, then lower
// symbol / earlier-built subtree. Fully deterministic, so equal frequency
// maps always yield the same lengths.
struct QueueEntry {
    std::uint64_t weight;
    int tie_class;  // 0 = leaf, 1 = internal
    int tie_key;    // symbol or creation order
    int node;
};

struct QueueCompare {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.tie_class != b.tie_class) return a.tie_class > b.tie_class;
        return a.tie_key > b.tie_key;
    }
};

// Standard code-length histogram adjustment: fold leaves deeper than the
// cap back into the tree, keeping the Kraft sum valid.
void limit_lengths(std::vector<int>& bl_count, int max_depth) {
    for (int i = max_depth; i > kMaxCodeLength; --i) {
        while (bl_count[std::size_t(i)] > 0) {
            int j = i - 2;
            while (bl_count[std::size_t(j)] == 0) --j;
            bl_count[std::size_t(i)] -= 2;
            bl_count[std::size_t(i - 1)] += 1;
            bl_count[std::size_t(j + 1)] += 2;
            bl_count[std::size_t(j)] -= 1;
        }
    }
}

std::uint64_t kraft_scaled(const std::vector<std::uint8_t>& lengths) {
    std::uint64_t sum = 0;  // in units of 2^-kMaxCodeLength
    for (std::uint8_t len : lengths) {
        if (len > 0) sum += std::uint64_t{1} << (kMaxCodeLength - len);
    }
    return sum;
}

struct CanonicalCoder {
    // per-symbol codes for encoding
    std::vector<std::uint32_t> codes;
    // per-length decoding data
    std::array<std::uint32_t, kMaxCodeLength + 1> first_code{};
    std::array<int, kMaxCodeLength + 1> count{};
    std::array<int, kMaxCodeLength + 1> offset{};
    std::vector<std::uint16_t> sorted_symbols;  // (length, symbol) order
};

CanonicalCoder make_coder(const HuffmanTable& table) {
    CanonicalCoder coder;
    coder.codes.assign(table.lengths.size(), 0);
    for (std::size_t s = 0; s < table.lengths.size(); ++s) {
        const int len = table.lengths[s];
        if (len > 0) {
            ++coder.count[std::size_t(len)];
            coder.sorted_symbols.push_back(static_cast<std::uint16_t>(s));
        }
    }
    std::stable_sort(coder.sorted_symbols.begin(), coder.sorted_symbols.end(),
                     [&](std::uint16_t a, std::uint16_t b) {
                         if (table.lengths[a] != table.lengths[b])
                             return table.lengths[a] < table.lengths[b];
                         return a < b;
                     });
    std::uint32_t code = 0;
    int cursor = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        code <<= 1;
        coder.first_code[std::size_t(len)] = code;
        coder.offset[std::size_t(len)] = cursor;
        code += std::uint32_t(coder.count[std::size_t(len)]);
        cursor += coder.count[std::size_t(len)];
    }
    std::uint32_t assign = 0;
    int prev_len = 0;
    for (std::uint16_t s : coder.sorted_symbols) {
        const int len = table.lengths[s];
        assign <<= (len - prev_len);
        coder.codes[s] = assign;
        ++assign;
        prev_len = len;
    }
    return coder;
}

} // namespace

HuffmanTable build_table(std::span<const std::uint64_t> frequencies) {
    std::vector<int> used;
    for (std::size_t s = 0; s < frequencies.size(); ++s) {
        if (frequencies[s] > 0) used.push_back(static_cast<int>(s));
    }
    if (used.empty()) throw EmptyAlphabet("all symbol frequencies are zero");
    if (frequencies.size() > 65535) throw Error("alphabet too large for a 16-bit symbol id");

    HuffmanTable table;
    table.lengths.assign(frequencies.size(), 0);

    if (used.size() == 1) {
        table.lengths[std::size_t(used[0])] = 1;  // keep decode well-defined
        return table;
    }

    std::vector<Node> nodes;
    nodes.reserve(used.size() * 2);
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueCompare> queue;
    for (int s : used) {
        nodes.push_back({frequencies[std::size_t(s)], -1, -1, s});
        queue.push({frequencies[std::size_t(s)], 0, s, static_cast<int>(nodes.size()) - 1});
    }
    int creation = 0;
    while (queue.size() > 1) {
        const QueueEntry a = queue.top();
        queue.pop();
        const QueueEntry b = queue.top();
        queue.pop();
        nodes.push_back({a.weight + b.weight, a.node, b.node, -1});
        queue.push({a.weight + b.weight, 1, creation++, static_cast<int>(nodes.size()) - 1});
    }

    // leaf depths, iteratively
    std::vector<int> depth(nodes.size(), 0);
    std::vector<int> stack{queue.top().node};
    int max_depth = 0;
    while (!stack.empty()) {
        const int n = stack.back();
        stack.pop_back();
        if (nodes[std::size_t(n)].symbol >= 0) {
            max_depth = std::max(max_depth, depth[std::size_t(n)]);
            continue;
        }
        depth[std::size_t(nodes[std::size_t(n)].left)] = depth[std::size_t(n)] + 1;
        depth[std::size_t(nodes[std::size_t(n)].right)] = depth[std::size_t(n)] + 1;
        stack.push_back(nodes[std::size_t(n)].left);
        stack.push_back(nodes[std::size_t(n)].right);
    }

    if (max_depth <= kMaxCodeLength) {
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            if (nodes[n].symbol >= 0) {
                table.lengths[std::size_t(nodes[n].symbol)] =
                    static_cast<std::uint8_t>(depth[n]);
            }
        }
        return table;
    }

    // over-deep tree: clamp the length histogram, then hand lengths back to
    // symbols from most to least frequent
    std::vector<int> bl_count(std::size_t(max_depth) + 1, 0);
    std::vector<std::pair<int, int>> leaf_depths;  // (depth, symbol)
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (nodes[n].symbol >= 0) {
            ++bl_count[std::size_t(depth[n])];
            leaf_depths.push_back({depth[n], nodes[n].symbol});
        }
    }
    limit_lengths(bl_count, max_depth);
    std::sort(leaf_depths.begin(), leaf_depths.end());
    std::size_t cursor = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        for (int i = 0; i < bl_count[std::size_t(len)]; ++i) {
            table.lengths[std::size_t(leaf_depths[cursor++].second)] =
                static_cast<std::uint8_t>(len);
        }
    }
    return table;
}

BitPayload encode(std::span<const std::uint16_t> symbols, const HuffmanTable& table) {
    const CanonicalCoder coder = make_coder(table);
    BitPayload payload;
    std::uint8_t current = 0;
    int filled = 0;
    for (std::uint16_t s : symbols) {
        if (s >= table.lengths.size() || table.lengths[s] == 0) {
            throw UnknownSymbol("symbol " + std::to_string(s) + " has no code");
        }
        const int len = table.lengths[s];
        const std::uint32_t code = coder.codes[s];
        for (int bit = len - 1; bit >= 0; --bit) {
            current = static_cast<std::uint8_t>((current << 1) | ((code >> bit) & 1u));
            if (++filled == 8) {
                payload.bytes.push_back(current);
                current = 0;
                filled = 0;
            }
        }
        payload.bit_count += std::uint64_t(len);
    }
    if (filled > 0) {
        payload.bytes.push_back(static_cast<std::uint8_t>(current << (8 - filled)));
    }
    return payload;
}

std::vector<std::uint16_t> decode(const BitPayload& payload, const HuffmanTable& table,
                                  std::size_t symbol_count) {
    if (payload.bytes.size() != (payload.bit_count + 7) / 8) {
        throw CorruptStream("payload byte count does not match bit count");
    }
    const CanonicalCoder coder = make_coder(table);
    std::vector<std::uint16_t> out;
    out.reserve(symbol_count);
    std::uint64_t pos = 0;
    while (out.size() < symbol_count) {
        std::uint32_t code = 0;
        int len = 0;
        for (;;) {
            if (pos >= payload.bit_count) {
                throw CorruptStream("bit stream exhausted mid-symbol");
            }
            const std::uint8_t byte = payload.bytes[std::size_t(pos >> 3)];
            const int bit = (byte >> (7 - (pos & 7))) & 1;
            ++pos;
            code = (code << 1) | std::uint32_t(bit);
            ++len;
            if (len > kMaxCodeLength) {
                throw CorruptStream("invalid prefix (no code of length <= 16 matches)");
            }
            const std::uint32_t first = coder.first_code[std::size_t(len)];
            const int count = coder.count[std::size_t(len)];
            if (count > 0 && code >= first && code < first + std::uint32_t(count)) {
                out.push_back(coder.sorted_symbols[std::size_t(
                    coder.offset[std::size_t(len)] + int(code - first))]);
                break;
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> serialize_table(const HuffmanTable& table) {
    const std::size_t n = table.lengths.size();
    std::vector<std::uint8_t> bytes;
    bytes.reserve(2 + n);
    bytes.push_back(static_cast<std::uint8_t>(n & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
    bytes.insert(bytes.end(), table.lengths.begin(), table.lengths.end());
    return bytes;
}

HuffmanTable deserialize_table(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw CorruptTable("table shorter than its size field");
    const std::size_t n = std::size_t(bytes[0]) | (std::size_t(bytes[1]) << 8);
    if (n == 0) throw CorruptTable("zero-symbol table");
    if (bytes.size() != 2 + n) throw CorruptTable("table byte count mismatch");

    HuffmanTable table;
    table.lengths.assign(bytes.begin() + 2, bytes.end());
    bool any_used = false;
    for (std::uint8_t len : table.lengths) {
        if (len > kMaxCodeLength) throw CorruptTable("code length above the cap");
        any_used |= len > 0;
    }
    if (!any_used) throw CorruptTable("table has no used symbols");
    if (kraft_scaled(table.lengths) > (std::uint64_t{1} << kMaxCodeLength)) {
        throw CorruptTable("Kraft inequality violated");
    }
    return table;
}

} // namespace isv
