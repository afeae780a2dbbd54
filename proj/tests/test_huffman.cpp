#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "isv/huffman.hpp"
#include "isv/rng.hpp"

using isv::BitPayload;
using isv::HuffmanTable;

namespace {

std::vector<std::uint64_t> count_frequencies(const std::vector<std::uint16_t>& symbols,
                                             std::size_t alphabet) {
    std::vector<std::uint64_t> freqs(alphabet, 0);
    for (std::uint16_t s : symbols) ++freqs[s];
    return freqs;
}

double empirical_entropy(const std::vector<std::uint64_t>& freqs, std::size_t total) {
    double h = 0.0;
    for (std::uint64_t f : freqs) {
        if (f == 0) continue;
        const double p = double(f) / double(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<std::uint16_t> random_stream(isv::Rng& rng, std::size_t len, int alphabet) {
    std::vector<std::uint16_t> s(len);
    for (auto& v : s) v = std::uint16_t(rng.next_below(std::uint64_t(alphabet)));
    return s;
}

} // namespace

TEST_CASE("two equal symbols get one bit each") {
    const std::uint64_t freqs[] = {1, 1};
    const HuffmanTable t = isv::build_table(freqs);
    CHECK(t.lengths == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("textbook lengths for {5,2,1,1}") {
    // merges: 1+1 -> 2, then 2+2 -> 4, then 4+5 -> 9
    const std::uint64_t freqs[] = {5, 2, 1, 1};
    const HuffmanTable t = isv::build_table(freqs);
    CHECK(t.lengths == std::vector<std::uint8_t>{1, 2, 3, 3});

    SUBCASE("canonical codes: a=0 b=10 c=110 d=111, so 'aab' is 4 bits 0|0|10") {
        const std::uint16_t aab[] = {0, 0, 1};
        const BitPayload p = isv::encode(aab, t);
        CHECK(p.bit_count == 4);
        REQUIRE(p.bytes.size() == 1);
        CHECK(p.bytes[0] == 0b0010'0000);
        const auto back = isv::decode(p, t, 3);
        CHECK(back == std::vector<std::uint16_t>{0, 0, 1});
    }
}

TEST_CASE("single-symbol alphabet uses a 1-bit code") {
    const std::uint64_t freqs[] = {7};
    const HuffmanTable t = isv::build_table(freqs);
    CHECK(t.lengths == std::vector<std::uint8_t>{1});
    const std::vector<std::uint16_t> stream(7, 0);
    const BitPayload p = isv::encode(stream, t);
    CHECK(p.bit_count == 7);
    CHECK(isv::decode(p, t, 7) == stream);
}

TEST_CASE("empty inputs") {
    const std::vector<std::uint64_t> zeros(5, 0);
    CHECK_THROWS_AS(isv::build_table(zeros), isv::EmptyAlphabet);

    const std::uint64_t freqs[] = {3, 1};
    const HuffmanTable t = isv::build_table(freqs);
    const BitPayload p = isv::encode(std::span<const std::uint16_t>{}, t);
    CHECK(p.bit_count == 0);
    CHECK(p.bytes.empty());
    CHECK(isv::decode(p, t, 0).empty());
    CHECK(isv::decode(BitPayload{4, {0x50}}, t, 0).empty());
}

TEST_CASE("encode rejects unknown symbols") {
    const std::uint64_t freqs[] = {3, 0, 1};
    const HuffmanTable t = isv::build_table(freqs);
    const std::uint16_t unused[] = {1};
    CHECK_THROWS_AS(isv::encode(unused, t), isv::UnknownSymbol);
    const std::uint16_t outside[] = {9};
    CHECK_THROWS_AS(isv::encode(outside, t), isv::UnknownSymbol);
}

TEST_CASE("decode failure modes") {
    const std::uint64_t freqs[] = {5, 2, 1, 1};
    const HuffmanTable t = isv::build_table(freqs);
    const std::uint16_t syms[] = {3, 3, 2};
    BitPayload p = isv::encode(syms, t);

    SUBCASE("asking for more symbols than encoded") {
        CHECK_THROWS_AS(isv::decode(p, t, 10), isv::CorruptStream);
    }
    SUBCASE("byte count inconsistent with bit count") {
        p.bytes.push_back(0);
        CHECK_THROWS_AS(isv::decode(p, t, 3), isv::CorruptStream);
    }
    SUBCASE("invalid prefix under an incomplete table") {
        const std::uint64_t one[] = {9};
        const HuffmanTable single = isv::build_table(one);  // only code '0'
        const BitPayload ones{1, {0x80}};
        CHECK_THROWS_AS(isv::decode(ones, single, 1), isv::CorruptStream);
    }
}

TEST_CASE("table serialization") {
    SUBCASE("documented byte layout") {
        HuffmanTable t;
        t.lengths = {1, 2, 3, 3};
        const auto bytes = isv::serialize_table(t);
        CHECK(bytes == std::vector<std::uint8_t>{0x04, 0x00, 0x01, 0x02, 0x03, 0x03});
        CHECK(isv::deserialize_table(bytes) == t);
    }
    SUBCASE("kraft violation rejected") {
        const std::vector<std::uint8_t> bad = {0x03, 0x00, 0x01, 0x01, 0x01};
        CHECK_THROWS_AS(isv::deserialize_table(bad), isv::CorruptTable);
    }
    SUBCASE("zero-symbol and unused-only tables rejected") {
        CHECK_THROWS_AS(isv::deserialize_table(std::vector<std::uint8_t>{0x00, 0x00}),
                        isv::CorruptTable);
        CHECK_THROWS_AS(isv::deserialize_table(std::vector<std::uint8_t>{0x02, 0x00, 0x00, 0x00}),
                        isv::CorruptTable);
    }
    SUBCASE("size mismatch rejected") {
        CHECK_THROWS_AS(isv::deserialize_table(std::vector<std::uint8_t>{0x02, 0x00, 0x01}),
                        isv::CorruptTable);
    }
}

TEST_CASE("roundtrip property over random streams") {
    isv::Rng rng(20240817);
    for (int trial = 0; trial < 60; ++trial) {
        const int alphabet = 1 + int(rng.next_below(256));
        const std::size_t len = 1 + rng.next_below(3000);
        const auto stream = random_stream(rng, len, alphabet);
        const auto freqs = count_frequencies(stream, std::size_t(alphabet));
        const HuffmanTable t = isv::build_table(freqs);
        const BitPayload p = isv::encode(stream, t);
        CHECK(p.bytes.size() == (p.bit_count + 7) / 8);
        if (p.bit_count % 8 != 0) {
            CHECK((p.bytes.back() & (0xff >> (p.bit_count % 8))) == 0);  // zero padding
        }
        const auto back = isv::decode(p, t, stream.size());
        REQUIRE(back == stream);
    }
}

TEST_CASE("compression beats fixed-length and stays within a bit of entropy") {
    isv::Rng rng(7777);
    for (int trial = 0; trial < 20; ++trial) {
        const int alphabet = 2 + int(rng.next_below(200));
        const std::size_t len = 1000 + rng.next_below(5000);
        // skewed distribution: symbol s with weight ~ 1/(s+1)
        std::vector<std::uint16_t> stream(len);
        for (auto& v : stream) {
            const double u = rng.next_unit();
            v = std::uint16_t(std::min<double>(alphabet - 1, u * u * alphabet));
        }
        const auto freqs = count_frequencies(stream, std::size_t(alphabet));
        const HuffmanTable t = isv::build_table(freqs);
        const BitPayload p = isv::encode(stream, t);

        int used = 0;
        for (auto f : freqs) used += f > 0;
        if (used < 2) continue;
        const double fixed_bits = std::ceil(std::log2(double(used))) * double(len);
        CHECK(double(p.bit_count) <= fixed_bits);

        const double h = empirical_entropy(freqs, len);
        const double bits_per_symbol = double(p.bit_count) / double(len);
        CHECK(bits_per_symbol >= h - 1e-9);
        CHECK(bits_per_symbol <= h + 1.0);
    }
}

TEST_CASE("canonical determinism: equal frequency maps, identical bytes") {
    isv::Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::uint64_t> freqs(64);
        for (auto& f : freqs) f = rng.next_below(100);
        freqs[0] = 1;  // keep at least one used symbol
        const auto a = isv::serialize_table(isv::build_table(freqs));
        const auto b = isv::serialize_table(isv::build_table(freqs));
        CHECK(a == b);
    }
}

TEST_CASE("pathological skew stays within the length cap") {
    // Fibonacci-like counts force maximal depth; the builder must clamp to 16
    // and keep the code decodable.
    std::vector<std::uint64_t> freqs;
    std::uint64_t a = 1, b = 1;
    for (int i = 0; i < 40; ++i) {
        freqs.push_back(a);
        const std::uint64_t next = a + b;
        a = b;
        b = next;
    }
    const HuffmanTable t = isv::build_table(freqs);
    int max_len = 0;
    for (auto len : t.lengths) max_len = std::max<int>(max_len, len);
    CHECK(max_len <= isv::kMaxCodeLength);

    std::vector<std::uint16_t> stream;
    for (std::uint16_t s = 0; s < freqs.size(); ++s) {
        stream.insert(stream.end(), 3, s);
    }
    const BitPayload p = isv::encode(stream, t);
    CHECK(isv::decode(p, t, stream.size()) == stream);
}
