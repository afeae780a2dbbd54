#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace isv {

/// mt19937_64 with hand-rolled draws. The standard pins down the engine but
/// not the distributions, and training must be bit-identical everywhere, so
/// no <random> distribution is used anywhere in the pipeline.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, bound), rejection sampled, bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t u;
        do {
            u = engine_();
        } while (u >= limit);
        return u % bound;
    }

    /// Uniform in [0, 1).
    double next_unit() { return double(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[next_below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace isv
