#include "isv/isom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "isv/rng.hpp"

namespace isv {

namespace {

void check_dims(int vec_len, int cb_dim) {
    if (vec_len != cb_dim) {
        throw DimensionMismatch("vector length " + std::to_string(vec_len) +
                                " != codebook dim " + std::to_string(cb_dim));
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// BMU plus its squared distance, lowest index on ties.
std::pair<int, double> nearest(const IsomCodebook& cb, std::span<const double> v) {
    int best = 0;
    double best_d = squared_distance(cb.codeword(0), v);
    for (int j = 1; j < cb.count; ++j) {
        const double d = squared_distance(cb.codeword(j), v);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return {best, best_d};
}

// Assigns every block to its BMU; returns mean squared error per sample and
// refreshes cb.node_errors.
double evaluate_assignment(const BlockSet& blocks, IsomCodebook& cb) {
    cb.node_errors.assign(std::size_t(cb.count), 0.0);
    double total = 0.0;
    for (int i = 0; i < blocks.count(); ++i) {
        const auto [j, d] = nearest(cb, blocks.block(i));
        cb.node_errors[std::size_t(j)] += d;
        total += d;
    }
    return total / (double(blocks.count()) * cb.dim);
}

IsomCodebook sample_initial(const BlockSet& blocks, const IsomConfig& cfg, Rng& rng) {
    IsomCodebook cb;
    cb.dim = blocks.dim;
    cb.count = cfg.initial_nodes;
    cb.codewords.reserve(std::size_t(cfg.initial_nodes) * blocks.dim);
    const int n = blocks.count();
    std::vector<int> picks;
    if (n >= cfg.initial_nodes) {
        // partial Fisher-Yates: distinct training blocks
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        for (int k = 0; k < cfg.initial_nodes; ++k) {
            const std::size_t r = std::size_t(k) + rng.next_below(std::uint64_t(n - k));
            std::swap(pool[std::size_t(k)], pool[r]);
            picks.push_back(pool[std::size_t(k)]);
        }
    } else {
        for (int k = 0; k < cfg.initial_nodes; ++k) {
            picks.push_back(static_cast<int>(rng.next_below(std::uint64_t(n))));
        }
    }
    for (int idx : picks) {
        const auto b = blocks.block(idx);
        cb.codewords.insert(cb.codewords.end(), b.begin(), b.end());
    }
    cb.node_errors.assign(std::size_t(cb.count), 0.0);
    return cb;
}

void check_config(const BlockSet& blocks, const IsomConfig& cfg) {
    if (blocks.count() < 1) throw EmptyInput("no training blocks");
    if (cfg.initial_nodes < 1 || cfg.initial_nodes > cfg.max_nodes) {
        throw Error("need 1 <= initial_nodes <= max_nodes");
    }
    if (cfg.max_nodes > 65535) throw Error("max_nodes must fit a 16-bit index");
    if (!(cfg.alpha_start < 1.0) || !(cfg.alpha_end > 0.0) ||
        cfg.alpha_end > cfg.alpha_start) {
        throw Error("need 0 < alpha_end <= alpha_start < 1");
    }
    if (cfg.epochs_per_round < 1 || cfg.rounds < 1) {
        throw Error("epochs_per_round and rounds must be >= 1");
    }
}

// Splits the node with the largest accumulated error: the original moves
// -eps along the all-ones direction and a +eps copy is inserted next to it
// in the chain.
void split_worst_node(IsomCodebook& cb, double split_epsilon) {
    int worst = 0;
    for (int j = 1; j < cb.count; ++j) {
        if (cb.node_errors[std::size_t(j)] > cb.node_errors[std::size_t(worst)]) worst = j;
    }
    const auto w = cb.codeword(worst);
    double norm_sq = 0.0;
    for (double v : w) norm_sq += v * v;
    const double eps = std::max(split_epsilon * std::sqrt(norm_sq), 1e-6);
    const double step = eps / std::sqrt(double(cb.dim));

    std::vector<double> plus(w.begin(), w.end());
    for (int k = 0; k < cb.dim; ++k) {
        cb.codewords[std::size_t(worst) * cb.dim + k] -= step;
        plus[std::size_t(k)] += step;
    }
    cb.codewords.insert(cb.codewords.begin() + std::ptrdiff_t(worst + 1) * cb.dim,
                        plus.begin(), plus.end());
    ++cb.count;
    cb.node_errors.insert(cb.node_errors.begin() + worst + 1, 0.0);
}

} // namespace

BlockSet extract_blocks(const Image& plane, int block_edge) {
    if (block_edge < 1) throw Error("block edge must be >= 1");
    const Image padded = pad_replicate(plane, block_edge);
    BlockSet set;
    set.block_edge = block_edge;
    set.dim = block_edge * block_edge;
    set.grid_cols = padded.width() / block_edge;
    set.grid_rows = padded.height() / block_edge;
    set.source_width = plane.width();
    set.source_height = plane.height();
    set.data.reserve(std::size_t(set.count()) * set.dim);
    for (int by = 0; by < set.grid_rows; ++by) {
        for (int bx = 0; bx < set.grid_cols; ++bx) {
            for (int y = 0; y < block_edge; ++y) {
                for (int x = 0; x < block_edge; ++x) {
                    set.data.push_back(padded.at(bx * block_edge + x, by * block_edge + y));
                }
            }
        }
    }
    return set;
}

Image reassemble_blocks(const BlockSet& set) {
    if (set.count() < 1 || set.dim != set.block_edge * set.block_edge ||
        set.data.size() != std::size_t(set.count()) * set.dim) {
        throw ShapeMismatch("block set fields inconsistent");
    }
    if (set.source_width > set.grid_cols * set.block_edge ||
        set.source_height > set.grid_rows * set.block_edge ||
        set.source_width < 1 || set.source_height < 1) {
        throw ShapeMismatch("block grid does not cover the source geometry");
    }
    Image padded(set.grid_cols * set.block_edge, set.grid_rows * set.block_edge);
    for (int by = 0; by < set.grid_rows; ++by) {
        for (int bx = 0; bx < set.grid_cols; ++bx) {
            const auto block = set.block(by * set.grid_cols + bx);
            for (int y = 0; y < set.block_edge; ++y) {
                for (int x = 0; x < set.block_edge; ++x) {
                    padded.at(bx * set.block_edge + x, by * set.block_edge + y) =
                        block[std::size_t(y) * set.block_edge + x];
                }
            }
        }
    }
    return crop(padded, set.source_width, set.source_height);
}

int bmu(const IsomCodebook& cb, std::span<const double> v) {
    if (cb.count < 1) throw EmptyInput("empty codebook");
    check_dims(static_cast<int>(v.size()), cb.dim);
    return nearest(cb, v).first;
}

IsomCodebook initial_codebook(const BlockSet& blocks, const IsomConfig& cfg) {
    check_config(blocks, cfg);
    Rng rng(cfg.rng_seed);
    return sample_initial(blocks, cfg, rng);
}

IsomCodebook train(const BlockSet& blocks, const IsomConfig& cfg) {
    check_config(blocks, cfg);
    Rng rng(cfg.rng_seed);
    IsomCodebook cb = sample_initial(blocks, cfg, rng);

    std::vector<int> order(std::size_t(blocks.count()));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> h(std::size_t(cfg.max_nodes));  // neighborhood by chain distance

    for (int round = 0; round < cfg.rounds; ++round) {
        for (int epoch = 0; epoch < cfg.epochs_per_round; ++epoch) {
            const double t = cfg.epochs_per_round > 1
                                 ? double(epoch) / double(cfg.epochs_per_round - 1)
                                 : 1.0;
            const double alpha = cfg.alpha_start + (cfg.alpha_end - cfg.alpha_start) * t;
            const double rho = cfg.radius_start * (1.0 - t);

            const int reach = rho > 0.0 ? cb.count - 1 : 0;
            for (int d = 0; d <= reach; ++d) {
                h[std::size_t(d)] = d == 0 ? 1.0 : std::exp(-double(d) * d / (2.0 * rho * rho));
            }

            rng.shuffle(order);
            for (int i : order) {
                const auto x = blocks.block(i);
                const int best = nearest(cb, x).first;
                const int lo = std::max(0, best - reach);
                const int hi = std::min(cb.count - 1, best + reach);
                for (int j = lo; j <= hi; ++j) {
                    const double step = alpha * h[std::size_t(std::abs(j - best))];
                    double* w = cb.codewords.data() + std::size_t(j) * cb.dim;
                    for (int k = 0; k < cb.dim; ++k) {
                        w[k] += step * (x[std::size_t(k)] - w[k]);
                    }
                }
            }
        }

        const double mean_error = evaluate_assignment(blocks, cb);
        if (mean_error <= cfg.growth_distortion_target) break;
        const bool last_round = round == cfg.rounds - 1;
        if (!last_round && cb.count < cfg.max_nodes) {
            split_worst_node(cb, cfg.split_epsilon);
        }
    }
    return cb;
}

std::vector<std::uint16_t> quantize(const BlockSet& blocks, const IsomCodebook& cb) {
    if (cb.count < 1) throw EmptyInput("empty codebook");
    check_dims(blocks.dim, cb.dim);
    std::vector<std::uint16_t> indices(std::size_t(blocks.count()));
    for (int i = 0; i < blocks.count(); ++i) {
        indices[std::size_t(i)] = static_cast<std::uint16_t>(nearest(cb, blocks.block(i)).first);
    }
    return indices;
}

Image reconstruct(std::span<const std::uint16_t> indices, const IsomCodebook& cb,
                  int grid_cols, int grid_rows,
                  int source_width, int source_height, int block_edge) {
    if (indices.size() != std::size_t(grid_cols) * std::size_t(grid_rows)) {
        throw ShapeMismatch("index count does not match the block grid");
    }
    check_dims(block_edge * block_edge, cb.dim);
    BlockSet set;
    set.block_edge = block_edge;
    set.dim = cb.dim;
    set.grid_cols = grid_cols;
    set.grid_rows = grid_rows;
    set.source_width = source_width;
    set.source_height = source_height;
    set.data.reserve(indices.size() * std::size_t(cb.dim));
    for (std::uint16_t idx : indices) {
        if (idx >= cb.count) {
            throw IndexOutOfRange("codeword index " + std::to_string(idx) +
                                  " >= codebook size " + std::to_string(cb.count));
        }
        const auto w = cb.codeword(idx);
        set.data.insert(set.data.end(), w.begin(), w.end());
    }
    return reassemble_blocks(set);
}

double distortion(const BlockSet& blocks, const IsomCodebook& cb) {
    if (cb.count < 1) throw EmptyInput("empty codebook");
    check_dims(blocks.dim, cb.dim);
    double total = 0.0;
    for (int i = 0; i < blocks.count(); ++i) {
        total += nearest(cb, blocks.block(i)).second;
    }
    return total / (double(blocks.count()) * cb.dim);
}

} // namespace isv
