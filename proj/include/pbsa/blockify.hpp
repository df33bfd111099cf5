#pragma once

#include <cstddef>
#include <utility>

#include "pbsa/tensor.hpp"

namespace pbsa {

/// Spatiotemporal block extent (b_t, b_h, b_w), all >= 1.
struct BlockShape {
    std::size_t b_t = 1;
    std::size_t b_h = 1;
    std::size_t b_w = 1;

    std::size_t tokens() const { return b_t * b_h * b_w; }
    bool operator==(const BlockShape&) const = default;
};

/// Derived partition of a (t, h, w, d) latent into blocks. n_b * b == t*h*w.
struct BlockLayout {
    std::size_t n_t = 0, n_h = 0, n_w = 0;  // blocks per axis
    std::size_t n_b = 0;                    // total blocks
    std::size_t b = 0;                      // tokens per block
    BlockShape shape;
    std::size_t t = 0, h = 0, w = 0, d = 0;  // source dims

    bool operator==(const BlockLayout&) const = default;
};

/// Block-major (n_b, b, d) storage: the tokens of one block are contiguous.
struct BlockedTensor {
    BlockLayout layout;
    std::vector<float> data;

    float* block(std::size_t block_id) { return data.data() + block_id * layout.b * layout.d; }
    const float* block(std::size_t block_id) const {
        return data.data() + block_id * layout.b * layout.d;
    }
    float* token(std::size_t block_id, std::size_t offset) {
        return block(block_id) + offset * layout.d;
    }
    const float* token(std::size_t block_id, std::size_t offset) const {
        return block(block_id) + offset * layout.d;
    }
};

/// Validates divisibility and fills in the block counts. Throws
/// std::invalid_argument naming the offending axis if shape does not divide
/// (t, h, w) exactly.
BlockLayout make_block_layout(std::size_t t, std::size_t h, std::size_t w, std::size_t d,
                              const BlockShape& shape);

/// Locality-preserving rearrange into block-major layout. Element at source
/// index (nt*b_t+dt, nh*b_h+dh, nw*b_w+dw, c) lands at blocked index
/// (block_id(nt,nh,nw), in_block(dt,dh,dw), c) with
///   block_id = (nt*N_h + nh)*N_w + nw
///   in_block = (dt*B_h + dh)*B_w + dw
BlockedTensor blockify(const Latent4D& x, const BlockShape& shape);

/// Exact inverse of blockify (bit-exact round trip).
Latent4D unblockify(const BlockedTensor& xb);

/// Closed-form index map for one flat source token index (over t*h*w, feature
/// dim excluded). Returns (block_id, in_block_offset).
std::pair<std::size_t, std::size_t> block_index_map(const BlockLayout& layout,
                                                    std::size_t flat_source_index);

}  // namespace pbsa
