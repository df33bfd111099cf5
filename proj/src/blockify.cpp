#include "pbsa/blockify.hpp"

#include <cstring>

namespace pbsa {

BlockLayout make_block_layout(std::size_t t, std::size_t h, std::size_t w, std::size_t d,
                              const BlockShape& shape) {
    if (shape.b_t == 0 || shape.b_h == 0 || shape.b_w == 0) {
        throw std::invalid_argument("block shape extents must be >= 1");
    }
    if (t % shape.b_t != 0) {
        throw std::invalid_argument("axis t (" + std::to_string(t) + ") not divisible by b_t (" +
                                    std::to_string(shape.b_t) + ")");
    }
    if (h % shape.b_h != 0) {
        throw std::invalid_argument("axis h (" + std::to_string(h) + ") not divisible by b_h (" +
                                    std::to_string(shape.b_h) + ")");
    }
    if (w % shape.b_w != 0) {
        throw std::invalid_argument("axis w (" + std::to_string(w) + ") not divisible by b_w (" +
                                    std::to_string(shape.b_w) + ")");
    }
    BlockLayout layout;
    layout.n_t = t / shape.b_t;
    layout.n_h = h / shape.b_h;
    layout.n_w = w / shape.b_w;
    layout.n_b = layout.n_t * layout.n_h * layout.n_w;
    layout.b = shape.tokens();
    layout.shape = shape;
    layout.t = t;
    layout.h = h;
    layout.w = w;
    layout.d = d;
    return layout;
}

BlockedTensor blockify(const Latent4D& x, const BlockShape& shape) {
    if (x.data.size() != x.t * x.h * x.w * x.d) {
        throw std::invalid_argument("latent data length does not match dims");
    }
    const BlockLayout layout = make_block_layout(x.t, x.h, x.w, x.d, shape);
    BlockedTensor out;
    out.layout = layout;
    out.data.resize(x.data.size());

    const std::size_t d = layout.d;
#pragma omp parallel for schedule(static) if (layout.n_b > 4)
    for (std::size_t bid = 0; bid < layout.n_b; ++bid) {
        const std::size_t nt = bid / (layout.n_h * layout.n_w);
        const std::size_t nh = (bid / layout.n_w) % layout.n_h;
        const std::size_t nw = bid % layout.n_w;
        float* dst = out.block(bid);
        for (std::size_t dt = 0; dt < shape.b_t; ++dt) {
            for (std::size_t dh = 0; dh < shape.b_h; ++dh) {
                const std::size_t src_t = nt * shape.b_t + dt;
                const std::size_t src_h = nh * shape.b_h + dh;
                const float* src = &x.data[((src_t * x.h + src_h) * x.w + nw * shape.b_w) * d];
                std::memcpy(dst, src, shape.b_w * d * sizeof(float));
                dst += shape.b_w * d;
            }
        }
    }
    return out;
}

Latent4D unblockify(const BlockedTensor& xb) {
    const BlockLayout& layout = xb.layout;
    if (xb.data.size() != layout.n_b * layout.b * layout.d) {
        throw std::invalid_argument("blocked data length does not match layout");
    }
    if (layout.n_b != layout.n_t * layout.n_h * layout.n_w ||
        layout.b != layout.shape.tokens()) {
        throw std::invalid_argument("inconsistent block layout");
    }
    Latent4D x(layout.t, layout.h, layout.w, layout.d);
    const BlockShape& shape = layout.shape;
    const std::size_t d = layout.d;
#pragma omp parallel for schedule(static) if (layout.n_b > 4)
    for (std::size_t bid = 0; bid < layout.n_b; ++bid) {
        const std::size_t nt = bid / (layout.n_h * layout.n_w);
        const std::size_t nh = (bid / layout.n_w) % layout.n_h;
        const std::size_t nw = bid % layout.n_w;
        const float* src = xb.block(bid);
        for (std::size_t dt = 0; dt < shape.b_t; ++dt) {
            for (std::size_t dh = 0; dh < shape.b_h; ++dh) {
                const std::size_t dst_t = nt * shape.b_t + dt;
                const std::size_t dst_h = nh * shape.b_h + dh;
                float* dst = &x.data[((dst_t * x.h + dst_h) * x.w + nw * shape.b_w) * d];
                std::memcpy(dst, src, shape.b_w * d * sizeof(float));
                src += shape.b_w * d;
            }
        }
    }
    return x;
}

std::pair<std::size_t, std::size_t> block_index_map(const BlockLayout& layout,
                                                    std::size_t flat_source_index) {
    if (flat_source_index >= layout.t * layout.h * layout.w) {
        throw std::invalid_argument("flat source index " + std::to_string(flat_source_index) +
                                    " out of range");
    }
    const std::size_t ti = flat_source_index / (layout.h * layout.w);
    const std::size_t hi = (flat_source_index / layout.w) % layout.h;
    const std::size_t wi = flat_source_index % layout.w;

    const std::size_t nt = ti / layout.shape.b_t, dt = ti % layout.shape.b_t;
    const std::size_t nh = hi / layout.shape.b_h, dh = hi % layout.shape.b_h;
    const std::size_t nw = wi / layout.shape.b_w, dw = wi % layout.shape.b_w;

    const std::size_t block_id = (nt * layout.n_h + nh) * layout.n_w + nw;
    const std::size_t in_block = (dt * layout.shape.b_h + dh) * layout.shape.b_w + dw;
    return {block_id, in_block};
}

}  // namespace pbsa
