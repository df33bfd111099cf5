#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbsa {

/// Row-major float32 matrix. Compute paths store 32-bit values and reduce in
/// 64-bit. Only mask matrices may contain -inf; everything else is finite.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, float fill = 0.0f)
        : rows(r), cols(c), data(r * c, fill) {}

    float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    float* row(std::size_t r) { return data.data() + r * cols; }
    const float* row(std::size_t r) const { return data.data() + r * cols; }
    std::size_t size() const { return data.size(); }
};

/// T x H x W x d latent tensor, row-major in (t, h, w, d) order.
struct Latent4D {
    std::size_t t = 0, h = 0, w = 0, d = 0;
    std::vector<float> data;

    Latent4D() = default;
    Latent4D(std::size_t t_, std::size_t h_, std::size_t w_, std::size_t d_, float fill = 0.0f)
        : t(t_), h(h_), w(w_), d(d_), data(t_ * h_ * w_ * d_, fill) {}

    std::size_t tokens() const { return t * h * w; }
    std::size_t size() const { return data.size(); }

    float& at(std::size_t ti, std::size_t hi, std::size_t wi, std::size_t c) {
        return data[((ti * h + hi) * w + wi) * d + c];
    }
    float at(std::size_t ti, std::size_t hi, std::size_t wi, std::size_t c) const {
        return data[((ti * h + hi) * w + wi) * d + c];
    }
};

/// a * b. Accumulates each output element in double over ascending k, so the
/// result is identical regardless of thread count.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

/// a * b^T. Row-by-row dot products; same accumulation guarantees as matmul.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

/// Row-wise softmax of scores (+ mask if given). Mask entries must be 0 or
/// -inf and the shapes must match. Uses per-row max subtraction. Rows whose
/// entries are all masked out come back as all zeros (sentinel) instead of
/// NaN. NaN anywhere in scores is rejected.
DenseMatrix masked_softmax_rows(const DenseMatrix& scores, const DenseMatrix* mask = nullptr);

// ---------------------------------------------------------------------------
// PBT1 tensor file format
//
//   4 bytes  ASCII magic "PBT1"
//   1 byte   dtype code (0x01 = float32 little-endian)
//   1 byte   rank
//   rank x 8 bytes  little-endian unsigned dims
//   payload  row-major little-endian values, no padding
// ---------------------------------------------------------------------------

class TensorIoError : public std::runtime_error {
public:
    enum class Kind {
        OpenFailed,
        BadMagic,
        BadDtype,
        Truncated,
        TrailingData,
        BadShape,
    };

    TensorIoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Raw decoded tensor file: dims plus flat payload.
struct TensorFile {
    std::vector<std::uint64_t> dims;
    std::vector<float> data;
};

void write_tensor(const std::string& path, const DenseMatrix& m);
void write_tensor(const std::string& path, const Latent4D& x);

TensorFile read_tensor(const std::string& path);
DenseMatrix read_matrix(const std::string& path);   // requires rank 2
Latent4D read_latent(const std::string& path);      // requires rank 4

}  // namespace pbsa
