#include "pbsa/tensor.hpp"

#include <cmath>
#include <limits>

namespace pbsa {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: a.cols (" + std::to_string(a.cols) +
                                    ") != b.rows (" + std::to_string(b.rows) + ")");
    }
    DenseMatrix c(a.rows, b.cols);
    const std::size_t n = a.rows, k_dim = a.cols, m = b.cols;
#pragma omp parallel for schedule(static) if (n > 8)
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> acc(m, 0.0);
        const float* arow = a.row(i);
        for (std::size_t k = 0; k < k_dim; ++k) {
            const double av = arow[k];
            const float* brow = b.row(k);
            for (std::size_t j = 0; j < m; ++j) {
                acc[j] += av * static_cast<double>(brow[j]);
            }
        }
        float* crow = c.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            crow[j] = static_cast<float>(acc[j]);
        }
    }
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.cols) {
        throw std::invalid_argument("matmul_nt: a.cols (" + std::to_string(a.cols) +
                                    ") != b.cols (" + std::to_string(b.cols) + ")");
    }
    DenseMatrix c(a.rows, b.rows);
    const std::size_t n = a.rows, m = b.rows, k_dim = a.cols;
#pragma omp parallel for schedule(static) if (n > 8)
    for (std::size_t i = 0; i < n; ++i) {
        const float* arow = a.row(i);
        float* crow = c.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            const float* brow = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < k_dim; ++k) {
                acc += static_cast<double>(arow[k]) * static_cast<double>(brow[k]);
            }
            crow[j] = static_cast<float>(acc);
        }
    }
    return c;
}

DenseMatrix masked_softmax_rows(const DenseMatrix& scores, const DenseMatrix* mask) {
    constexpr float kNegInf = -std::numeric_limits<float>::infinity();
    if (mask != nullptr && (mask->rows != scores.rows || mask->cols != scores.cols)) {
        throw std::invalid_argument("masked_softmax_rows: mask shape mismatch");
    }
    for (float s : scores.data) {
        if (std::isnan(s)) {
            throw std::invalid_argument("masked_softmax_rows: NaN in scores");
        }
    }
    if (mask != nullptr) {
        for (float mv : mask->data) {
            if (!(mv == 0.0f || mv == kNegInf)) {
                throw std::invalid_argument("masked_softmax_rows: mask entries must be 0 or -inf");
            }
        }
    }

    DenseMatrix out(scores.rows, scores.cols);
    const std::size_t n = scores.rows, m = scores.cols;
#pragma omp parallel for schedule(static) if (n > 8)
    for (std::size_t i = 0; i < n; ++i) {
        const float* srow = scores.row(i);
        const float* mrow = mask != nullptr ? mask->row(i) : nullptr;
        float* orow = out.row(i);

        float row_max = kNegInf;
        for (std::size_t j = 0; j < m; ++j) {
            const float s = mrow != nullptr && mrow[j] == kNegInf ? kNegInf : srow[j];
            if (s > row_max) row_max = s;
        }
        if (row_max == kNegInf) {
            // fully masked (or empty) row: all-zero sentinel
            for (std::size_t j = 0; j < m; ++j) orow[j] = 0.0f;
            continue;
        }
        double denom = 0.0;
        std::vector<double> e(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (mrow != nullptr && mrow[j] == kNegInf) {
                e[j] = 0.0;
            } else {
                e[j] = std::exp(static_cast<double>(srow[j]) - static_cast<double>(row_max));
                denom += e[j];
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            orow[j] = static_cast<float>(e[j] / denom);
        }
    }
    return out;
}

}  // namespace pbsa
