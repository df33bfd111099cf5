#include "pbsa/tensor.hpp"

#include <cstring>
#include <fstream>
#include <limits>

namespace pbsa {

namespace {

constexpr char kMagic[4] = {'P', 'B', 'T', '1'};
constexpr std::uint8_t kDtypeF32 = 0x01;

void put_u64_le(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void write_file(const std::string& path, const std::vector<std::uint64_t>& dims,
                const std::vector<float>& data) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw TensorIoError(TensorIoError::Kind::OpenFailed, "cannot open for write: " + path);
    }
    os.write(kMagic, 4);
    os.put(static_cast<char>(kDtypeF32));
    os.put(static_cast<char>(dims.size()));
    for (std::uint64_t dim : dims) put_u64_le(os, dim);
    static_assert(sizeof(float) == 4);
    // float payload is written byte-for-byte; all supported targets are
    // little-endian IEEE-754
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!os) {
        throw TensorIoError(TensorIoError::Kind::OpenFailed, "short write: " + path);
    }
}

}  // namespace

void write_tensor(const std::string& path, const DenseMatrix& m) {
    write_file(path, {m.rows, m.cols}, m.data);
}

void write_tensor(const std::string& path, const Latent4D& x) {
    write_file(path, {x.t, x.h, x.w, x.d}, x.data);
}

TensorFile read_tensor(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw TensorIoError(TensorIoError::Kind::OpenFailed, "cannot open for read: " + path);
    }
    char magic[4];
    if (!is.read(magic, 4)) {
        throw TensorIoError(TensorIoError::Kind::Truncated, "truncated header (magic): " + path);
    }
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw TensorIoError(TensorIoError::Kind::BadMagic, "bad magic, not a PBT1 file: " + path);
    }
    char dtype = 0, rank = 0;
    if (!is.get(dtype) || !is.get(rank)) {
        throw TensorIoError(TensorIoError::Kind::Truncated, "truncated header (dtype/rank): " + path);
    }
    if (static_cast<std::uint8_t>(dtype) != kDtypeF32) {
        throw TensorIoError(TensorIoError::Kind::BadDtype,
                            "unsupported dtype code " + std::to_string(static_cast<int>(dtype)));
    }
    const std::size_t r = static_cast<std::uint8_t>(rank);
    TensorFile tf;
    tf.dims.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        unsigned char buf[8];
        if (!is.read(reinterpret_cast<char*>(buf), 8)) {
            throw TensorIoError(TensorIoError::Kind::Truncated, "truncated dims: " + path);
        }
        tf.dims[i] = get_u64_le(buf);
    }
    std::uint64_t elems = r == 0 ? 0 : 1;
    for (std::uint64_t dim : tf.dims) {
        if (dim != 0 && elems > std::numeric_limits<std::uint64_t>::max() / (dim == 0 ? 1 : dim)) {
            throw TensorIoError(TensorIoError::Kind::BadShape, "dims overflow: " + path);
        }
        elems *= dim;
    }
    tf.data.resize(elems);
    if (elems > 0) {
        if (!is.read(reinterpret_cast<char*>(tf.data.data()),
                     static_cast<std::streamsize>(elems * sizeof(float)))) {
            throw TensorIoError(TensorIoError::Kind::Truncated, "truncated payload: " + path);
        }
    }
    // any bytes beyond the declared payload are an error, which also rejects
    // a zero-element claim sitting on top of data
    char extra;
    if (is.get(extra)) {
        throw TensorIoError(TensorIoError::Kind::TrailingData,
                            "payload longer than declared dims: " + path);
    }
    return tf;
}

DenseMatrix read_matrix(const std::string& path) {
    TensorFile tf = read_tensor(path);
    if (tf.dims.size() != 2) {
        throw TensorIoError(TensorIoError::Kind::BadShape,
                            "expected rank 2, got " + std::to_string(tf.dims.size()));
    }
    DenseMatrix m;
    m.rows = tf.dims[0];
    m.cols = tf.dims[1];
    m.data = std::move(tf.data);
    return m;
}

Latent4D read_latent(const std::string& path) {
    TensorFile tf = read_tensor(path);
    if (tf.dims.size() != 4) {
        throw TensorIoError(TensorIoError::Kind::BadShape,
                            "expected rank 4, got " + std::to_string(tf.dims.size()));
    }
    Latent4D x;
    x.t = tf.dims[0];
    x.h = tf.dims[1];
    x.w = tf.dims[2];
    x.d = tf.dims[3];
    x.data = std::move(tf.data);
    return x;
}

}  // namespace pbsa
