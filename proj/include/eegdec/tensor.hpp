#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eegdec {

// Row-major dense matrix of doubles. Rows are contiguous, which matches how
// the library stores a multichannel signal (one row per channel).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
};

// Dense [n0 x n1 x n2] tensor; the innermost index is contiguous. Trial data
// uses the order [trial][channel][sample].
struct Tensor3 {
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(std::size_t a, std::size_t b, std::size_t c, double fill = 0.0)
        : n0(a), n1(b), n2(c), data(a * b * c, fill) {}

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data[(i * n1 + j) * n2 + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data[(i * n1 + j) * n2 + k];
    }

    double* ptr(std::size_t i, std::size_t j) { return data.data() + (i * n1 + j) * n2; }
    const double* ptr(std::size_t i, std::size_t j) const {
        return data.data() + (i * n1 + j) * n2;
    }

    // Copies slice [i] into a channels-by-samples matrix.
    Matrix slice(std::size_t i) const {
        Matrix m(n1, n2);
        const double* src = data.data() + i * n1 * n2;
        std::copy(src, src + n1 * n2, m.data.begin());
        return m;
    }
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace eegdec
