#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "taskprune/errors.hpp"

namespace taskprune {

// Dense row-major matrix. Weights and activations are float; score and
// accumulation buffers use the double instantiation.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat from_data(std::size_t rows, std::size_t cols, std::vector<T> data) {
        if (data.size() != rows * cols) {
            throw ShapeError("matrix data length does not match rows*cols");
        }
        Mat m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(data);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void append_rows(const Mat& o) {
        if (o.empty()) {
            return;
        }
        if (rows_ == 0 && cols_ == 0) {
            cols_ = o.cols_;
        }
        if (o.cols_ != cols_) {
            throw ShapeError("append_rows: column count mismatch");
        }
        data_.insert(data_.end(), o.data_.begin(), o.data_.end());
        rows_ += o.rows_;
    }

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = Mat<float>;
using MatrixD = Mat<double>;
using MaskMat = Mat<std::uint8_t>;

bool all_finite(const Matrix& m);
bool all_finite(const MatrixD& m);

// Standard product, accumulated in double over ascending k so the result is
// bit-identical across runs and worker counts.
Matrix matmul(const Matrix& a, const Matrix& b);

// a (M x K) times b^T where b is (N x K). Same reduction order as matmul.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// Entry j = sum over rows of x[m][j]^2, accumulated and returned in double.
std::vector<double> col_sq_norms(const Matrix& x);

}  // namespace taskprune
