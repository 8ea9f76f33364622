#include "taskprune/matrix.hpp"

#include <cmath>

#include "taskprune/parallel.hpp"

namespace taskprune {

namespace {

template <typename T>
bool finite_impl(const Mat<T>& m) {
    for (T v : m.data()) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

void require_finite(const Matrix& m, const char* op) {
    if (!finite_impl(m)) {
        throw NumericError(std::string(op) + ": non-finite entry");
    }
}

}  // namespace

bool all_finite(const Matrix& m) { return finite_impl(m); }
bool all_finite(const MatrixD& m) { return finite_impl(m); }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions do not match");
    }
    Matrix c(a.rows(), b.cols());
    parallel_for(a.rows(), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < a.cols(); ++k) {
                    acc += static_cast<double>(a.at(i, k)) * static_cast<double>(b.at(k, j));
                }
                c.at(i, j) = static_cast<float>(acc);
            }
        }
    });
    require_finite(c, "matmul");
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: inner dimensions do not match");
    }
    Matrix c(a.rows(), b.rows());
    parallel_for(a.rows(), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            for (std::size_t j = 0; j < b.rows(); ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < a.cols(); ++k) {
                    acc += static_cast<double>(a.at(i, k)) * static_cast<double>(b.at(j, k));
                }
                c.at(i, j) = static_cast<float>(acc);
            }
        }
    });
    require_finite(c, "matmul_nt");
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            t.at(j, i) = m.at(i, j);
        }
    }
    return t;
}

std::vector<double> col_sq_norms(const Matrix& x) {
    if (x.empty()) {
        throw ShapeError("col_sq_norms: empty matrix");
    }
    std::vector<double> sums(x.cols(), 0.0);
    // One accumulator per channel, rows folded in ascending order. Parallel
    // over channels keeps the per-channel order intact.
    parallel_for(x.cols(), [&](std::size_t c0, std::size_t c1) {
        for (std::size_t j = c0; j < c1; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < x.rows(); ++m) {
                const double v = static_cast<double>(x.at(m, j));
                acc += v * v;
            }
            sums[j] = acc;
        }
    });
    return sums;
}

}  // namespace taskprune
