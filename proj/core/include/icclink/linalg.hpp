#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace icc {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

/// Dense row-major matrix. Used both for channel matrices and for the
/// per-edge (antenna x user) message grids of the detector.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    void resize(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        data_.assign(rows * cols, T{});
    }

    template <typename U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Grid<Complex>;
using RMatrix = Grid<double>;

/// Thrown when a factorization cannot proceed (matrix not positive definite,
/// or otherwise numerically singular).
struct DecompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CMatrix identity(std::size_t n);

/// y = A x
CVector matvec(const CMatrix& a, std::span<const Complex> x);

/// sum_i conj(a_i) * b_i
Complex inner(std::span<const Complex> a, std::span<const Complex> b);

double norm2(std::span<const Complex> v);

/// Solves A x = b for Hermitian positive definite A via a Cholesky
/// factorization (no explicit inverse is formed). Only the lower triangle
/// of A is read. Throws DecompositionError if a pivot fails.
CVector hermitian_solve(const CMatrix& a, std::span<const Complex> b);

}  // namespace icc
