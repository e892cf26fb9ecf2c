#include "icclink/linalg.hpp"

#include <cmath>

namespace icc {

CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CVector matvec(const CMatrix& a, std::span<const Complex> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    CVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2(std::span<const Complex> v) {
    double acc = 0.0;
    for (const Complex& c : v) acc += std::norm(c);
    return std::sqrt(acc);
}

CVector hermitian_solve(const CMatrix& a, std::span<const Complex> b) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_solve: matrix must be square");
    const std::size_t n = a.rows();
    if (b.size() != n) throw std::invalid_argument("hermitian_solve: dimension mismatch");

    // Lower Cholesky factor; only the lower triangle of a is read.
    CMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l(j, k));
        if (!(diag > 0.0) || !std::isfinite(diag))
            throw DecompositionError("hermitian_solve: matrix is not positive definite");
        const double pivot = std::sqrt(diag);
        l(j, j) = pivot;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex acc = a(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / pivot;
        }
    }

    // Forward substitution L z = b, then back substitution L^H x = z.
    CVector z(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * z[k];
        z[i] = acc / l(i, i).real();
    }
    CVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Complex acc = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= std::conj(l(k, ii)) * x[k];
        x[ii] = acc / l(ii, ii).real();
    }
    return x;
}

}  // namespace icc
