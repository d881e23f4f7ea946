// Dense complex matrices for small quantum operators (dims up to ~64),
// plus the Kronecker product and the Pauli/identity constants.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qmix {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    // Validating factory: checks entry count and finiteness.
    static ComplexMatrix from_entries(std::size_t rows, std::size_t cols,
                                      std::vector<cplx> entries);
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const cplx> data() const { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    double max_abs() const;            // max entrywise |m_ij|
    double frobenius_norm() const;
    double hermiticity_defect() const; // max entrywise |m_ij - conj(m_ji)|
    bool is_hermitian(double tol) const { return is_square() && hermiticity_defect() <= tol; }
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(cplx scale, ComplexMatrix m) { return m *= scale; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx scale) { return m *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> entries_; // row-major
};

// Kronecker product with `a` as the slow (left) index: dims multiply.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Single-qubit constants in the basis e0 = |up>, e1 = |down>.
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
const ComplexMatrix& identity2();
const ComplexMatrix& pauli(std::size_t axis); // 0 -> x, 1 -> y, 2 -> z

} // namespace qmix
