// Hermitian eigensolver: cyclic Jacobi with complex rotations.
// Sized for the operators this library produces (n <= ~64); no external
// linear-algebra dependency.

#pragma once

#include <stdexcept>
#include <vector>

#include "qmix/complex_matrix.hpp"

namespace qmix {

// Raised when an internal numerical invariant breaks (e.g. the Jacobi
// iteration fails to converge). Callers map this to exit code 3.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenSystem {
    std::vector<double> values; // ascending, multiplicities included
    ComplexMatrix vectors;      // unitary; column k pairs with values[k]
};

// Eigenvalues of a Hermitian matrix, ascending. The input must be Hermitian
// within `hermitian_tol` entrywise; throws std::invalid_argument otherwise.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double hermitian_tol = 1e-12);

EigenSystem hermitian_eigensystem(const ComplexMatrix& m, double hermitian_tol = 1e-12);

} // namespace qmix
