// Pure states, validated density operators, and the bipartite reductions:
// partial trace and partial transpose.
//
// Tensor index convention: subsystem A is the slow (left) index, so a joint
// basis state |i>_A |j>_B sits at row i*d_B + j.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmix/complex_matrix.hpp"

namespace qmix {

class PureState {
public:
    // Validates Euclidean norm == 1 within 1e-12.
    explicit PureState(std::vector<cplx> amplitudes);

    static PureState basis(std::size_t dim, std::size_t k);

    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    const cplx& operator[](std::size_t k) const { return amps_[k]; }

    cplx inner(const PureState& other) const; // <this|other>
    ComplexMatrix projector() const;          // |psi><psi|
    ComplexMatrix column() const;             // dim x 1 matrix

private:
    std::vector<cplx> amps_;
};

struct BipartiteDims {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t joint() const { return a * b; }
    bool operator==(const BipartiteDims&) const = default;
};

enum class DefectKind { Shape, NonFinite, Hermiticity, Trace, Positivity };

struct DensityDefect {
    DefectKind kind;
    double magnitude; // size of the violation
    std::string message;
};

const char* to_string(DefectKind k);

class DensityError : public std::runtime_error {
public:
    explicit DensityError(DensityDefect defect);
    const DensityDefect& defect() const { return defect_; }

private:
    DensityDefect defect_;
};

class DensityOperator {
public:
    const ComplexMatrix& matrix() const { return mat_; }
    std::size_t dim() const { return mat_.rows(); }
    std::optional<BipartiteDims> parts() const { return parts_; }

    DensityOperator with_parts(BipartiteDims parts) const;

    // Two-qubit factorization, defaulting dim-4 operators to (2,2).
    BipartiteDims parts_or_default() const;

private:
    friend std::optional<DensityDefect> check_density(const ComplexMatrix&, double);
    friend DensityOperator validate_density(const ComplexMatrix&, std::optional<BipartiteDims>, double);

    DensityOperator(ComplexMatrix m, std::optional<BipartiteDims> parts)
        : mat_(std::move(m)), parts_(parts) {}

    ComplexMatrix mat_;
    std::optional<BipartiteDims> parts_;
};

// Checks, in order: shape, finiteness, hermiticity (1e-12), unit trace
// (1e-12), positivity (min eigenvalue >= -tol_psd). Returns the first
// violated invariant, or nullopt when the matrix is a valid state.
std::optional<DensityDefect> check_density(const ComplexMatrix& m, double tol_psd = 1e-9);

// Throwing variant of check_density; on success returns the validated state.
DensityOperator validate_density(const ComplexMatrix& m,
                                 std::optional<BipartiteDims> parts = std::nullopt,
                                 double tol_psd = 1e-9);

enum class Subsystem { A, B };

// Reduced operator on the kept subsystem; preserves the trace.
ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Subsystem keep);

// Transposes the chosen tensor factor's indices; involutive.
ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims,
                                Subsystem side = Subsystem::B);

DensityOperator reduced_state(const DensityOperator& rho, Subsystem keep);

// (1/2) Tr |rho - sigma|
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

} // namespace qmix
