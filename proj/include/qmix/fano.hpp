// Pauli-basis decomposition of two-qubit states and the Bell-diagonal
// c-vector geometry: the state tetrahedron, its separable central
// octahedron, and crossings of mixing paths with the octahedron surface.

#pragma once

#include <array>
#include <optional>

#include "qmix/density.hpp"
#include "qmix/families.hpp"

namespace qmix {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& u, const Vec3& v);
double norm(const Vec3& v);
double l1_norm(const Vec3& v);

struct Mat3 {
    std::array<double, 9> m{}; // row-major

    double& operator()(std::size_t i, std::size_t j) { return m[i * 3 + j]; }
    double operator()(std::size_t i, std::size_t j) const { return m[i * 3 + j]; }

    Vec3 diagonal() const { return {m[0], m[4], m[8]}; }
    double max_offdiag_abs() const;
    Mat3 transpose_times_self() const; // C^T C
    Vec3 apply(const Vec3& v) const;   // C v
};

// a_i = Tr(rho sigma_i x 1), b_i = Tr(rho 1 x sigma_i), c_ij = Tr(rho sigma_i x sigma_j)
struct FanoForm {
    Vec3 a{};
    Vec3 b{};
    Mat3 c{};
};

// Requires a two-qubit state (dim 4). The coefficients are real for any
// Hermitian input; imaginary residue above 1e-12 trips an InternalError.
FanoForm fano_decompose(const DensityOperator& rho);

// (1/4)(1x1 + a.sigma x 1 + 1 x b.sigma + sum_ij c_ij sigma_i x sigma_j).
// Validity as a state is not checked here; run check_density on the result.
ComplexMatrix fano_reconstruct(const FanoForm& f);

// Diagonal correlation vector (c_xx, c_yy, c_zz) of a Bell-diagonal state.
struct CVector {
    Vec3 c{};
};

CVector bell_cvector(BellKind kind);

// Bell-basis mixing probabilities p_k = (1 + c . c_k) / 4; a valid state's
// c-vector has all four nonnegative.
std::array<double, 4> bell_weights(const CVector& cv);

enum class Region { Inside, Boundary, Outside };

const char* to_string(Region r);

// Separable octahedron conv{(+-1,0,0),(0,+-1,0),(0,0,+-1)}, tested in facet
// form as |c1|+|c2|+|c3| <= 1. Boundary within +-tol of the surface.
Region in_octahedron(const CVector& cv, double tol = 1e-9);

// State tetrahedron conv of the four Bell c-vectors, tested through the
// Bell-weight facet inequalities. Boundary within +-tol of a facet.
Region in_tetrahedron(const CVector& cv, double tol = 1e-9);

// Smallest t in [0,1] where c_start + t (c_end - c_start) meets the
// octahedron surface (l1 norm exactly 1). The piecewise-linear l1 equation
// is solved orthant by orthant, so the answer carries no iteration
// tolerance. Both endpoints must be valid state c-vectors (inside the
// tetrahedron within 1e-9). Returns nullopt when the segment never touches
// the surface.
std::optional<double> path_crossing(const CVector& c_start, const CVector& c_end);

} // namespace qmix
