#include "qmix/fano.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmix/eigen.hpp"

namespace qmix {

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

double l1_norm(const Vec3& v) { return std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]); }

double Mat3::max_offdiag_abs() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) worst = std::max(worst, std::abs((*this)(i, j)));
    return worst;
}

Mat3 Mat3::transpose_times_self() const {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += (*this)(k, i) * (*this)(k, j);
            out(i, j) = s;
        }
    return out;
}

Vec3 Mat3::apply(const Vec3& v) const {
    return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
            m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
            m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

namespace {

// Tr(rho * op) for Hermitian op; the imaginary part must be numerical noise.
double real_expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) s += rho(i, j) * op(j, i);
    if (std::abs(s.imag()) > 1e-12)
        throw InternalError("fano_decompose: expectation value has imaginary residue");
    return s.real();
}

} // namespace

FanoForm fano_decompose(const DensityOperator& rho) {
    if (rho.dim() != 4)
        throw std::invalid_argument("fano_decompose: two-qubit state required");
    const ComplexMatrix& m = rho.matrix();

    FanoForm f;
    for (std::size_t i = 0; i < 3; ++i) {
        f.a[i] = real_expectation(m, tensor(pauli(i), identity2()));
        f.b[i] = real_expectation(m, tensor(identity2(), pauli(i)));
        for (std::size_t j = 0; j < 3; ++j)
            f.c(i, j) = real_expectation(m, tensor(pauli(i), pauli(j)));
    }
    return f;
}

ComplexMatrix fano_reconstruct(const FanoForm& f) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(f.a[i]) > 1.0 || std::abs(f.b[i]) > 1.0)
            throw std::invalid_argument("fano_reconstruct: Bloch component outside [-1, 1]");
        for (std::size_t j = 0; j < 3; ++j)
            if (std::abs(f.c(i, j)) > 1.0)
                throw std::invalid_argument("fano_reconstruct: correlation outside [-1, 1]");
    }

    ComplexMatrix m = ComplexMatrix::identity(4);
    for (std::size_t i = 0; i < 3; ++i) {
        m += cplx(f.a[i]) * tensor(pauli(i), identity2());
        m += cplx(f.b[i]) * tensor(identity2(), pauli(i));
        for (std::size_t j = 0; j < 3; ++j)
            m += cplx(f.c(i, j)) * tensor(pauli(i), pauli(j));
    }
    m *= cplx(0.25);
    return m;
}

CVector bell_cvector(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus: return CVector{{1.0, -1.0, 1.0}};
        case BellKind::PhiMinus: return CVector{{-1.0, 1.0, 1.0}};
        case BellKind::PsiPlus: return CVector{{1.0, 1.0, -1.0}};
        case BellKind::PsiMinus: return CVector{{-1.0, -1.0, -1.0}};
    }
    throw std::invalid_argument("bell_cvector: unknown kind");
}

std::array<double, 4> bell_weights(const CVector& cv) {
    std::array<double, 4> w;
    for (std::size_t k = 0; k < 4; ++k)
        w[k] = (1.0 + dot(cv.c, bell_cvector(kBellKinds[k]).c)) / 4.0;
    return w;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::Inside: return "Inside";
        case Region::Boundary: return "Boundary";
        case Region::Outside: return "Outside";
    }
    return "unknown";
}

Region in_octahedron(const CVector& cv, double tol) {
    const double s = l1_norm(cv.c);
    if (s > 1.0 + tol) return Region::Outside;
    if (s >= 1.0 - tol) return Region::Boundary;
    return Region::Inside;
}

Region in_tetrahedron(const CVector& cv, double tol) {
    const std::array<double, 4> w = bell_weights(cv);
    const double min_w = *std::min_element(w.begin(), w.end());
    if (min_w < -tol) return Region::Outside;
    if (min_w <= tol) return Region::Boundary;
    return Region::Inside;
}

std::optional<double> path_crossing(const CVector& c_start, const CVector& c_end) {
    if (in_tetrahedron(c_start) == Region::Outside ||
        in_tetrahedron(c_end) == Region::Outside)
        throw std::invalid_argument("path_crossing: endpoint is not a valid state c-vector");

    const Vec3& p = c_start.c;
    Vec3 d;
    for (std::size_t i = 0; i < 3; ++i) d[i] = c_end.c[i] - p[i];

    // Split [0,1] where any coordinate changes sign; within each piece the
    // l1 norm is affine in t.
    std::vector<double> knots = {0.0, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
        if (d[i] == 0.0) continue;
        const double t = -p[i] / d[i];
        if (t > 0.0 && t < 1.0) knots.push_back(t);
    }
    std::sort(knots.begin(), knots.end());

    for (std::size_t seg = 0; seg + 1 < knots.size(); ++seg) {
        const double t0 = knots[seg];
        const double t1 = knots[seg + 1];
        if (t1 <= t0) continue;
        const double tm = 0.5 * (t0 + t1);

        double alpha = 0.0, beta = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double ci = p[i] + tm * d[i];
            const double sign = ci > 0.0 ? 1.0 : (ci < 0.0 ? -1.0 : 0.0);
            alpha += sign * p[i];
            beta += sign * d[i];
        }

        if (beta != 0.0) {
            const double t = (1.0 - alpha) / beta;
            if (t >= t0 && t <= t1) return t;
        } else if (alpha == 1.0) {
            return t0; // the whole piece lies on the surface
        }
    }
    return std::nullopt;
}

} // namespace qmix
