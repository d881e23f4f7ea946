#include "qmix/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmix {

namespace {

double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q). With the 2x2 block
// [alpha z; conj(z) beta], z = r e^{i phi}, the unitary
//   U = [c, -s e^{i phi}; s e^{-i phi}, c]
// annihilates the off-diagonal entry when t = s/c solves
// t^2 + 2 tau t - 1 = 0, tau = (alpha - beta) / (2r).
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx z = a(p, q);
    const double r = std::abs(z);
    if (r == 0.0) return;
    const cplx phase = z / r;

    const double tau = (a(p, p).real() - a(q, q).real()) / (2.0 * r);
    const double sign = tau >= 0.0 ? 1.0 : -1.0;
    const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    // A <- A U (columns p, q)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp + s * std::conj(phase) * akq;
        a(k, q) = -s * phase * akp + c * akq;
    }
    // A <- U* A (rows p, q)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk + s * phase * aqk;
        a(q, k) = -s * std::conj(phase) * apk + c * aqk;
    }
    // V <- V U
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = c * vkp + s * std::conj(phase) * vkq;
        v(k, q) = -s * phase * vkp + c * vkq;
    }
    // Rotated-out entries are zero analytically; pin them to kill residue.
    a(p, q) = 0.0;
    a(q, p) = 0.0;
}

} // namespace

EigenSystem hermitian_eigensystem(const ComplexMatrix& m, double hermitian_tol) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eigensystem: matrix not square");
    if (!m.all_finite()) throw std::invalid_argument("hermitian_eigensystem: non-finite entry");
    if (m.hermiticity_defect() > hermitian_tol)
        throw std::invalid_argument("hermitian_eigensystem: matrix not Hermitian within tolerance");

    const std::size_t n = m.rows();

    // Symmetrize the sub-tolerance residue so the iteration sees an exactly
    // Hermitian matrix.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = 1e-14 * std::max(1.0, a.frobenius_norm());

    constexpr int kMaxSweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (!converged && offdiag_norm(a) > threshold)
        throw InternalError("hermitian_eigensystem: Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, double hermitian_tol) {
    return hermitian_eigensystem(m, hermitian_tol).values;
}

} // namespace qmix
