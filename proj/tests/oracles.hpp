// Independent verification routes used by the test suites. Nothing here
// shares an algorithm with the library: eigenvalues come from Sylvester
// inertia bisection (the library uses cyclic Jacobi), typicality weights
// from Pascal-triangle binomial sums or raw k^m sequence enumeration (the
// library uses a scaled multinomial DP), and octahedron membership from
// explicit convex-combination / separating-facet certificates (the library
// uses the l1 test).

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qmix/complex_matrix.hpp"
#include "qmix/fano.hpp"

namespace oracles {

// Number of eigenvalues of Hermitian m strictly below x, by counting
// negative pivots of the LDL* elimination of (m - x I). When a pivot
// degenerates (x essentially an eigenvalue of a leading minor), x is nudged
// by a few ulps and the elimination retried.
inline int eigs_below(const qmix::ComplexMatrix& m, double x) {
    const std::size_t n = m.rows();
    const double scale = std::max(1.0, m.max_abs());
    for (int attempt = 0; attempt < 50; ++attempt) {
        const double shifted = x + attempt * 3e-13 * scale;
        qmix::ComplexMatrix a = m;
        for (std::size_t i = 0; i < n; ++i) a(i, i) -= shifted;

        bool degenerate = false;
        int negatives = 0;
        for (std::size_t k = 0; k < n && !degenerate; ++k) {
            const double pivot = a(k, k).real();
            if (std::abs(pivot) < 1e-14 * scale) {
                degenerate = true;
                break;
            }
            if (pivot < 0.0) ++negatives;
            for (std::size_t i = k + 1; i < n; ++i) {
                const qmix::cplx factor = a(i, k) / a(k, k);
                for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
            }
        }
        if (!degenerate) return negatives;
    }
    throw std::runtime_error("oracle eigs_below: persistent pivot degeneracy");
}

// k-th (0-based, ascending) eigenvalue by bisection on the inertia count.
inline double kth_eigenvalue(const qmix::ComplexMatrix& m, std::size_t k) {
    const std::size_t n = m.rows();
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j));
        radius = std::max(radius, row);
    }
    double lo = -radius - 1.0;
    double hi = radius + 1.0;
    while (hi - lo > 1e-13 * std::max(1.0, radius)) {
        const double mid = 0.5 * (lo + hi);
        if (eigs_below(m, mid) >= static_cast<int>(k) + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> hermitian_eigenvalues(const qmix::ComplexMatrix& m) {
    std::vector<double> out(m.rows());
    for (std::size_t k = 0; k < m.rows(); ++k) out[k] = kth_eigenvalue(m, k);
    return out;
}

inline double min_eigenvalue(const qmix::ComplexMatrix& m) { return kth_eigenvalue(m, 0); }

// Binomial tail sum over counts n with |n/m - p| <= eps, coefficients from
// Pascal's triangle. Uses the same boundary slack convention as
// typical_weight so the two agree on which integers are admitted.
inline double binomial_tail(int m, double p, double eps) {
    std::vector<double> row(static_cast<std::size_t>(m) + 1, 0.0);
    row[0] = 1.0;
    for (int r = 1; r <= m; ++r)
        for (int c = r; c >= 1; --c) row[static_cast<std::size_t>(c)] += row[static_cast<std::size_t>(c - 1)];

    const int lo = std::max(0, static_cast<int>(std::ceil(m * (p - eps) - 1e-9)));
    const int hi = std::min(m, static_cast<int>(std::floor(m * (p + eps) + 1e-9)));
    double sum = 0.0;
    for (int n = lo; n <= hi; ++n)
        sum += row[static_cast<std::size_t>(n)] * std::pow(p, n) * std::pow(1.0 - p, m - n);
    return sum;
}

// Raw enumeration of all k^m tag sequences; feasible for tiny m only.
// Kahan-compensated so the k^m-term sum stays trustworthy to ~1e-15.
inline double enumerate_typicality(const std::vector<double>& p, int m, double eps) {
    const std::size_t k = p.size();
    double total = 0.0;
    double carry = 0.0;
    std::vector<std::size_t> seq(static_cast<std::size_t>(m), 0);
    while (true) {
        double weight = 1.0;
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < seq.size(); ++i) {
            weight *= p[seq[i]];
            ++counts[seq[i]];
        }
        bool typical = true;
        for (std::size_t j = 0; j < k; ++j) {
            const double n = counts[j];
            if (n < m * (p[j] - eps) - 1e-9 || n > m * (p[j] + eps) + 1e-9) {
                typical = false;
                break;
            }
        }
        if (typical) {
            const double y = weight - carry;
            const double t = total + y;
            carry = (t - total) - y;
            total = t;
        }

        // odometer
        std::size_t pos = 0;
        while (pos < seq.size() && ++seq[pos] == k) seq[pos++] = 0;
        if (pos == seq.size()) break;
    }
    return total;
}

// Constructive inside certificate: exhibit the point as a convex
// combination of the six octahedron vertices and re-verify it.
inline bool octahedron_inside_certificate(const qmix::Vec3& c, double slack = 1e-12) {
    const double leftover = 1.0 - qmix::l1_norm(c);
    if (leftover < -slack) return false;

    // weight |c_i| on vertex sign(c_i) e_i, leftover split over +e_x, -e_x
    double wsum = 0.0;
    qmix::Vec3 rebuilt{};
    for (std::size_t i = 0; i < 3; ++i) {
        const double w = std::abs(c[i]);
        wsum += w;
        rebuilt[i] += w * (c[i] >= 0.0 ? 1.0 : -1.0);
    }
    wsum += std::max(0.0, leftover); // (leftover/2)(+e_x) + (leftover/2)(-e_x) cancels
    if (std::abs(wsum - 1.0) > 1e-9) return false;
    for (std::size_t i = 0; i < 3; ++i)
        if (std::abs(rebuilt[i] - c[i]) > 1e-12) return false;
    return true;
}

// Separating-facet outside certificate: some sign pattern s has s.c > 1.
inline bool octahedron_outside_certificate(const qmix::Vec3& c, double slack = 1e-12) {
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            for (int sz : {-1, 1})
                if (sx * c[0] + sy * c[1] + sz * c[2] > 1.0 + slack) return true;
    return false;
}

} // namespace oracles
