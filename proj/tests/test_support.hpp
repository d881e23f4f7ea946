// Shared seeded generators and comparison helpers for the test suites.

#pragma once

#include <cmath>
#include <vector>

#include "qmix/density.hpp"
#include "qmix/ensemble.hpp"
#include "qmix/families.hpp"

namespace support {

inline double max_entry_diff(const qmix::ComplexMatrix& a, const qmix::ComplexMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline qmix::PureState random_pure_state(std::size_t dim, qmix::RngStream& rng) {
    std::vector<qmix::cplx> amps(dim);
    double n2 = 0.0;
    for (auto& a : amps) {
        a = qmix::cplx(rng.next_gaussian(), rng.next_gaussian());
        n2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return qmix::PureState(std::move(amps));
}

// Product of independent single-qubit pure states, as a 4-dim pure state.
inline qmix::PureState random_product_state(qmix::RngStream& rng) {
    const qmix::PureState a = random_pure_state(2, rng);
    const qmix::PureState b = random_pure_state(2, rng);
    std::vector<qmix::cplx> amps(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) amps[i * 2 + j] = a[i] * b[j];
    return qmix::PureState(std::move(amps));
}

inline std::vector<double> dirichlet(std::size_t k, qmix::RngStream& rng) {
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& x : w) {
        double u = rng.next_unit();
        while (u == 0.0) u = rng.next_unit();
        x = -std::log(u);
        sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
}

// Random full-support mixture of pure states (a generic valid density).
inline qmix::DensityOperator random_density(std::size_t dim, std::size_t terms,
                                            qmix::RngStream& rng) {
    const std::vector<double> w = dirichlet(terms, rng);
    qmix::ComplexMatrix sum(dim, dim);
    for (std::size_t t = 0; t < terms; ++t)
        sum += qmix::cplx(w[t]) * random_pure_state(dim, rng).projector();
    std::optional<qmix::BipartiteDims> parts;
    if (dim == 4) parts = qmix::BipartiteDims{2, 2};
    return qmix::validate_density(sum, parts);
}

inline qmix::DensityOperator random_bell_diagonal(qmix::RngStream& rng) {
    const std::vector<double> w = dirichlet(4, rng);
    return qmix::bell_diagonal({w[0], w[1], w[2], w[3]});
}

} // namespace support
