#include "qmix/density.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "qmix/eigen.hpp"

namespace qmix {

PureState::PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("PureState: empty amplitude vector");
    double n2 = 0.0;
    for (const cplx& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("PureState: non-finite amplitude");
        n2 += std::norm(a);
    }
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::invalid_argument("PureState: norm differs from 1 beyond 1e-12");
}

PureState PureState::basis(std::size_t dim, std::size_t k) {
    if (k >= dim) throw std::invalid_argument("PureState::basis: index out of range");
    std::vector<cplx> amps(dim, 0.0);
    amps[k] = 1.0;
    return PureState(std::move(amps));
}

cplx PureState::inner(const PureState& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t k = 0; k < amps_.size(); ++k) s += std::conj(amps_[k]) * other.amps_[k];
    return s;
}

ComplexMatrix PureState::projector() const {
    ComplexMatrix out(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) out(i, j) = amps_[i] * std::conj(amps_[j]);
    return out;
}

ComplexMatrix PureState::column() const {
    ComplexMatrix out(dim(), 1);
    for (std::size_t i = 0; i < dim(); ++i) out(i, 0) = amps_[i];
    return out;
}

const char* to_string(DefectKind k) {
    switch (k) {
        case DefectKind::Shape: return "shape";
        case DefectKind::NonFinite: return "non-finite";
        case DefectKind::Hermiticity: return "hermiticity";
        case DefectKind::Trace: return "trace";
        case DefectKind::Positivity: return "positivity";
    }
    return "unknown";
}

DensityError::DensityError(DensityDefect defect)
    : std::runtime_error(defect.message), defect_(std::move(defect)) {}

DensityOperator DensityOperator::with_parts(BipartiteDims parts) const {
    if (parts.joint() != dim())
        throw std::invalid_argument("with_parts: factorization does not match dimension");
    DensityOperator out = *this;
    out.parts_ = parts;
    return out;
}

BipartiteDims DensityOperator::parts_or_default() const {
    if (parts_) return *parts_;
    if (dim() == 4) return {2, 2};
    throw std::invalid_argument("DensityOperator: no bipartite factorization recorded");
}

namespace {

DensityDefect make_defect(DefectKind kind, double magnitude, const std::string& what) {
    std::ostringstream msg;
    msg << "density validation failed: " << to_string(kind) << " violation (" << what
        << ", magnitude " << magnitude << ")";
    return DensityDefect{kind, magnitude, msg.str()};
}

} // namespace

std::optional<DensityDefect> check_density(const ComplexMatrix& m, double tol_psd) {
    if (!m.is_square() || m.rows() == 0)
        return make_defect(DefectKind::Shape, 0.0, "matrix must be square and nonempty");
    if (!m.all_finite())
        return make_defect(DefectKind::NonFinite, 0.0, "matrix has NaN or Inf entries");

    const double herm = m.hermiticity_defect();
    if (herm > 1e-12) return make_defect(DefectKind::Hermiticity, herm, "max |m_ij - conj(m_ji)|");

    const double trace_err = std::abs(m.trace() - cplx{1.0, 0.0});
    if (trace_err > 1e-12) return make_defect(DefectKind::Trace, trace_err, "|Tr - 1|");

    const double min_eig = hermitian_eigenvalues(m).front();
    if (min_eig < -tol_psd)
        return make_defect(DefectKind::Positivity, -min_eig, "minimum eigenvalue below zero");

    return std::nullopt;
}

DensityOperator validate_density(const ComplexMatrix& m, std::optional<BipartiteDims> parts,
                                 double tol_psd) {
    if (auto defect = check_density(m, tol_psd)) throw DensityError(*defect);
    if (parts && parts->joint() != m.rows())
        throw std::invalid_argument("validate_density: factorization does not match dimension");
    return DensityOperator(m, parts);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, BipartiteDims dims, Subsystem keep) {
    const std::size_t da = dims.a, db = dims.b;
    if (!m.is_square() || m.rows() != da * db)
        throw std::invalid_argument("partial_trace: matrix is not d_A*d_B square");

    if (keep == Subsystem::A) {
        ComplexMatrix out(da, da);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t k = 0; k < da; ++k) {
                cplx s = 0.0;
                for (std::size_t j = 0; j < db; ++j) s += m(i * db + j, k * db + j);
                out(i, k) = s;
            }
        return out;
    }
    ComplexMatrix out(db, db);
    for (std::size_t j = 0; j < db; ++j)
        for (std::size_t l = 0; l < db; ++l) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < da; ++i) s += m(i * db + j, i * db + l);
            out(j, l) = s;
        }
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims, Subsystem side) {
    const std::size_t da = dims.a, db = dims.b;
    if (!m.is_square() || m.rows() != da * db)
        throw std::invalid_argument("partial_transpose: matrix is not d_A*d_B square");

    ComplexMatrix out(da * db, da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t k = 0; k < da; ++k)
                for (std::size_t l = 0; l < db; ++l) {
                    if (side == Subsystem::B)
                        out(i * db + j, k * db + l) = m(i * db + l, k * db + j);
                    else
                        out(i * db + j, k * db + l) = m(k * db + j, i * db + l);
                }
    return out;
}

DensityOperator reduced_state(const DensityOperator& rho, Subsystem keep) {
    const BipartiteDims dims = rho.parts_or_default();
    return validate_density(partial_trace(rho.matrix(), dims, keep));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    const ComplexMatrix diff = rho.matrix() - sigma.matrix();
    double sum = 0.0;
    for (double ev : hermitian_eigenvalues(diff)) sum += std::abs(ev);
    return 0.5 * sum;
}

} // namespace qmix
