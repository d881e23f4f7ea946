#include "qmix/families.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qmix {

const char* to_string(BellKind kind) {
    switch (kind) {
        case BellKind::PhiPlus: return "phi+";
        case BellKind::PhiMinus: return "phi-";
        case BellKind::PsiPlus: return "psi+";
        case BellKind::PsiMinus: return "psi-";
    }
    return "unknown";
}

const char* to_string(Provenance p) {
    return p == Provenance::ProperPreparation ? "proper" : "reduced";
}

PureState bell_state(BellKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case BellKind::PhiPlus: return PureState({r, 0.0, 0.0, r});
        case BellKind::PhiMinus: return PureState({r, 0.0, 0.0, -r});
        case BellKind::PsiPlus: return PureState({0.0, r, r, 0.0});
        case BellKind::PsiMinus: return PureState({0.0, r, -r, 0.0});
    }
    throw std::invalid_argument("bell_state: unknown kind");
}

DensityOperator MixtureComponent::density() const {
    if (const auto* pure = std::get_if<PureState>(&state)) {
        std::optional<BipartiteDims> parts;
        if (pure->dim() == 4) parts = BipartiteDims{2, 2};
        return validate_density(pure->projector(), parts);
    }
    return std::get<DensityOperator>(state);
}

std::size_t MixtureComponent::dim() const {
    if (const auto* pure = std::get_if<PureState>(&state)) return pure->dim();
    return std::get<DensityOperator>(state).dim();
}

void MixtureSpec::validate() const {
    if (components.empty()) throw std::invalid_argument("MixtureSpec: no components");

    double weight_sum = 0.0;
    std::set<int> tags;
    const std::size_t d = components.front().dim();
    for (const MixtureComponent& comp : components) {
        if (!(comp.weight >= 0.0))
            throw std::invalid_argument("MixtureSpec: negative or non-finite weight");
        weight_sum += comp.weight;
        if (!tags.insert(comp.tag).second)
            throw std::invalid_argument("MixtureSpec: duplicate component tag");
        if (comp.dim() != d) throw std::invalid_argument("MixtureSpec: mixed component dimensions");
    }
    if (std::abs(weight_sum - 1.0) > 1e-12)
        throw std::invalid_argument("MixtureSpec: weights do not sum to 1 within 1e-12");
}

std::size_t MixtureSpec::dim() const {
    if (components.empty()) throw std::invalid_argument("MixtureSpec: no components");
    return components.front().dim();
}

DensityOperator mix(const MixtureSpec& spec) {
    spec.validate();
    ComplexMatrix sum(spec.dim(), spec.dim());
    std::optional<BipartiteDims> parts;
    bool first = true;
    for (const MixtureComponent& comp : spec.components) {
        const DensityOperator rho = comp.density();
        sum += cplx(comp.weight) * rho.matrix();
        // Propagate a factorization only when every component agrees on it.
        if (first) {
            parts = rho.parts();
            first = false;
        } else if (parts != rho.parts()) {
            parts.reset();
        }
    }
    if (!parts && sum.rows() == 4) parts = BipartiteDims{2, 2};
    return validate_density(sum, parts);
}

WernerParam::WernerParam(double lambda_in) : lambda(lambda_in) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("WernerParam: lambda must lie in [0, 1]");
}

DensityOperator werner(WernerParam p) {
    ComplexMatrix m = bell_state(BellKind::PsiMinus).projector();
    m *= cplx(p.lambda);
    m += cplx((1.0 - p.lambda) / 4.0) * ComplexMatrix::identity(4);
    return validate_density(m, BipartiteDims{2, 2});
}

DensityOperator bell_diagonal(const std::array<double, 4>& p) {
    double sum = 0.0;
    for (double w : p) {
        if (!(w >= 0.0)) throw std::invalid_argument("bell_diagonal: negative probability");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("bell_diagonal: probabilities do not sum to 1");

    ComplexMatrix m(4, 4);
    for (std::size_t k = 0; k < 4; ++k)
        m += cplx(p[k]) * bell_state(kBellKinds[k]).projector();
    return validate_density(m, BipartiteDims{2, 2});
}

} // namespace qmix
