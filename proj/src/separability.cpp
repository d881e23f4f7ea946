#include "qmix/separability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmix/eigen.hpp"

namespace qmix {

const char* to_string(Status s) { return s == Status::Separable ? "Separable" : "Entangled"; }

const char* to_string(Method m) { return m == Method::PPT ? "PPT" : "OctahedronGeometry"; }

const char* to_string(MixtureVerdict v) {
    switch (v) {
        case MixtureVerdict::Entangled: return "Entangled";
        case MixtureVerdict::ProperlySeparable: return "ProperlySeparable";
        case MixtureVerdict::ImproperlySeparable: return "ImproperlySeparable";
        case MixtureVerdict::SeparableUnknownComposition: return "SeparableUnknownComposition";
    }
    return "unknown";
}

SeparabilityVerdict ppt_classify(const DensityOperator& rho, double tol) {
    const BipartiteDims dims = rho.parts_or_default();
    const std::size_t lo = std::min(dims.a, dims.b);
    const std::size_t hi = std::max(dims.a, dims.b);
    // PPT is necessary and sufficient only for 2x2 and 2x3; refuse larger
    // systems rather than hand back a merely-necessary verdict.
    if (!(lo == 2 && (hi == 2 || hi == 3)))
        throw std::invalid_argument("ppt_classify: only 2x2 and 2x3 systems are decidable");

    const ComplexMatrix pt = partial_transpose(rho.matrix(), dims, Subsystem::B);
    const double witness = hermitian_eigenvalues(pt).front();
    const Status status = witness < -tol ? Status::Entangled : Status::Separable;
    return SeparabilityVerdict{status, witness, Method::PPT};
}

SeparabilityVerdict octahedron_classify(const CVector& cv, double tol) {
    const double margin = 1.0 - l1_norm(cv.c);
    const Status status =
        in_octahedron(cv, tol) == Region::Outside ? Status::Entangled : Status::Separable;
    return SeparabilityVerdict{status, margin, Method::OctahedronGeometry};
}

CHSHReport chsh_criterion(const DensityOperator& rho, double tol) {
    const FanoForm f = fano_decompose(rho);
    const Mat3 gram = f.c.transpose_times_self();

    ComplexMatrix g(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) g(i, j) = gram(i, j);
    const std::vector<double> eig = hermitian_eigenvalues(g);

    const double m = std::max(0.0, eig[1]) + std::max(0.0, eig[2]);
    return CHSHReport{m, 2.0 * std::sqrt(m), m > 1.0 + tol};
}

Classification classify_mixture(const MixtureSpec& spec, double tol) {
    spec.validate();

    Classification out;
    out.ensemble = ppt_classify(mix(spec), tol);

    if (spec.provenance == Provenance::ProperPreparation) {
        for (const MixtureComponent& comp : spec.components) {
            if (comp.weight <= 1e-12) continue; // not part of the prepared ensemble
            out.per_component.emplace_back(comp.tag, ppt_classify(comp.density(), tol));
        }
    }

    if (out.ensemble.status == Status::Entangled) {
        out.verdict = MixtureVerdict::Entangled;
        return out;
    }
    if (spec.provenance == Provenance::ReducedOnly) {
        out.verdict = MixtureVerdict::SeparableUnknownComposition;
        return out;
    }
    const bool any_entangled =
        std::any_of(out.per_component.begin(), out.per_component.end(),
                    [](const auto& pc) { return pc.second.status == Status::Entangled; });
    out.verdict = any_entangled ? MixtureVerdict::ImproperlySeparable
                                : MixtureVerdict::ProperlySeparable;
    return out;
}

namespace {

// Bisection on the sign of a margin function (positive on the separable /
// non-violating side) to interval width tol.
double bisect_margin(const std::function<double(double)>& margin, double lo, double hi,
                     double tol) {
    if (!(lo < hi)) throw std::invalid_argument("boundary search: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("boundary search: tol must be positive");

    const bool lo_pos = margin(lo) > 0.0;
    const bool hi_pos = margin(hi) > 0.0;
    if (lo_pos == hi_pos)
        throw std::invalid_argument("boundary search: no sign change on [lo, hi]");

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if ((margin(mid) > 0.0) == lo_pos)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double separability_boundary(const StateFamily& family, double lo, double hi, double tol) {
    return bisect_margin(
        [&family](double x) { return ppt_classify(family(x)).witness; }, lo, hi, tol);
}

double chsh_violation_boundary(const StateFamily& family, double lo, double hi, double tol) {
    return bisect_margin(
        [&family](double x) { return 1.0 - chsh_criterion(family(x)).m; }, lo, hi, tol);
}

} // namespace qmix
