// Separability classifiers: the PPT test (exact in 2x2 and 2x3), the
// Bell-diagonal octahedron test, the CHSH violation criterion, and the
// proper/improper-separability verdict on tagged mixtures.

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qmix/fano.hpp"
#include "qmix/families.hpp"

namespace qmix {

enum class Status { Separable, Entangled };
enum class Method { PPT, OctahedronGeometry };

const char* to_string(Status s);
const char* to_string(Method m);

struct SeparabilityVerdict {
    Status status;
    // Under PPT: minimum eigenvalue of the partial transpose (negative iff
    // entangled beyond tol). Under OctahedronGeometry: 1 - |c|_1, the signed
    // margin to the octahedron surface.
    double witness;
    Method method;
};

// Necessary-and-sufficient PPT test; only accepts 2x2 or 2x3 factorizations
// and refuses anything larger rather than return a merely-necessary verdict.
SeparabilityVerdict ppt_classify(const DensityOperator& rho, double tol = 1e-9);

// Geometry-method verdict for a Bell-diagonal c-vector.
SeparabilityVerdict octahedron_classify(const CVector& cv, double tol = 1e-9);

struct CHSHReport {
    double m;        // sum of the two largest eigenvalues of C^T C
    double max_chsh; // 2 sqrt(m)
    bool violates;   // m > 1 + tol
};

// Two-qubit CHSH criterion: some setting choice violates a CHSH inequality
// iff m(rho) > 1.
CHSHReport chsh_criterion(const DensityOperator& rho, double tol = 1e-9);

enum class MixtureVerdict {
    Entangled,
    ProperlySeparable,
    ImproperlySeparable,
    SeparableUnknownComposition,
};

const char* to_string(MixtureVerdict v);

struct Classification {
    MixtureVerdict verdict;
    // (tag, verdict) for every component at weight > 1e-12; empty when the
    // provenance is ReducedOnly (no composition facts to classify).
    std::vector<std::pair<int, SeparabilityVerdict>> per_component;
    SeparabilityVerdict ensemble;
};

// Ensemble verdict from ppt_classify(mix(spec)); the composition question
// is answered per component only for a proper preparation:
//   ensemble entangled                          -> Entangled
//   separable, ReducedOnly                      -> SeparableUnknownComposition
//   separable, proper, some component entangled -> ImproperlySeparable
//   separable, proper, all components separable -> ProperlySeparable
Classification classify_mixture(const MixtureSpec& spec, double tol = 1e-9);

using StateFamily = std::function<DensityOperator(double)>;

// Bisection on the PPT witness sign over family([lo, hi]); the endpoints
// must classify differently. |result - true crossing| <= tol.
double separability_boundary(const StateFamily& family, double lo, double hi, double tol = 1e-6);

// Same bisection on the CHSH criterion margin 1 - m.
double chsh_violation_boundary(const StateFamily& family, double lo, double hi, double tol = 1e-6);

} // namespace qmix
