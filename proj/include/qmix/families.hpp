// Named two-qubit state families: the Bell basis, Bell-diagonal mixtures,
// the Werner line, and general convex mixing of tagged components.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "qmix/density.hpp"

namespace qmix {

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline constexpr std::array<BellKind, 4> kBellKinds = {
    BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus};

const char* to_string(BellKind kind);

PureState bell_state(BellKind kind);

// One weighted, tagged component of a mixture. Components may themselves be
// mixed states; nothing downstream assumes purity.
struct MixtureComponent {
    double weight = 0.0;
    std::variant<PureState, DensityOperator> state;
    int tag = 0;

    bool is_pure() const { return std::holds_alternative<PureState>(state); }
    DensityOperator density() const;
    std::size_t dim() const;
};

// A declared preparation (every run is in a definite component state) versus
// a reduced description where no composition facts exist.
enum class Provenance { ProperPreparation, ReducedOnly };

const char* to_string(Provenance p);

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    Provenance provenance = Provenance::ProperPreparation;

    // Throws std::invalid_argument on: empty spec, negative weights, weight
    // sum off 1 by more than 1e-12, duplicate tags, mismatched dims.
    void validate() const;
    std::size_t dim() const;
};

// Weighted sum of the component densities.
DensityOperator mix(const MixtureSpec& spec);

// Mixing parameter of the Werner line, restricted to [0, 1].
struct WernerParam {
    explicit WernerParam(double lambda);
    double lambda;
};

// lambda * |psi-><psi-| + (1 - lambda) * I/4
DensityOperator werner(WernerParam p);
inline DensityOperator werner(double lambda) { return werner(WernerParam(lambda)); }

// Convex combination of the four Bell projectors, probabilities in
// BellKind order (phi+, phi-, psi+, psi-).
DensityOperator bell_diagonal(const std::array<double, 4>& p);

} // namespace qmix
