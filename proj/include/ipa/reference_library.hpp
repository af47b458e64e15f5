#pragma once

// Bundled component library built from published point values.
//
// Only the loss minima (and coarse ranges) of the characterised components are
// published, so each direction carries a synthetic piecewise-linear curve whose
// minimum reproduces the published point exactly. The curves are tagged
// provenance=synthetic; the points keep their own provenance.

#include <string>
#include <vector>

#include "ipa/budget.hpp"

namespace ipa::budget {

/// Library id that resolves to reference_library() instead of a directory.
inline constexpr const char* kBuiltinLibrary = "builtin:reference";

struct AnchoredPoint {
    std::string component_id;
    ReferencePoint point;
};

/// Every published point of the bundled library, in a fixed order.
std::vector<AnchoredPoint> reference_points();

/// The bundled library on the canonical 400-800 nm grid with a 50 dB floor.
ComponentLibrary reference_library();

}  // namespace ipa::budget
