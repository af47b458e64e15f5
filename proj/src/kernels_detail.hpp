#pragma once

// Per-point bodies shared by the serial and OpenMP kernels so both paths
// evaluate exactly the same floating-point sequence.

#include <cstddef>

#include "ipa/kernels.hpp"
#include "ipa/statemath.hpp"

namespace ipa::kernels::detail {

struct EnvelopePoint {
    double min_total;
    double max_total;
    bool min_floored;
    bool max_floored;
};

inline EnvelopePoint envelope_at(const SlotTable& slots, std::size_t i) {
    EnvelopePoint out{0.0, 0.0, false, false};
    for (const auto& alternatives : slots) {
        std::size_t lo = 0;
        std::size_t hi = 0;
        for (std::size_t a = 1; a < alternatives.size(); ++a) {
            const double v = alternatives[a].loss_db[i];
            const bool f = (*alternatives[a].floored)[i];
            const double vlo = alternatives[lo].loss_db[i];
            const double vhi = alternatives[hi].loss_db[i];
            if (v < vlo || (v == vlo && !f && (*alternatives[lo].floored)[i])) lo = a;
            if (v > vhi || (v == vhi && !f && (*alternatives[hi].floored)[i])) hi = a;
        }
        out.min_total += alternatives[lo].loss_db[i];
        out.max_total += alternatives[hi].loss_db[i];
        out.min_floored = out.min_floored || (*alternatives[lo].floored)[i];
        out.max_floored = out.max_floored || (*alternatives[hi].floored)[i];
    }
    return out;
}

void check_slots(const SlotTable& slots, std::size_t grid_size);

}  // namespace ipa::kernels::detail
