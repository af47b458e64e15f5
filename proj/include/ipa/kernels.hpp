#pragma once

// Data-parallel sweeps. Each kernel has a serial reference in kernels::serial
// and an OpenMP version in kernels::omp with identical results bit for bit;
// the library entry points call the OpenMP versions.

#include <cstddef>
#include <span>
#include <vector>

namespace ipa::kernels {

/// One alternative of a chain slot, sampled on the shared grid.
struct LossColumn {
    std::span<const double> loss_db;
    const std::vector<bool>* floored;
};

/// Slot-major view: slots[s] lists the alternatives of slot s.
using SlotTable = std::vector<std::vector<LossColumn>>;

struct EnvelopeResult {
    std::vector<double> min_total_db;
    std::vector<double> max_total_db;
    std::vector<bool> min_floored;  ///< some selected minimum came from floored data
    std::vector<bool> max_floored;
};

// envelope_sweep: per-wavelength sum over slots of the min (max) loss among each
// slot's alternatives, accumulated in slot order. Ties prefer the non-floored
// alternative, then the lower index.
//
// usd_sweep: lambda_min of the remapped Gram matrix at each x, clamped to [0, 1].

namespace serial {
EnvelopeResult envelope_sweep(const SlotTable& slots, std::size_t grid_size);
std::vector<double> usd_sweep(double alpha_mag, int n_half, std::span<const double> xs);
}  // namespace serial

namespace omp {
EnvelopeResult envelope_sweep(const SlotTable& slots, std::size_t grid_size);
std::vector<double> usd_sweep(double alpha_mag, int n_half, std::span<const double> xs);
}  // namespace omp

/// Threads OpenMP will use for a parallel region (1 when built without OpenMP).
int max_threads();

}  // namespace ipa::kernels
