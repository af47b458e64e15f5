#include <cstdint>
#include <exception>
#include <mutex>

#include "kernels_detail.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ipa::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace omp {

EnvelopeResult envelope_sweep(const SlotTable& slots, std::size_t grid_size) {
    detail::check_slots(slots, grid_size);
    std::vector<double> lo(grid_size), hi(grid_size);
    // std::vector<bool> packs bits, so flags go through bytes while in the parallel region.
    std::vector<std::uint8_t> lo_f(grid_size), hi_f(grid_size);
    const auto n = static_cast<std::int64_t>(grid_size);

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto p = detail::envelope_at(slots, static_cast<std::size_t>(i));
        lo[i] = p.min_total;
        hi[i] = p.max_total;
        lo_f[i] = p.min_floored;
        hi_f[i] = p.max_floored;
    }

    return {std::move(lo), std::move(hi), std::vector<bool>(lo_f.begin(), lo_f.end()),
            std::vector<bool>(hi_f.begin(), hi_f.end())};
}

std::vector<double> usd_sweep(double alpha_mag, int n_half, std::span<const double> xs) {
    std::vector<double> p(xs.size());
    const auto n = static_cast<std::int64_t>(xs.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;

#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            p[i] = statemath::usd_probability(alpha_mag, n_half, xs[i]);
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return p;
}

}  // namespace omp
}  // namespace ipa::kernels
