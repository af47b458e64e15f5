#include <string>

#include "ipa/error.hpp"
#include "kernels_detail.hpp"

namespace ipa::kernels {

namespace detail {

void check_slots(const SlotTable& slots, std::size_t grid_size) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].empty()) throw ValidationError("slot " + std::to_string(s) + " has no alternatives");
        for (const auto& col : slots[s])
            if (col.loss_db.size() != grid_size || col.floored == nullptr || col.floored->size() != grid_size)
                throw ValidationError("slot " + std::to_string(s) + " alternative is not on the sweep grid");
    }
}

}  // namespace detail

namespace serial {

EnvelopeResult envelope_sweep(const SlotTable& slots, std::size_t grid_size) {
    detail::check_slots(slots, grid_size);
    EnvelopeResult r{std::vector<double>(grid_size), std::vector<double>(grid_size),
                     std::vector<bool>(grid_size), std::vector<bool>(grid_size)};
    for (std::size_t i = 0; i < grid_size; ++i) {
        const auto p = detail::envelope_at(slots, i);
        r.min_total_db[i] = p.min_total;
        r.max_total_db[i] = p.max_total;
        r.min_floored[i] = p.min_floored;
        r.max_floored[i] = p.max_floored;
    }
    return r;
}

std::vector<double> usd_sweep(double alpha_mag, int n_half, std::span<const double> xs) {
    std::vector<double> p(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] = statemath::usd_probability(alpha_mag, n_half, xs[i]);
    return p;
}

}  // namespace serial
}  // namespace ipa::kernels
