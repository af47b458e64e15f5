#include "ipa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipa/error.hpp"

namespace ipa {

std::vector<double> uniform_grid(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
        throw DomainError("grid bounds must be finite");
    if (step <= 0.0) throw DomainError("grid step must be positive");
    if (stop < start) throw DomainError("grid stop is below grid start");

    const double span = (stop - start) / step;
    const double count = std::round(span);
    if (std::abs(span - count) > 1e-9 * std::max(1.0, count))
        throw DomainError("grid span " + std::to_string(stop - start) + " is not a multiple of step " +
                          std::to_string(step));

    const auto n = static_cast<long long>(count);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    if (n == 0) {
        grid.push_back(start);
        return grid;
    }
    for (long long i = 0; i <= n; ++i)
        grid.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(n));
    grid.back() = stop;
    return grid;
}

std::vector<double> canonical_grid() {
    return uniform_grid(kCanonicalStartNm, kCanonicalStopNm, kCanonicalStepNm);
}

}  // namespace ipa
