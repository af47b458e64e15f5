#pragma once

#include <vector>

namespace ipa {

/// Inclusive grid start..stop. Points are start + (stop - start) * i / n so
/// integer-valued points such as 1.0 or 600.0 land exactly. Throws
/// DomainError unless (stop - start) / step is an integer to within 1e-9.
std::vector<double> uniform_grid(double start, double stop, double step);

/// 400-800 nm inclusive, 1 nm step.
std::vector<double> canonical_grid();

inline constexpr double kCanonicalStartNm = 400.0;
inline constexpr double kCanonicalStopNm = 800.0;
inline constexpr double kCanonicalStepNm = 1.0;

}  // namespace ipa
