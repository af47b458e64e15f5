#pragma once

// Subcarrier-wave QKD: sideband power under phase modulation and the Holevo
// bound on eavesdropper information as the modulation index is manipulated.

#include <utility>
#include <vector>

namespace ipa::scw {

/// Attacked modulation indices must stay below the first zero of J0(2m), where
/// 1 - J0^2(2m) stops increasing.
inline constexpr double kMonotoneWindowM = 1.2024;

inline constexpr double kBesselMaxArgument = 12.0;

struct ScwParams {
    double alpha0_sq;  ///< total mean photon number |alpha_0|^2
    double m;          ///< modulation index, radians
    double dm;         ///< multiplicative factor on m
};

enum class SidebandMode { exact, small_m };

/// Partial sum of the J0 power series together with the first omitted term.
struct SeriesSum {
    double value;
    double first_omitted;
    int terms;
};

/// Sum of the first `terms` terms of sum_k (-t^2/4)^k / (k!)^2.
SeriesSum bessel_j0_partial(double t, int terms);

/// J0(t) for |t| <= 12; series stops once a term drops below 1e-16.
double bessel_j0(double t);

/// h(p) in bits, h(0) = h(1) = 0.
double binary_entropy(double p);

double sideband_power(double alpha0_sq, double m, SidebandMode mode = SidebandMode::exact);

/// Sideband-to-carrier power ratio (1 - J0^2(m)) / J0^2(m).
double sideband_carrier_ratio(double m);

/// chi(A:E) = h((1 - exp(-|alpha_0|^2 (1 - J0^2(2m)))) / 2).
double holevo_bound(double alpha0_sq, double m);

/// (chi at m*dm, chi at m). Throws DomainError when m*dm leaves the monotone window.
std::pair<double, double> holevo_gain(const ScwParams& params);

struct HolevoPoint {
    double dm;
    double chi_attacked;
    double chi_baseline;
};

std::vector<HolevoPoint> holevo_curve(double alpha0_sq, double m, const std::vector<double>& dms);

}  // namespace ipa::scw
