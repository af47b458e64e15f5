#include "ipa/scw.hpp"

#include <cmath>
#include <string>

#include "ipa/error.hpp"

namespace ipa::scw {

namespace {

constexpr double kSeriesCutoff = 1e-16;

void check_bessel_argument(double t) {
    if (!std::isfinite(t) || std::abs(t) > kBesselMaxArgument)
        throw DomainError("bessel_j0 argument " + std::to_string(t) + " outside [-12, 12]");
}

void check_alpha0(double alpha0_sq) {
    if (!(alpha0_sq >= 0.0) || !std::isfinite(alpha0_sq))
        throw DomainError("|alpha_0|^2 must be finite and nonnegative");
}

}  // namespace

SeriesSum bessel_j0_partial(double t, int terms) {
    check_bessel_argument(t);
    const double q = -0.25 * t * t;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        sum += term;
        term *= q / (static_cast<double>(k + 1) * static_cast<double>(k + 1));
    }
    return {sum, term, terms};
}

double bessel_j0(double t) {
    check_bessel_argument(t);
    const double q = -0.25 * t * t;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; std::abs(term) >= kSeriesCutoff; ++k) {
        sum += term;
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
    }
    return sum;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binary_entropy argument outside [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double sideband_power(double alpha0_sq, double m, SidebandMode mode) {
    check_alpha0(alpha0_sq);
    if (!(m >= 0.0)) throw DomainError("modulation index must be nonnegative");
    if (mode == SidebandMode::small_m) {
        check_bessel_argument(m);
        return alpha0_sq * m * m / 2.0;
    }
    const double j0 = bessel_j0(m);
    return alpha0_sq * (1.0 - j0 * j0);
}

double sideband_carrier_ratio(double m) {
    const double j0 = bessel_j0(m);
    if (j0 == 0.0) throw DomainError("carrier vanishes at a zero of J0");
    return (1.0 - j0 * j0) / (j0 * j0);
}

double holevo_bound(double alpha0_sq, double m) {
    check_alpha0(alpha0_sq);
    if (!(m >= 0.0)) throw DomainError("modulation index must be nonnegative");
    const double j0 = bessel_j0(2.0 * m);
    const double p = -std::expm1(-alpha0_sq * (1.0 - j0 * j0)) / 2.0;
    return binary_entropy(p);
}

std::pair<double, double> holevo_gain(const ScwParams& params) {
    if (!(params.dm >= 0.0)) throw DomainError("dm must be nonnegative");
    const double attacked = params.m * params.dm;
    if (attacked > kMonotoneWindowM)
        throw DomainError("attacked modulation index " + std::to_string(attacked) +
                          " exceeds the monotone window m <= 1.2024");
    if (params.m > kMonotoneWindowM)
        throw DomainError("baseline modulation index exceeds the monotone window m <= 1.2024");
    return {holevo_bound(params.alpha0_sq, attacked), holevo_bound(params.alpha0_sq, params.m)};
}

std::vector<HolevoPoint> holevo_curve(double alpha0_sq, double m, const std::vector<double>& dms) {
    std::vector<HolevoPoint> out;
    out.reserve(dms.size());
    for (double dm : dms) {
        const auto [attacked, baseline] = holevo_gain({alpha0_sq, m, dm});
        out.push_back({dm, attacked, baseline});
    }
    return out;
}

}  // namespace ipa::scw
