#pragma once

// Spectrometer data: raw power spectra, run averaging, resampling, and
// insertion-loss spectra with a dynamic-range floor.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ipa::spectra {

inline constexpr double kDefaultFloorDb = 50.0;

enum class SpectrumUnit { linear_power, dB };

std::string to_string(SpectrumUnit unit);
SpectrumUnit parse_unit(const std::string& text);

class Spectrum {
public:
    /// Throws ValidationError on length mismatch, non-increasing wavelengths,
    /// non-finite values or negative linear power.
    Spectrum(std::vector<double> wavelengths_nm, std::vector<double> values,
             SpectrumUnit unit = SpectrumUnit::linear_power, std::string meta = {});

    const std::vector<double>& wavelengths_nm() const noexcept { return wavelengths_; }
    const std::vector<double>& values() const noexcept { return values_; }
    SpectrumUnit unit() const noexcept { return unit_; }
    const std::string& meta() const noexcept { return meta_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool operator==(const Spectrum&) const = default;

private:
    std::vector<double> wavelengths_;
    std::vector<double> values_;
    SpectrumUnit unit_;
    std::string meta_;
};

/// Spectrum file contents: the data plus every `# key: value` directive.
struct SpectrumFile {
    Spectrum spectrum;
    std::map<std::string, std::string> directives;
};

/// Parses `wavelength_nm,value` CSV. Rows are sorted by wavelength; duplicate
/// wavelengths, malformed rows and empty data sections raise ParseError.
SpectrumFile parse_spectrum(std::istream& in, const std::string& source = "<stream>");
SpectrumFile read_spectrum_file(const std::filesystem::path& path);
Spectrum load_spectrum(const std::filesystem::path& path);

/// Serializes in the format parse_spectrum reads; extra directives are written
/// as `# key: value` lines after the unit line.
std::string format_spectrum(const Spectrum& s, const std::map<std::string, std::string>& directives = {});

enum class AggregateMode { mean, median };

struct AggregatedSpectrum {
    Spectrum center;                ///< pointwise mean (or median)
    std::vector<double> stddev;     ///< sample standard deviation; empty when n_runs == 1
    std::size_t n_runs;
};

/// Pointwise statistics over repeated runs on one grid.
AggregatedSpectrum aggregate_runs(std::span<const Spectrum> runs, AggregateMode mode = AggregateMode::mean);

struct LossSpectrum {
    std::vector<double> wavelengths_nm;
    std::vector<double> loss_db;
    std::vector<bool> floored;
    std::size_t n_runs = 1;
    std::vector<double> stddev_db;  ///< present iff n_runs > 1
    double floor_db = kDefaultFloorDb;
    std::string meta;

    std::size_t size() const noexcept { return loss_db.size(); }
    /// Throws ValidationError when an invariant is broken.
    void validate() const;

    bool operator==(const LossSpectrum&) const = default;
};

/// Flat spectrum on the grid, convenient as an all-pass filter set.
Spectrum constant_spectrum(std::span<const double> grid, double value,
                           SpectrumUnit unit = SpectrumUnit::linear_power);

/// -10 log10[P_mes / (P_ref T_f)], clamped into [0, floor_db]. All inputs must
/// share one grid.
LossSpectrum insertion_loss(const Spectrum& ref, const Spectrum& mes, const Spectrum& filters,
                            double floor_db = kDefaultFloorDb);

/// As above, propagating run statistics into stddev_db.
LossSpectrum insertion_loss(const AggregatedSpectrum& ref, const AggregatedSpectrum& mes, const Spectrum& filters,
                            double floor_db = kDefaultFloorDb);

/// Linear interpolation onto `grid`; throws DomainError on extrapolation.
Spectrum resample(const Spectrum& s, std::span<const double> grid);

/// Linear-in-dB interpolation. A resampled point is floored only when it sits
/// at the floor, i.e. both bracketing samples were floored.
LossSpectrum resample(const LossSpectrum& s, std::span<const double> grid);

/// Interprets a dB spectrum as insertion loss: negatives clamp to 0, values at
/// or above floor_db become floored.
LossSpectrum loss_from_db(const Spectrum& s, double floor_db = kDefaultFloorDb);

/// The loss values as a dB Spectrum, suitable for format_spectrum.
Spectrum to_spectrum(const LossSpectrum& loss);

}  // namespace ipa::spectra
