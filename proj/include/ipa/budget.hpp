#pragma once

// Eavesdropper power budgets along a chain of fiber components:
// P(lambda) = P_in - sum_n loss_n(lambda), compared against the minimum optical
// power known to induce photorefraction in the transmitter's modulators.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipa/spectra.hpp"

namespace ipa::budget {

/// Fiber-damage limited injection power.
inline constexpr double kDefaultInputPowerDbm = 40.0;

enum class ComponentKind {
    voa_em,
    voa_eo,
    foa_absorption,
    foa_scattering,
    cwdm,
    dwdm,
    isolator,
    circulator,
    beamsplitter,
    custom,
};

enum class Provenance { paper_table, paper_text, measured, synthetic };

std::string to_string(ComponentKind kind);
ComponentKind parse_kind(const std::string& text);
std::string to_string(Provenance p);
Provenance parse_provenance(const std::string& text);

/// A published point value: the loss minimum of one direction.
struct ReferencePoint {
    std::string direction;
    double loss_db;
    double wavelength_nm;
    Provenance provenance;
    std::string note;

    bool operator==(const ReferencePoint&) const = default;
};

struct Component {
    std::string id;
    ComponentKind kind = ComponentKind::custom;
    Provenance provenance = Provenance::measured;  ///< of the loss curves
    std::map<std::string, spectra::LossSpectrum> losses;  ///< keyed by direction label
    std::vector<ReferencePoint> reference_points;
    std::map<std::string, double> datasheet;

    /// Throws ValidationError unless every direction lies on `grid`.
    void validate(std::span<const double> grid) const;
};

/// Components keyed by id, all sampled on one wavelength grid.
class ComponentLibrary {
public:
    explicit ComponentLibrary(std::vector<double> grid);

    const std::vector<double>& grid() const noexcept { return grid_; }
    void add(Component component);
    bool contains(const std::string& id) const { return components_.count(id) != 0; }
    const Component& at(const std::string& id) const;
    const spectra::LossSpectrum& loss(const std::string& id, const std::string& direction) const;
    const std::map<std::string, Component>& components() const noexcept { return components_; }

private:
    std::vector<double> grid_;
    std::map<std::string, Component> components_;
};

enum class PowerUnit { dBm, mW, nW };

std::string to_string(PowerUnit unit);
PowerUnit parse_power_unit(const std::string& text);

/// dBm = 10 log10(P / 1 mW). Throws DomainError for nonpositive linear power.
double convert_power(double value, PowerUnit from, PowerUnit to);

struct IpaThreshold {
    double power;
    PowerUnit unit;
    std::optional<double> wavelength_nm;
    std::string source;

    double dbm() const { return convert_power(power, unit, PowerUnit::dBm); }
    void validate() const;
};

/// The single numeric registry entry: 3 nW, the lowest published IPA power.
std::vector<IpaThreshold> default_thresholds();

struct Alternative {
    std::string component_id;
    std::string direction;
};

struct Slot {
    std::string label;
    std::vector<Alternative> alternatives;
};

struct Chain {
    std::string name;
    std::vector<Slot> slots;
    double input_power_dbm = kDefaultInputPowerDbm;
    std::vector<IpaThreshold> thresholds;

    /// Throws ValidationError for empty slots or unresolvable references.
    void validate(const ComponentLibrary& library) const;
};

struct Band {
    double lo_nm;
    double hi_nm;

    bool operator==(const Band&) const = default;
};

struct PowerBudget {
    std::vector<double> wavelengths_nm;
    std::vector<double> power_dbm;
    double threshold_dbm;  ///< NaN until compared against a threshold
    std::vector<Band> bands;
    std::vector<bool> conservative_flags;
};

/// Power for one concrete selection (index of the chosen alternative per slot).
PowerBudget chain_power(const Chain& chain, const ComponentLibrary& library, std::span<const std::size_t> selection);

enum class Execution { serial, parallel };

struct Envelope {
    std::vector<double> wavelengths_nm;
    std::vector<double> min_total_db;
    std::vector<double> max_total_db;
    std::vector<bool> min_floored;
    std::vector<bool> max_floored;
};

/// Pointwise min/max total loss over every selection of alternatives.
Envelope envelope(const Chain& chain, const ComponentLibrary& library, Execution exec = Execution::parallel);

/// Maximal runs of grid points with power strictly above threshold, as [first, last].
std::vector<Band> vulnerability_bands(std::span<const double> wavelengths_nm, std::span<const double> power_dbm,
                                      double threshold_dbm);

enum class Verdict { protected_, vulnerable, indeterminate };

std::string to_string(Verdict v);

struct BandFinding {
    Band band;
    int severity_rank;       ///< 1 = shortest wavelength = highest severity
    bool conservative_only;  ///< every point relies on floored loss data
};

struct ThresholdFinding {
    IpaThreshold threshold;
    double threshold_dbm;
    std::vector<BandFinding> bands;
    Verdict verdict;
};

struct ExtremeFinding {
    std::vector<double> power_dbm;
    std::vector<bool> conservative_flags;
    std::vector<ThresholdFinding> thresholds;
};

struct IpaReport {
    std::string chain_name;
    double input_power_dbm;
    std::vector<double> wavelengths_nm;
    ExtremeFinding max_power;  ///< eavesdropper-best: minimum total loss
    ExtremeFinding min_power;  ///< maximum total loss

    /// Per-threshold verdicts of the eavesdropper-best extreme.
    std::vector<Verdict> verdicts() const;
};

IpaReport assess_ipa(const Chain& chain, const ComponentLibrary& library, std::span<const IpaThreshold> thresholds);

}  // namespace ipa::budget
