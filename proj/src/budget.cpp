#include "ipa/budget.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "ipa/error.hpp"
#include "ipa/format.hpp"
#include "ipa/kernels.hpp"

namespace ipa::budget {

namespace {

constexpr std::array<std::pair<ComponentKind, const char*>, 10> kKindNames{{
    {ComponentKind::voa_em, "voa-em"},
    {ComponentKind::voa_eo, "voa-eo"},
    {ComponentKind::foa_absorption, "foa-absorption"},
    {ComponentKind::foa_scattering, "foa-scattering"},
    {ComponentKind::cwdm, "cwdm"},
    {ComponentKind::dwdm, "dwdm"},
    {ComponentKind::isolator, "isolator"},
    {ComponentKind::circulator, "circulator"},
    {ComponentKind::beamsplitter, "beamsplitter"},
    {ComponentKind::custom, "custom"},
}};

constexpr std::array<std::pair<Provenance, const char*>, 4> kProvenanceNames{{
    {Provenance::paper_table, "paper-table"},
    {Provenance::paper_text, "paper-text"},
    {Provenance::measured, "measured"},
    {Provenance::synthetic, "synthetic"},
}};

// Milliwatts per unit for the linear units.
double to_mw_factor(PowerUnit unit) {
    switch (unit) {
        case PowerUnit::mW: return 1.0;
        case PowerUnit::nW: return 1e-6;
        case PowerUnit::dBm: break;
    }
    throw DomainError("dBm has no linear scale factor");
}

kernels::SlotTable slot_table(const Chain& chain, const ComponentLibrary& library) {
    kernels::SlotTable table;
    table.reserve(chain.slots.size());
    for (const auto& slot : chain.slots) {
        std::vector<kernels::LossColumn> cols;
        cols.reserve(slot.alternatives.size());
        for (const auto& alt : slot.alternatives) {
            const auto& loss = library.loss(alt.component_id, alt.direction);
            cols.push_back({loss.loss_db, &loss.floored});
        }
        table.push_back(std::move(cols));
    }
    return table;
}

ExtremeFinding assess_extreme(const IpaReport& report, const std::vector<double>& total_loss_db,
                              const std::vector<bool>& floored, std::span<const IpaThreshold> thresholds) {
    ExtremeFinding out;
    const std::size_t n = total_loss_db.size();
    out.power_dbm.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.power_dbm[i] = report.input_power_dbm - total_loss_db[i];
    out.conservative_flags = floored;

    for (const auto& t : thresholds) {
        ThresholdFinding tf{t, t.dbm(), {}, Verdict::protected_};
        const auto bands = vulnerability_bands(report.wavelengths_nm, out.power_dbm, tf.threshold_dbm);
        bool supported = false;
        int rank = 0;
        for (const auto& b : bands) {
            bool conservative_only = true;
            for (std::size_t i = 0; i < n; ++i)
                if (report.wavelengths_nm[i] >= b.lo_nm && report.wavelengths_nm[i] <= b.hi_nm && !floored[i])
                    conservative_only = false;
            supported = supported || !conservative_only;
            tf.bands.push_back({b, ++rank, conservative_only});
        }
        if (!bands.empty()) tf.verdict = supported ? Verdict::vulnerable : Verdict::indeterminate;
        out.thresholds.push_back(std::move(tf));
    }
    return out;
}

}  // namespace

std::string to_string(ComponentKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "custom";
}

ComponentKind parse_kind(const std::string& text) {
    for (const auto& [k, name] : kKindNames)
        if (text == name) return k;
    throw ParseError("unknown component kind '" + text + "'");
}

std::string to_string(Provenance p) {
    for (const auto& [k, name] : kProvenanceNames)
        if (k == p) return name;
    return "measured";
}

Provenance parse_provenance(const std::string& text) {
    for (const auto& [k, name] : kProvenanceNames)
        if (text == name) return k;
    throw ParseError("unknown provenance '" + text + "'");
}

void Component::validate(std::span<const double> grid) const {
    if (id.empty()) throw ValidationError("component without id");
    if (losses.empty()) throw ValidationError("component '" + id + "' has no loss directions");
    for (const auto& [direction, loss] : losses) {
        try {
            loss.validate();
        } catch (const ValidationError& e) {
            throw ValidationError("component '" + id + "' direction '" + direction + "': " + e.what());
        }
        if (!std::equal(grid.begin(), grid.end(), loss.wavelengths_nm.begin(), loss.wavelengths_nm.end()))
            throw ValidationError("component '" + id + "' direction '" + direction + "' is not on the library grid");
    }
}

ComponentLibrary::ComponentLibrary(std::vector<double> grid) : grid_(std::move(grid)) {
    if (grid_.empty()) throw ValidationError("library grid is empty");
}

void ComponentLibrary::add(Component component) {
    component.validate(grid_);
    if (contains(component.id)) throw ValidationError("duplicate component id '" + component.id + "'");
    const std::string id = component.id;
    components_.emplace(id, std::move(component));
}

const Component& ComponentLibrary::at(const std::string& id) const {
    const auto it = components_.find(id);
    if (it == components_.end()) throw ValidationError("unknown component '" + id + "'");
    return it->second;
}

const spectra::LossSpectrum& ComponentLibrary::loss(const std::string& id, const std::string& direction) const {
    const auto& c = at(id);
    const auto it = c.losses.find(direction);
    if (it == c.losses.end())
        throw ValidationError("component '" + id + "' has no direction '" + direction + "'");
    return it->second;
}

std::string to_string(PowerUnit unit) {
    switch (unit) {
        case PowerUnit::dBm: return "dBm";
        case PowerUnit::mW: return "mW";
        case PowerUnit::nW: return "nW";
    }
    return "dBm";
}

PowerUnit parse_power_unit(const std::string& text) {
    if (text == "dBm") return PowerUnit::dBm;
    if (text == "mW") return PowerUnit::mW;
    if (text == "nW") return PowerUnit::nW;
    throw ParseError("unknown power unit '" + text + "' (expected dBm, mW or nW)");
}

double convert_power(double value, PowerUnit from, PowerUnit to) {
    if (!std::isfinite(value)) throw DomainError("power must be finite");
    if (from == to) {
        if (from != PowerUnit::dBm && !(value > 0.0)) throw DomainError("linear power must be positive");
        return value;
    }
    if (from == PowerUnit::dBm) return std::pow(10.0, value / 10.0) / to_mw_factor(to);
    if (!(value > 0.0)) throw DomainError("linear power must be positive");
    const double mw = value * to_mw_factor(from);
    if (to == PowerUnit::dBm) return 10.0 * std::log10(mw);
    return mw / to_mw_factor(to);
}

void IpaThreshold::validate() const {
    if (!std::isfinite(power)) throw ValidationError("threshold power must be finite");
    if (unit != PowerUnit::dBm && !(power > 0.0)) throw ValidationError("threshold power must be positive");
}

std::vector<IpaThreshold> default_thresholds() {
    return {IpaThreshold{3.0, PowerUnit::nW, std::nullopt, "minimum published IPA power"}};
}

void Chain::validate(const ComponentLibrary& library) const {
    if (!std::isfinite(input_power_dbm)) throw ValidationError("input power must be finite");
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].alternatives.empty())
            throw ValidationError("slot " + std::to_string(s) + " ('" + slots[s].label + "') has no alternatives");
        for (const auto& alt : slots[s].alternatives) (void)library.loss(alt.component_id, alt.direction);
    }
    for (const auto& t : thresholds) t.validate();
}

PowerBudget chain_power(const Chain& chain, const ComponentLibrary& library, std::span<const std::size_t> selection) {
    chain.validate(library);
    if (selection.size() != chain.slots.size())
        throw ValidationError("selection has " + std::to_string(selection.size()) + " entries for " +
                              std::to_string(chain.slots.size()) + " slots");

    const auto& grid = library.grid();
    PowerBudget out{grid, std::vector<double>(grid.size(), 0.0), std::numeric_limits<double>::quiet_NaN(), {},
                    std::vector<bool>(grid.size(), false)};
    std::vector<double> total(grid.size(), 0.0);
    for (std::size_t s = 0; s < chain.slots.size(); ++s) {
        if (selection[s] >= chain.slots[s].alternatives.size())
            throw ValidationError("selection index out of range for slot " + std::to_string(s));
        const auto& alt = chain.slots[s].alternatives[selection[s]];
        const auto& loss = library.loss(alt.component_id, alt.direction);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            total[i] += loss.loss_db[i];
            if (loss.floored[i]) out.conservative_flags[i] = true;
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) out.power_dbm[i] = chain.input_power_dbm - total[i];
    return out;
}

Envelope envelope(const Chain& chain, const ComponentLibrary& library, Execution exec) {
    chain.validate(library);
    const auto table = slot_table(chain, library);
    const std::size_t n = library.grid().size();
    auto r = exec == Execution::serial ? kernels::serial::envelope_sweep(table, n)
                                       : kernels::omp::envelope_sweep(table, n);
    return {library.grid(), std::move(r.min_total_db), std::move(r.max_total_db), std::move(r.min_floored),
            std::move(r.max_floored)};
}

std::vector<Band> vulnerability_bands(std::span<const double> wavelengths_nm, std::span<const double> power_dbm,
                                      double threshold_dbm) {
    if (wavelengths_nm.size() != power_dbm.size()) throw ValidationError("power and wavelength lengths differ");
    std::vector<Band> bands;
    std::size_t i = 0;
    while (i < power_dbm.size()) {
        if (!(power_dbm[i] > threshold_dbm)) {
            ++i;
            continue;
        }
        const std::size_t first = i;
        while (i + 1 < power_dbm.size() && power_dbm[i + 1] > threshold_dbm) ++i;
        bands.push_back({wavelengths_nm[first], wavelengths_nm[i]});
        ++i;
    }
    return bands;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::protected_: return "protected";
        case Verdict::vulnerable: return "vulnerable";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

std::vector<Verdict> IpaReport::verdicts() const {
    std::vector<Verdict> out;
    for (const auto& t : max_power.thresholds) out.push_back(t.verdict);
    return out;
}

IpaReport assess_ipa(const Chain& chain, const ComponentLibrary& library, std::span<const IpaThreshold> thresholds) {
    if (thresholds.empty()) throw ValidationError("assess_ipa needs at least one threshold");
    for (const auto& t : thresholds) t.validate();
    const auto env = envelope(chain, library);

    IpaReport report{chain.name, chain.input_power_dbm, env.wavelengths_nm, {}, {}};
    report.max_power = assess_extreme(report, env.min_total_db, env.min_floored, thresholds);
    report.min_power = assess_extreme(report, env.max_total_db, env.max_floored, thresholds);
    return report;
}

}  // namespace ipa::budget
