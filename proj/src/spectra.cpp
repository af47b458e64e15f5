#include "ipa/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <utility>

#include "ipa/error.hpp"
#include "ipa/format.hpp"

namespace ipa::spectra {

namespace {

constexpr std::string_view kHeader = "wavelength_nm,value";

std::string at_wavelength(double nm) { return " at " + format_double(nm) + " nm"; }

void require_same_grid(const Spectrum& a, const Spectrum& b, const char* what) {
    if (a.wavelengths_nm() != b.wavelengths_nm())
        throw ValidationError(std::string(what) + " is not on the reference grid; resample first");
}

void require_linear(const Spectrum& s, const char* what) {
    if (s.unit() != SpectrumUnit::linear_power) throw ValidationError(std::string(what) + " must be linear power");
}

void check_floor(double floor_db) {
    if (!(floor_db > 0.0) || !std::isfinite(floor_db)) throw DomainError("floor_db must be positive and finite");
}

double median(std::vector<double> v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

// Index of the last sample <= g, for g inside [front, back].
std::size_t bracket(const std::vector<double>& w, double g) {
    const auto it = std::upper_bound(w.begin(), w.end(), g);
    return static_cast<std::size_t>(std::distance(w.begin(), it)) - 1;
}

void check_resample_grid(const std::vector<double>& w, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("resample grid is empty");
    for (double g : grid)
        if (!(g >= w.front() && g <= w.back()))
            throw DomainError("resample would extrapolate" + at_wavelength(g) + " outside [" +
                              format_double(w.front()) + ", " + format_double(w.back()) + "] nm");
}

double lerp_at(const std::vector<double>& w, const std::vector<double>& v, std::size_t i, double g) {
    if (w[i] == g || i + 1 == w.size()) return v[i];
    const double t = (g - w[i]) / (w[i + 1] - w[i]);
    return v[i] + (v[i + 1] - v[i]) * t;
}

}  // namespace

std::string to_string(SpectrumUnit unit) { return unit == SpectrumUnit::dB ? "dB" : "linear-power"; }

SpectrumUnit parse_unit(const std::string& text) {
    if (text == "dB") return SpectrumUnit::dB;
    if (text == "linear-power") return SpectrumUnit::linear_power;
    throw ParseError("unknown spectrum unit '" + text + "' (expected linear-power or dB)");
}

Spectrum::Spectrum(std::vector<double> wavelengths_nm, std::vector<double> values, SpectrumUnit unit,
                   std::string meta)
    : wavelengths_(std::move(wavelengths_nm)), values_(std::move(values)), unit_(unit), meta_(std::move(meta)) {
    if (wavelengths_.size() != values_.size())
        throw ValidationError("spectrum has " + std::to_string(wavelengths_.size()) + " wavelengths but " +
                              std::to_string(values_.size()) + " values");
    if (wavelengths_.empty()) throw ValidationError("empty spectrum");
    for (std::size_t i = 0; i < wavelengths_.size(); ++i) {
        if (!std::isfinite(wavelengths_[i]) || !std::isfinite(values_[i]))
            throw ValidationError("non-finite sample" + at_wavelength(wavelengths_[i]));
        if (i > 0 && !(wavelengths_[i] > wavelengths_[i - 1]))
            throw ValidationError("wavelengths not strictly increasing" + at_wavelength(wavelengths_[i]));
        if (unit_ == SpectrumUnit::linear_power && values_[i] < 0.0)
            throw ValidationError("negative linear power" + at_wavelength(wavelengths_[i]));
    }
}

SpectrumFile parse_spectrum(std::istream& in, const std::string& source) {
    std::map<std::string, std::string> directives;
    std::vector<std::pair<double, double>> rows;
    std::string meta;
    bool header_seen = false;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (text.front() == '#') {
            const std::string_view body = trim(text.substr(1));
            const auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                directives[std::string(trim(body.substr(0, colon)))] = std::string(trim(body.substr(colon + 1)));
            }
            if (!meta.empty()) meta += '\n';
            meta += body;
            continue;
        }
        if (!header_seen) {
            if (text != kHeader)
                throw ParseError(where + ": expected header '" + std::string(kHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(where + ": expected two comma-separated fields");
        rows.emplace_back(parse_double(text.substr(0, comma), where), parse_double(text.substr(comma + 1), where));
    }
    if (!header_seen) throw ParseError(source + ": missing header '" + std::string(kHeader) + "'");
    if (rows.empty()) throw ParseError(source + ": empty spectrum");

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw ParseError(source + ": duplicate wavelength " + format_double(rows[i].first) + " nm");

    SpectrumUnit unit = SpectrumUnit::linear_power;
    if (const auto it = directives.find("unit"); it != directives.end()) unit = parse_unit(it->second);

    std::vector<double> w, v;
    w.reserve(rows.size());
    v.reserve(rows.size());
    for (const auto& [wl, val] : rows) {
        w.push_back(wl);
        v.push_back(val);
    }
    try {
        return {Spectrum(std::move(w), std::move(v), unit, std::move(meta)), std::move(directives)};
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

SpectrumFile read_spectrum_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spectrum file " + path.string());
    return parse_spectrum(in, path.string());
}

Spectrum load_spectrum(const std::filesystem::path& path) { return read_spectrum_file(path).spectrum; }

std::string format_spectrum(const Spectrum& s, const std::map<std::string, std::string>& directives) {
    std::ostringstream out;
    out << "# unit: " << to_string(s.unit()) << '\n';
    for (const auto& [key, value] : directives)
        if (key != "unit") out << "# " << key << ": " << value << '\n';
    out << kHeader << '\n';
    for (std::size_t i = 0; i < s.size(); ++i)
        out << format_double(s.wavelengths_nm()[i]) << ',' << format_double(s.values()[i]) << '\n';
    return out.str();
}

AggregatedSpectrum aggregate_runs(std::span<const Spectrum> runs, AggregateMode mode) {
    if (runs.empty()) throw ValidationError("aggregate_runs needs at least one run");
    const Spectrum& first = runs.front();
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].wavelengths_nm() != first.wavelengths_nm())
            throw ValidationError("run " + std::to_string(r) + " has a different wavelength grid");
        if (runs[r].unit() != first.unit()) throw ValidationError("runs mix units");
    }

    const std::size_t n = runs.size();
    const std::size_t len = first.size();
    std::vector<double> center(len);
    std::vector<double> stddev;
    if (n > 1) stddev.resize(len);

    std::vector<double> column(n);
    for (std::size_t i = 0; i < len; ++i) {
        // Shifting by the first run keeps identical runs exact (zero deviation).
        const double shift = first.values()[i];
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            column[r] = runs[r].values()[i];
            sum += column[r] - shift;
        }
        const double offset = sum / static_cast<double>(n);
        const double mean = shift + offset;
        center[i] = mode == AggregateMode::median ? median(column) : mean;
        if (n > 1) {
            double ss = 0.0;
            for (double x : column) ss += (x - shift - offset) * (x - shift - offset);
            stddev[i] = std::sqrt(ss / static_cast<double>(n - 1));
        }
    }

    std::string meta = "aggregate of " + std::to_string(n) + " runs (" +
                       (mode == AggregateMode::median ? "median" : "mean") + ")";
    return {Spectrum(first.wavelengths_nm(), std::move(center), first.unit(), std::move(meta)), std::move(stddev), n};
}

void LossSpectrum::validate() const {
    const std::size_t n = wavelengths_nm.size();
    if (n == 0) throw ValidationError("empty loss spectrum");
    if (loss_db.size() != n || floored.size() != n)
        throw ValidationError("loss spectrum field lengths differ");
    for (std::size_t i = 1; i < n; ++i)
        if (!(wavelengths_nm[i] > wavelengths_nm[i - 1]))
            throw ValidationError("loss spectrum wavelengths not strictly increasing");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(loss_db[i] >= 0.0) || loss_db[i] > floor_db)
            throw ValidationError("loss outside [0, floor]" + at_wavelength(wavelengths_nm[i]));
        if (floored[i] && loss_db[i] != floor_db)
            throw ValidationError("floored loss differs from floor" + at_wavelength(wavelengths_nm[i]));
    }
    if (n_runs == 0) throw ValidationError("n_runs must be positive");
    if ((n_runs > 1) != !stddev_db.empty()) throw ValidationError("stddev_db must be present iff n_runs > 1");
    if (!stddev_db.empty() && stddev_db.size() != n) throw ValidationError("stddev_db length differs");
}

Spectrum constant_spectrum(std::span<const double> grid, double value, SpectrumUnit unit) {
    return Spectrum(std::vector<double>(grid.begin(), grid.end()), std::vector<double>(grid.size(), value), unit);
}

LossSpectrum insertion_loss(const Spectrum& ref, const Spectrum& mes, const Spectrum& filters, double floor_db) {
    return insertion_loss(AggregatedSpectrum{ref, {}, 1}, AggregatedSpectrum{mes, {}, 1}, filters, floor_db);
}

LossSpectrum insertion_loss(const AggregatedSpectrum& ref, const AggregatedSpectrum& mes, const Spectrum& filters,
                            double floor_db) {
    check_floor(floor_db);
    const Spectrum& pr = ref.center;
    const Spectrum& pm = mes.center;
    require_linear(pr, "reference spectrum");
    require_linear(pm, "measured spectrum");
    require_linear(filters, "filter transmission");
    require_same_grid(pr, pm, "measured spectrum");
    require_same_grid(pr, filters, "filter transmission");

    const std::size_t n = pr.size();
    LossSpectrum out;
    out.wavelengths_nm = pr.wavelengths_nm();
    out.loss_db.resize(n);
    out.floored.assign(n, false);
    out.floor_db = floor_db;
    out.n_runs = std::max(ref.n_runs, mes.n_runs);
    if (out.n_runs > 1) out.stddev_db.assign(n, 0.0);

    std::size_t clamped = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p_ref = pr.values()[i];
        const double p_mes = pm.values()[i];
        const double t_f = filters.values()[i];
        const double denom = p_ref * t_f;
        if (!(denom > 0.0)) throw DomainError("zero reference power" + at_wavelength(out.wavelengths_nm[i]));

        const double loss = p_mes > 0.0 ? -10.0 * std::log10(p_mes / denom) : floor_db;
        if (loss >= floor_db) {
            out.loss_db[i] = floor_db;
            out.floored[i] = true;
            continue;
        }
        if (loss < 0.0) ++clamped;
        out.loss_db[i] = std::max(loss, 0.0);

        if (out.n_runs > 1) {
            const double rel_ref = ref.stddev.empty() ? 0.0 : ref.stddev[i] / p_ref;
            const double rel_mes = mes.stddev.empty() ? 0.0 : mes.stddev[i] / p_mes;
            out.stddev_db[i] = 10.0 / std::numbers::ln10 * std::hypot(rel_ref, rel_mes);
        }
    }

    out.meta = "insertion loss, floor " + format_double(floor_db) + " dB";
    if (clamped > 0) out.meta += "; warning: clamped_negative=" + std::to_string(clamped);
    return out;
}

Spectrum resample(const Spectrum& s, std::span<const double> grid) {
    const auto& w = s.wavelengths_nm();
    check_resample_grid(w, grid);
    std::vector<double> values(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) values[j] = lerp_at(w, s.values(), bracket(w, grid[j]), grid[j]);
    return Spectrum(std::vector<double>(grid.begin(), grid.end()), std::move(values), s.unit(), s.meta());
}

LossSpectrum resample(const LossSpectrum& s, std::span<const double> grid) {
    const auto& w = s.wavelengths_nm;
    check_resample_grid(w, grid);
    LossSpectrum out;
    out.wavelengths_nm.assign(grid.begin(), grid.end());
    out.loss_db.resize(grid.size());
    out.floored.assign(grid.size(), false);
    out.n_runs = s.n_runs;
    out.floor_db = s.floor_db;
    out.meta = s.meta;
    if (!s.stddev_db.empty()) out.stddev_db.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const std::size_t i = bracket(w, grid[j]);
        out.loss_db[j] = lerp_at(w, s.loss_db, i, grid[j]);
        if (!s.stddev_db.empty()) out.stddev_db[j] = lerp_at(w, s.stddev_db, i, grid[j]);
        const bool exact = w[i] == grid[j] || i + 1 == w.size();
        out.floored[j] = exact ? bool(s.floored[i]) : (s.floored[i] && s.floored[i + 1]);
        if (out.floored[j]) out.loss_db[j] = s.floor_db;
    }
    return out;
}

LossSpectrum loss_from_db(const Spectrum& s, double floor_db) {
    check_floor(floor_db);
    if (s.unit() != SpectrumUnit::dB) throw ValidationError("loss spectrum must be in dB");
    LossSpectrum out;
    out.wavelengths_nm = s.wavelengths_nm();
    out.loss_db = s.values();
    out.floored.assign(s.size(), false);
    out.floor_db = floor_db;
    out.meta = s.meta();
    std::size_t clamped = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.loss_db[i] >= floor_db) {
            out.loss_db[i] = floor_db;
            out.floored[i] = true;
        } else if (out.loss_db[i] < 0.0) {
            out.loss_db[i] = 0.0;
            ++clamped;
        }
    }
    if (clamped > 0) {
        if (!out.meta.empty()) out.meta += '\n';
        out.meta += "warning: clamped_negative=" + std::to_string(clamped);
    }
    return out;
}

Spectrum to_spectrum(const LossSpectrum& loss) {
    return Spectrum(loss.wavelengths_nm, loss.loss_db, SpectrumUnit::dB, loss.meta);
}

}  // namespace ipa::spectra
