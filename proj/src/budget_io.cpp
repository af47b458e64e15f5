#include "ipa/budget_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ipa/error.hpp"
#include "ipa/format.hpp"
#include "ipa/grid.hpp"
#include "ipa/reference_library.hpp"

namespace ipa::budget {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kMetadataFile = "component.json";

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
}

template <typename T>
T field(const json& j, const char* key, const std::string& source) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(source + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(source + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& source) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return field<T>(j, key, source);
}

json threshold_json(const IpaThreshold& t) {
    json j;
    j["power"] = t.power;
    j["unit"] = to_string(t.unit);
    j["wavelength_nm"] = t.wavelength_nm ? json(*t.wavelength_nm) : json(nullptr);
    j["source"] = t.source;
    return j;
}

IpaThreshold parse_threshold(const json& j, const std::string& source) {
    IpaThreshold t{field<double>(j, "power", source), parse_power_unit(field<std::string>(j, "unit", source)),
                   std::nullopt, field_or<std::string>(j, "source", "user", source)};
    if (j.contains("wavelength_nm") && !j.at("wavelength_nm").is_null())
        t.wavelength_nm = field<double>(j, "wavelength_nm", source);
    try {
        t.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
    return t;
}

json curve_json(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) arr.push_back(v);
    return arr;
}

json flags_json(const std::vector<bool>& flags) {
    json arr = json::array();
    for (bool f : flags) arr.push_back(f);
    return arr;
}

json extreme_json(const ExtremeFinding& e, bool with_curves) {
    json j;
    json thresholds = json::array();
    for (const auto& t : e.thresholds) {
        json tj = threshold_json(t.threshold);
        tj["threshold_dbm"] = t.threshold_dbm;
        tj["verdict"] = to_string(t.verdict);
        json bands = json::array();
        for (const auto& b : t.bands) {
            json bj;
            bj["lo_nm"] = b.band.lo_nm;
            bj["hi_nm"] = b.band.hi_nm;
            bj["severity_rank"] = b.severity_rank;
            bj["highest_severity"] = b.severity_rank == 1;
            bj["conservative_only"] = b.conservative_only;
            bands.push_back(std::move(bj));
        }
        tj["bands"] = std::move(bands);
        thresholds.push_back(std::move(tj));
    }
    j["thresholds"] = std::move(thresholds);
    if (with_curves) {
        j["power_dbm"] = curve_json(e.power_dbm);
        j["conservative"] = flags_json(e.conservative_flags);
    }
    return j;
}

}  // namespace

std::string direction_file_stem(const std::string& direction) {
    std::string out;
    const std::string arrow = "→";
    for (std::size_t i = 0; i < direction.size();) {
        if (direction.compare(i, arrow.size(), arrow) == 0) {
            out += "_to_";
            i += arrow.size();
            continue;
        }
        const char c = direction[i++];
        const bool portable = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                              c == '-' || c == '.';
        out += portable ? c : '_';
    }
    if (out.empty()) out = "direction";
    return out;
}

FileSet serialize_component(const Component& component, double floor_db) {
    FileSet files;
    json meta;
    meta["id"] = component.id;
    meta["kind"] = to_string(component.kind);
    meta["provenance"] = to_string(component.provenance);
    meta["floor_db"] = floor_db;

    json losses = json::object();
    for (const auto& [direction, loss] : component.losses) {
        const std::string file = direction_file_stem(direction) + ".csv";
        if (files.count(file)) throw ValidationError("directions of '" + component.id + "' collide on file " + file);
        losses[direction] = file;
        files[file] = spectra::format_spectrum(spectra::to_spectrum(loss),
                                               {{"component", component.id},
                                                {"direction", direction},
                                                {"floor_db", format_double(floor_db)}});
    }
    meta["losses"] = std::move(losses);

    json points = json::array();
    for (const auto& p : component.reference_points) {
        json pj;
        pj["direction"] = p.direction;
        pj["loss_db"] = p.loss_db;
        pj["wavelength_nm"] = p.wavelength_nm;
        pj["provenance"] = to_string(p.provenance);
        pj["note"] = p.note;
        points.push_back(std::move(pj));
    }
    meta["reference_points"] = std::move(points);

    json datasheet = json::object();
    for (const auto& [key, value] : component.datasheet) datasheet[key] = value;
    meta["datasheet"] = std::move(datasheet);

    files[kMetadataFile] = meta.dump(2) + "\n";
    return files;
}

FileSet serialize_library(const ComponentLibrary& library) {
    FileSet files;
    for (const auto& [id, component] : library.components()) {
        const double floor_db = component.losses.begin()->second.floor_db;
        for (auto& [name, text] : serialize_component(component, floor_db)) files[fs::path(id) / name] = text;
    }
    return files;
}

Component load_component(const fs::path& dir, const std::vector<double>& grid) {
    const fs::path meta_path = dir / kMetadataFile;
    const std::string source = meta_path.string();
    const json meta = parse_json(read_text(meta_path), source);

    Component c;
    c.id = field<std::string>(meta, "id", source);
    c.kind = parse_kind(field<std::string>(meta, "kind", source));
    c.provenance = parse_provenance(field_or<std::string>(meta, "provenance", "measured", source));
    const double floor_db = field_or<double>(meta, "floor_db", spectra::kDefaultFloorDb, source);

    const json losses = field<json>(meta, "losses", source);
    if (!losses.is_object() || losses.empty()) throw ParseError(source + ": 'losses' must be a non-empty object");
    for (const auto& [direction, file] : losses.items()) {
        if (!file.is_string()) throw ParseError(source + ": loss file for '" + direction + "' must be a string");
        const fs::path rel = file.get<std::string>();
        if (rel.is_absolute() || rel.filename() != rel)
            throw ParseError(source + ": loss file '" + rel.string() + "' must be a plain file name");
        spectra::Spectrum s = spectra::load_spectrum(dir / rel);
        if (s.unit() != spectra::SpectrumUnit::dB)
            throw ValidationError((dir / rel).string() + ": loss files must declare '# unit: dB'");
        if (s.wavelengths_nm() != grid) s = spectra::resample(s, grid);
        c.losses.emplace(direction, spectra::loss_from_db(s, floor_db));
    }

    if (meta.contains("reference_points")) {
        for (const auto& pj : meta.at("reference_points")) {
            c.reference_points.push_back({field<std::string>(pj, "direction", source),
                                          field<double>(pj, "loss_db", source),
                                          field<double>(pj, "wavelength_nm", source),
                                          parse_provenance(field<std::string>(pj, "provenance", source)),
                                          field_or<std::string>(pj, "note", "", source)});
        }
    }
    if (meta.contains("datasheet")) {
        for (const auto& [key, value] : meta.at("datasheet").items()) {
            if (!value.is_number()) throw ParseError(source + ": datasheet value '" + key + "' must be numeric");
            c.datasheet[key] = value.get<double>();
        }
    }
    return c;
}

ComponentLibrary load_library(const std::string& location, const std::vector<double>& grid) {
    if (location == kBuiltinLibrary) {
        ComponentLibrary ref = reference_library();
        if (ref.grid() == grid) return ref;
        ComponentLibrary lib(grid);
        for (auto [id, c] : ref.components()) {
            for (auto& [dir, loss] : c.losses) loss = spectra::resample(loss, grid);
            lib.add(std::move(c));
        }
        return lib;
    }

    const fs::path root(location);
    if (!fs::is_directory(root)) throw ValidationError("component library '" + location + "' is not a directory");
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::exists(entry.path() / kMetadataFile)) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw ValidationError("component library '" + location + "' contains no components");

    ComponentLibrary lib(grid);
    for (const auto& d : dirs) lib.add(load_component(d, grid));
    return lib;
}

ChainDescriptor parse_chain(const std::string& text, const fs::path& base_dir, const std::string& source) {
    const json j = parse_json(text, source);
    if (!j.is_object()) throw ParseError(source + ": top level must be an object");

    ChainDescriptor d;
    d.chain.name = field_or<std::string>(j, "name", "chain", source);
    d.chain.input_power_dbm = field_or<double>(j, "input_power_dbm", kDefaultInputPowerDbm, source);

    if (j.contains("library")) {
        const std::string lib = field<std::string>(j, "library", source);
        if (lib == kBuiltinLibrary || fs::path(lib).is_absolute() || base_dir.empty())
            d.library = lib;
        else
            d.library = (base_dir / lib).lexically_normal().string();
    }
    if (j.contains("grid")) {
        const json g = j.at("grid");
        d.grid = GridSpec{field<double>(g, "start", source), field<double>(g, "stop", source),
                          field<double>(g, "step", source)};
    }

    for (const auto& sj : field<json>(j, "slots", source)) {
        Slot slot;
        slot.label = field_or<std::string>(sj, "label", "", source);
        for (const auto& aj : field<json>(sj, "alternatives", source))
            slot.alternatives.push_back(
                {field<std::string>(aj, "component", source), field<std::string>(aj, "direction", source)});
        if (slot.alternatives.empty())
            throw ValidationError(source + ": slot '" + slot.label + "' has no alternatives");
        d.chain.slots.push_back(std::move(slot));
    }

    if (j.contains("thresholds")) {
        for (const auto& tj : j.at("thresholds")) d.chain.thresholds.push_back(parse_threshold(tj, source));
    }
    if (d.chain.thresholds.empty()) d.chain.thresholds = default_thresholds();
    return d;
}

ChainDescriptor load_chain(const fs::path& path) {
    return parse_chain(read_text(path), path.parent_path(), path.string());
}

std::string serialize_chain(const ChainDescriptor& d) {
    json j;
    j["name"] = d.chain.name;
    j["input_power_dbm"] = d.chain.input_power_dbm;
    if (d.library) j["library"] = *d.library;
    if (d.grid) j["grid"] = {{"start", d.grid->start}, {"stop", d.grid->stop}, {"step", d.grid->step}};
    json slots = json::array();
    for (const auto& s : d.chain.slots) {
        json alts = json::array();
        for (const auto& a : s.alternatives) alts.push_back({{"component", a.component_id}, {"direction", a.direction}});
        slots.push_back({{"label", s.label}, {"alternatives", std::move(alts)}});
    }
    j["slots"] = std::move(slots);
    json thresholds = json::array();
    for (const auto& t : d.chain.thresholds) thresholds.push_back(threshold_json(t));
    j["thresholds"] = std::move(thresholds);
    return j.dump(2) + "\n";
}

Verdict overall_verdict(const IpaReport& report) {
    Verdict worst = Verdict::protected_;
    for (const Verdict v : report.verdicts()) {
        if (v == Verdict::vulnerable) return Verdict::vulnerable;
        if (v == Verdict::indeterminate) worst = Verdict::indeterminate;
    }
    return worst;
}

std::string report_json(const IpaReport& report) {
    json j;
    j["chain"] = report.chain_name;
    j["input_power_dbm"] = report.input_power_dbm;
    j["verdict"] = to_string(overall_verdict(report));
    j["eavesdropper_best"] = extreme_json(report.max_power, false);
    j["eavesdropper_worst"] = extreme_json(report.min_power, false);
    j["curves"] = {{"wavelength_nm", curve_json(report.wavelengths_nm)},
                   {"p_max_dbm", curve_json(report.max_power.power_dbm)},
                   {"p_max_conservative", flags_json(report.max_power.conservative_flags)},
                   {"p_min_dbm", curve_json(report.min_power.power_dbm)},
                   {"p_min_conservative", flags_json(report.min_power.conservative_flags)}};
    return j.dump(2) + "\n";
}

std::string report_csv(const IpaReport& report) {
    double threshold = std::numeric_limits<double>::infinity();
    for (const auto& t : report.max_power.thresholds) threshold = std::min(threshold, t.threshold_dbm);
    const std::string threshold_text = std::isfinite(threshold) ? format_double(threshold) : "";

    std::ostringstream out;
    out << "wavelength_nm,p_min_dbm,p_max_dbm,threshold_dbm\n";
    for (std::size_t i = 0; i < report.wavelengths_nm.size(); ++i)
        out << format_double(report.wavelengths_nm[i]) << ',' << format_double(report.min_power.power_dbm[i]) << ','
            << format_double(report.max_power.power_dbm[i]) << ',' << threshold_text << '\n';
    return out.str();
}

}  // namespace ipa::budget
