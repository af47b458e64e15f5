#pragma once

// On-disk formats for the budget module.
//
// Component library: one directory per component holding `component.json`
// (id, kind, provenance, floor_db, direction -> CSV file map, reference points,
// datasheet values) and one `wavelength_nm,value` CSV per direction in dB.
//
// Chain descriptor: JSON with name, input_power_dbm, optional library path and
// grid, ordered slots of {component, direction} alternatives, and thresholds.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipa/budget.hpp"

namespace ipa::budget {

/// Environment variable consulted for the library path when none is given.
inline constexpr const char* kLibraryEnvVar = "IPA_LIBRARY";

/// Relative path -> file contents, written by the caller.
using FileSet = std::map<std::filesystem::path, std::string>;

/// Direction label mapped to a portable file stem ("com→1550" -> "com_to_1550").
std::string direction_file_stem(const std::string& direction);

FileSet serialize_component(const Component& component, double floor_db);
FileSet serialize_library(const ComponentLibrary& library);

/// Reads one component directory; loss files off `grid` are resampled onto it.
Component load_component(const std::filesystem::path& dir, const std::vector<double>& grid);

/// Every subdirectory containing component.json, in name order. The builtin id
/// kBuiltinLibrary yields the reference library.
ComponentLibrary load_library(const std::string& location, const std::vector<double>& grid);

struct GridSpec {
    double start;
    double stop;
    double step;
};

struct ChainDescriptor {
    Chain chain;
    std::optional<std::string> library;  ///< resolved against the descriptor's directory
    std::optional<GridSpec> grid;
};

ChainDescriptor parse_chain(const std::string& text, const std::filesystem::path& base_dir = {},
                            const std::string& source = "chain descriptor");
ChainDescriptor load_chain(const std::filesystem::path& path);
std::string serialize_chain(const ChainDescriptor& descriptor);

/// Machine-readable report: bands, verdicts, severity and per-wavelength curves.
std::string report_json(const IpaReport& report);

/// Plot data `wavelength_nm,p_min_dbm,p_max_dbm,threshold_dbm`; the threshold
/// column carries the lowest (most sensitive) threshold.
std::string report_csv(const IpaReport& report);

/// Worst verdict across thresholds: vulnerable > indeterminate > protected.
Verdict overall_verdict(const IpaReport& report);

}  // namespace ipa::budget
