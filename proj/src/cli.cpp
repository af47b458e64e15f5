#include "ipa/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipa/budget.hpp"
#include "ipa/budget_io.hpp"
#include "ipa/error.hpp"
#include "ipa/format.hpp"
#include "ipa/grid.hpp"
#include "ipa/reference_library.hpp"
#include "ipa/scw.hpp"
#include "ipa/spectra.hpp"
#include "ipa/statemath.hpp"

namespace ipa::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Collects every output file in memory and publishes them together: each is
// written to a temporary sibling first, then all are renamed into place.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(const fs::path& relative, std::string content) { files_[relative] = std::move(content); }

    void commit() const {
        std::vector<std::pair<fs::path, fs::path>> staged;
        auto discard = [&staged] {
            std::error_code ec;
            for (const auto& [tmp, _] : staged) fs::remove(tmp, ec);
        };
        try {
            for (const auto& [rel, content] : files_) {
                const fs::path target = dir_ / rel;
                fs::create_directories(target.parent_path());
                const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".partial");
                staged.emplace_back(tmp, target);
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                out << content;
                out.close();
                if (!out) throw Error("cannot write " + target.string());
            }
            for (const auto& [tmp, target] : staged) fs::rename(tmp, target);
        } catch (const fs::filesystem_error& e) {
            discard();
            throw Error(std::string("cannot write output: ") + e.what());
        } catch (...) {
            discard();
            throw;
        }
    }

    std::vector<fs::path> paths() const {
        std::vector<fs::path> out;
        for (const auto& [rel, _] : files_) out.push_back(dir_ / rel);
        return out;
    }

private:
    fs::path dir_;
    std::map<fs::path, std::string> files_;
};

struct GridOptions {
    double start = kCanonicalStartNm;
    double stop = kCanonicalStopNm;
    double step = kCanonicalStepNm;
    bool overridden = false;

    void attach(CLI::App& app) {
        app.add_option("--grid-start", start, "First analysis wavelength, nm")->each([this](const std::string&) {
            overridden = true;
        });
        app.add_option("--grid-stop", stop, "Last analysis wavelength, nm")->each([this](const std::string&) {
            overridden = true;
        });
        app.add_option("--grid-step", step, "Analysis grid step, nm")->each([this](const std::string&) {
            overridden = true;
        });
    }

    std::vector<double> grid() const { return uniform_grid(start, stop, step); }
};

std::string csv_rows(const std::string& header, const std::vector<std::vector<double>>& columns) {
    std::ostringstream out;
    out << header << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_double(columns[c][i]);
        out << '\n';
    }
    return out.str();
}

std::vector<spectra::Spectrum> load_runs(const std::vector<std::string>& paths, const std::vector<double>& grid) {
    std::vector<spectra::Spectrum> runs;
    for (const auto& p : paths) {
        const auto s = spectra::load_spectrum(p);
        if (s.unit() != spectra::SpectrumUnit::linear_power)
            throw ValidationError(p + ": raw spectra must be linear power");
        runs.push_back(spectra::resample(s, grid));
    }
    return runs;
}

int cmd_losses(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
    std::vector<std::string> ref_paths, mes_paths;
    std::string filters_path, out_dir;
    double floor_db = spectra::kDefaultFloorDb;
    bool median = false;
    GridOptions grid_opts;

    app.add_option("--ref", ref_paths, "Reference spectra, one file per run")->required();
    app.add_option("--mes", mes_paths, "Spectra measured with the element, one file per run")->required();
    app.add_option("--filters", filters_path, "Filter-set transmission spectrum (default: 1)");
    app.add_option("--floor-db", floor_db, "Dynamic-range floor, dB");
    app.add_flag("--median", median, "Median of runs instead of mean");
    app.add_option("--out", out_dir, "Output directory")->required();
    grid_opts.attach(app);
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    const auto grid = grid_opts.grid();
    const auto mode = median ? spectra::AggregateMode::median : spectra::AggregateMode::mean;
    const auto ref_runs = load_runs(ref_paths, grid);
    const auto mes_runs = load_runs(mes_paths, grid);
    const auto ref = spectra::aggregate_runs(ref_runs, mode);
    const auto mes = spectra::aggregate_runs(mes_runs, mode);
    const auto filters = filters_path.empty() ? spectra::constant_spectrum(grid, 1.0)
                                              : load_runs({filters_path}, grid).front();
    const auto loss = spectra::insertion_loss(ref, mes, filters, floor_db);

    std::ostringstream detail;
    detail << "wavelength_nm,loss_db,floored,stddev_db\n";
    std::size_t floored = 0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < loss.size(); ++i) {
        floored += loss.floored[i];
        if (loss.loss_db[i] < loss.loss_db[argmin]) argmin = i;
        detail << format_double(loss.wavelengths_nm[i]) << ',' << format_double(loss.loss_db[i]) << ','
               << (loss.floored[i] ? 1 : 0) << ','
               << (loss.stddev_db.empty() ? std::string() : format_double(loss.stddev_db[i])) << '\n';
    }

    json summary;
    summary["n_runs_ref"] = ref.n_runs;
    summary["n_runs_mes"] = mes.n_runs;
    summary["aggregate"] = median ? "median" : "mean";
    summary["floor_db"] = floor_db;
    summary["floored_points"] = floored;
    summary["min_loss_db"] = loss.loss_db[argmin];
    summary["min_loss_wavelength_nm"] = loss.wavelengths_nm[argmin];
    summary["meta"] = loss.meta;

    OutputSet outputs(out_dir);
    outputs.add("loss.csv", spectra::format_spectrum(spectra::to_spectrum(loss),
                                                     {{"floor_db", format_double(floor_db)},
                                                      {"n_runs", std::to_string(loss.n_runs)}}));
    outputs.add("loss_detail.csv", detail.str());
    outputs.add("loss_summary.json", summary.dump(2) + "\n");
    outputs.commit();
    out << "minimum loss " << format_double(loss.loss_db[argmin]) << " dB at "
        << format_double(loss.wavelengths_nm[argmin]) << " nm; " << floored << " floored points\n";
    return kExitOk;
}

int cmd_usd(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
    int n_half = 2;
    std::vector<double> alphas{1.0};
    double x_min = 0.0, x_max = 2.0, x_step = 0.01;
    std::string out_dir = ".";

    app.add_option("--n", n_half, "Half the number of states (M = 2N)");
    app.add_option("--alpha", alphas, "Coherent amplitude |alpha|; repeat for a family");
    app.add_option("--x-min", x_min, "First remapping factor");
    app.add_option("--x-max", x_max, "Last remapping factor");
    app.add_option("--x-step", x_step, "Remapping factor step");
    app.add_option("--out", out_dir, "Output directory");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    if (n_half < 1) throw DomainError("--n must be at least 1");
    if (x_min < 0.0) throw DomainError("--x-min must be nonnegative");
    const auto xs = uniform_grid(x_min, x_max, x_step);

    OutputSet outputs(out_dir);
    std::ostringstream family;
    family << "alpha,x,f\n";
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const auto curve = statemath::usd_curve(alphas[a], n_half, xs);
        std::vector<double> x, f, p;
        for (const auto& pt : curve) {
            x.push_back(pt.x);
            f.push_back(pt.ratio);
            p.push_back(pt.p_usd);
            family << format_double(alphas[a]) << ',' << format_double(pt.x) << ',' << format_double(pt.ratio) << '\n';
        }
        if (a == 0) {
            outputs.add("usd_ratio.csv", csv_rows("x,f", {x, f}));
            outputs.add("usd_probability.csv", csv_rows("x,p_usd", {x, p}));
            out << "N=" << n_half << " alpha=" << format_double(alphas[a])
                << " P_U(x=1)=" << format_double(statemath::usd_probability(alphas[a], n_half, 1.0)) << '\n';
        }
    }
    if (alphas.size() > 1) outputs.add("usd_ratio_family.csv", family.str());
    outputs.commit();
    return kExitOk;
}

int cmd_scw(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
    double alpha0_sq = 1.0, m = 0.434;
    double dm_min = 0.0, dm_max = 2.0, dm_step = 0.01;
    std::optional<double> dm;
    std::string out_dir = ".";

    app.add_option("--alpha0-sq", alpha0_sq, "Total mean photon number |alpha_0|^2");
    app.add_option("--m", m, "Modulation index");
    app.add_option("--dm", dm, "Single modulation-index factor (overrides the range)");
    app.add_option("--dm-min", dm_min, "First modulation-index factor");
    app.add_option("--dm-max", dm_max, "Last modulation-index factor");
    app.add_option("--dm-step", dm_step, "Modulation-index factor step");
    app.add_option("--out", out_dir, "Output directory");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    const auto dms = dm ? std::vector<double>{*dm} : uniform_grid(dm_min, dm_max, dm_step);
    const auto curve = scw::holevo_curve(alpha0_sq, m, dms);

    std::vector<double> d, att, base;
    for (const auto& pt : curve) {
        d.push_back(pt.dm);
        att.push_back(pt.chi_attacked);
        base.push_back(pt.chi_baseline);
    }
    json summary;
    summary["alpha0_sq"] = alpha0_sq;
    summary["m"] = m;
    summary["sideband_power"] = scw::sideband_power(alpha0_sq, m, scw::SidebandMode::exact);
    summary["sideband_power_small_m"] = scw::sideband_power(alpha0_sq, m, scw::SidebandMode::small_m);
    summary["sideband_carrier_ratio"] = scw::sideband_carrier_ratio(m);
    summary["chi_baseline"] = scw::holevo_bound(alpha0_sq, m);

    OutputSet outputs(out_dir);
    outputs.add("scw_holevo.csv", csv_rows("dm,chi_attacked,chi_baseline", {d, att, base}));
    outputs.add("scw_summary.json", summary.dump(2) + "\n");
    outputs.commit();
    out << "chi_baseline=" << format_double(scw::holevo_bound(alpha0_sq, m))
        << " sideband:carrier=" << format_double(scw::sideband_carrier_ratio(m)) << '\n';
    return kExitOk;
}

std::string library_location(const std::string& flag, const std::optional<std::string>& from_descriptor) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(budget::kLibraryEnvVar); env && *env) return env;
    if (from_descriptor) return *from_descriptor;
    return budget::kBuiltinLibrary;
}

int cmd_chain(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
    std::string config, library_flag, out_dir = ".";
    std::vector<double> thresholds_nw;
    std::optional<double> input_dbm;
    GridOptions grid_opts;

    app.add_option("--config", config, "Chain descriptor")->required();
    app.add_option("--library", library_flag, "Component library directory or builtin:reference");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threshold-nw", thresholds_nw, "IPA threshold in nW; replaces the descriptor's list");
    app.add_option("--input-dbm", input_dbm, "Injected power, dBm");
    grid_opts.attach(app);
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    auto descriptor = budget::load_chain(config);
    auto& chain = descriptor.chain;
    if (input_dbm) chain.input_power_dbm = *input_dbm;
    if (!thresholds_nw.empty()) {
        chain.thresholds.clear();
        for (double t : thresholds_nw) chain.thresholds.push_back({t, budget::PowerUnit::nW, std::nullopt, "cli"});
    }
    std::vector<double> grid = canonical_grid();
    if (grid_opts.overridden)
        grid = grid_opts.grid();
    else if (descriptor.grid)
        grid = uniform_grid(descriptor.grid->start, descriptor.grid->stop, descriptor.grid->step);

    const auto library = budget::load_library(library_location(library_flag, descriptor.library), grid);
    const auto report = budget::assess_ipa(chain, library, chain.thresholds);

    OutputSet outputs(out_dir);
    outputs.add("report.json", budget::report_json(report));
    outputs.add("budget.csv", budget::report_csv(report));
    outputs.commit();

    out << "chain '" << chain.name << "': " << budget::to_string(budget::overall_verdict(report)) << '\n';
    for (const auto& t : report.max_power.thresholds) {
        out << "  threshold " << format_double(t.threshold_dbm) << " dBm: " << budget::to_string(t.verdict);
        for (const auto& b : t.bands)
            out << " [" << format_double(b.band.lo_nm) << ", " << format_double(b.band.hi_nm) << "]"
                << (b.severity_rank == 1 ? "*" : "");
        out << '\n';
    }
    return kExitOk;
}

int cmd_library(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
    std::string path, export_dir;
    app.add_option("--path", path, "Component library directory or builtin:reference");
    app.add_option("--export", export_dir, "Write the library in directory form to this path");
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    const auto library = budget::load_library(library_location(path, std::nullopt), canonical_grid());
    for (const auto& [id, c] : library.components()) {
        out << id << "  kind=" << budget::to_string(c.kind) << "  provenance=" << budget::to_string(c.provenance)
            << "  directions=";
        bool first = true;
        for (const auto& [dir, loss] : c.losses) {
            out << (first ? "" : ",") << dir;
            first = false;
        }
        out << '\n';
        for (const auto& p : c.reference_points)
            out << "    " << p.direction << ": " << format_double(p.loss_db) << " dB @ " << format_double(p.wavelength_nm)
                << " nm (" << budget::to_string(p.provenance) << ")\n";
    }
    out << "ok: " << library.components().size() << " components validated\n";

    if (!export_dir.empty()) {
        OutputSet outputs(export_dir);
        for (auto& [rel, text] : budget::serialize_library(library)) outputs.add(rel, text);
        outputs.commit();
    }
    return kExitOk;
}

const std::map<std::string, std::pair<const char*, int (*)(CLI::App&, const std::vector<std::string>&, std::ostream&)>>&
commands() {
    static const std::map<std::string,
                          std::pair<const char*, int (*)(CLI::App&, const std::vector<std::string>&, std::ostream&)>>
        table{
            {"losses", {"Insertion-loss spectrum from raw spectrometer runs", cmd_losses}},
            {"usd", {"USD probability and ratio curves over the remapping factor", cmd_usd}},
            {"scw", {"Holevo bound versus modulation-index factor", cmd_scw}},
            {"chain", {"Power budget, vulnerability bands and verdicts for a chain", cmd_chain}},
            {"library", {"List, validate or export a component library", cmd_library}},
        };
    return table;
}

void usage(std::ostream& err) {
    err << "usage: ipa-audit <subcommand> [options]\nsubcommands:\n";
    for (const auto& [name, entry] : commands()) err << "  " << name << "  " << entry.first << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty() || args.front() == "-h" || args.front() == "--help") {
        usage(args.empty() ? err : out);
        return args.empty() ? kExitUsage : kExitOk;
    }
    const auto it = commands().find(args.front());
    if (it == commands().end()) {
        err << "error: unknown subcommand '" << args.front() << "'\n";
        return kExitUsage;
    }

    CLI::App app{it->second.first, "ipa-audit " + it->first};
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    try {
        return it->second.second(app, rest, out);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << msg << '\n';
        return kExitInvalid;
    }
}

}  // namespace ipa::cli
