#include "ipa/reference_library.hpp"

#include <utility>

#include "ipa/grid.hpp"
#include "ipa/spectra.hpp"

namespace ipa::budget {

namespace {

using Anchors = std::vector<std::pair<double, double>>;  // (nm, dB)

struct DirectionSpec {
    const char* direction;
    Anchors anchors;
};

struct ComponentSpec {
    const char* id;
    ComponentKind kind;
    std::vector<DirectionSpec> directions;
    std::vector<ReferencePoint> points;
    std::map<std::string, double> datasheet;
};

constexpr double kFloor = spectra::kDefaultFloorDb;

ReferencePoint table_min(const char* dir, double db, double nm) {
    return {dir, db, nm, Provenance::paper_table, "minimum over 400-800 nm"};
}

ReferencePoint text_min(const char* dir, double db, double nm) {
    return {dir, db, nm, Provenance::paper_text, "minimum over 400-800 nm"};
}

ReferencePoint text_local(const char* dir, double db, double nm) {
    return {dir, db, nm, Provenance::paper_text, "approximate local minimum"};
}

// Transmission window of a thin-film WDM filter around (nm, db); floor elsewhere.
Anchors wdm_window(double nm, double db) {
    return {{400, 60}, {nm - 60, 60}, {nm - 25, db + 8}, {nm, db}, {nm + 25, db + 9}, {nm + 60, 60}, {800, 60}};
}

const std::vector<ComponentSpec>& specs() {
    static const std::vector<ComponentSpec> all = {
        {"cwdm1", ComponentKind::cwdm,
         {{"com→1550", wdm_window(680, 10.0)},
          {"com→ref", {{400, 30}, {560, 22}, {680, 12}, {800, 28}}},
          {"ref→1550", {{400, 60}, {800, 60}}}},
         {table_min("com→1550", 10.0, 680)},
         {{"telecom_out_of_band_loss_db", 30.0}}},
        {"cwdm2", ComponentKind::cwdm,
         {{"com→1550", wdm_window(679, 10.7)},
          {"com→ref", {{400, 29}, {560, 21}, {679, 12.5}, {800, 27}}},
          {"ref→1550", {{400, 60}, {800, 60}}}},
         {table_min("com→1550", 10.7, 679)},
         {{"telecom_out_of_band_loss_db", 30.0}}},
        {"cwdm3", ComponentKind::cwdm,
         {{"com→1550", wdm_window(662, 9.7)},
          {"com→ref", {{400, 30}, {540, 20}, {662, 11}, {800, 29}}},
          {"ref→1550", {{400, 60}, {800, 60}}}},
         {table_min("com→1550", 9.7, 662)},
         {{"telecom_out_of_band_loss_db", 30.0}}},
        {"dwdm", ComponentKind::dwdm,
         {{"com→1550", wdm_window(665, 10.3)},
          {"com→ref", {{400, 28}, {550, 19}, {665, 10.8}, {800, 30}}},
          {"ref→1550", {{400, 60}, {800, 60}}}},
         {table_min("com→1550", 10.3, 665)},
         {{"telecom_out_of_band_loss_db", 30.0}}},
        {"isolator", ComponentKind::isolator,
         {{"backward", {{400, 60}, {772, 50}, {784, 44.5}, {800, 47.5}}}},
         {text_min("backward", 44.5, 784)},
         {{"backward_loss_1550_db", 65.0}}},
        {"circulator", ComponentKind::circulator,
         {{"port3→port1", {{400, 35.5}, {419, 31.1}, {460, 38}, {506, 50}, {560, 60}, {800, 60}}},
          {"port4→port2", {{400, 37}, {430, 33.5}, {470, 40}, {506, 50}, {560, 60}, {800, 60}}},
          {"port2→port1", {{400, 60}, {800, 60}}}},
         {text_min("port3→port1", 31.1, 419)},
         {{"backward_loss_1550_db", 50.0}}},
        {"voa-em", ComponentKind::voa_em,
         {{"0V", {{400, 24}, {600, 15}, {761, 10.7}, {800, 12}}},
          {"5V", {{400, 30}, {640, 19}, {780, 13.7}, {800, 14.5}}}},
         {text_min("0V", 10.7, 761), text_min("5V", 13.7, 780)},
         {{"datasheet_il_1550_db", 0.80}, {"measured_5v_1550_db", 43.4}}},
        {"voa-eo", ComponentKind::voa_eo,
         {{"0V", {{400, 34}, {557, 21.8}, {800, 29}}},
          {"5V", {{400, 50}, {470, 50}, {610, 23.7}, {800, 33}}}},
         {text_min("0V", 21.8, 557), text_min("5V", 23.7, 610)},
         {{"datasheet_il_1550_db", 0.77}, {"measured_5v_1550_db", 36.0}}},
        {"foa-abs-20a", ComponentKind::foa_absorption,
         {{"forward", {{400, 9.0}, {405, 8.1}, {430, 12}, {520, 35}, {700, 28}, {780, 3.4}, {800, 4.5}}}},
         {text_local("forward", 8.1, 405), text_local("forward", 3.4, 780)},
         {{"nominal_1550_db", 20.0}}},
        {"foa-abs-20b", ComponentKind::foa_absorption,
         {{"forward", {{400, 9.5}, {405, 8.6}, {430, 12.5}, {520, 36}, {700, 29}, {780, 4.3}, {800, 5.2}}}},
         {text_local("forward", 8.6, 405), text_local("forward", 4.3, 780)},
         {{"nominal_1550_db", 20.0}}},
        {"foa-abs-10", ComponentKind::foa_absorption,
         {{"forward", {{400, 3.2}, {405, 2.7}, {430, 5}, {520, 18}, {700, 14}, {780, 0.9}, {800, 1.6}}}},
         {text_local("forward", 2.7, 405), text_local("forward", 0.9, 780)},
         {{"nominal_1550_db", 10.0}}},
        {"foa-sca-20", ComponentKind::foa_scattering, {{"forward", {{400, 27}, {800, 25}}}}, {},
         {{"nominal_1550_db", 20.0}}},
        {"foa-sca-15", ComponentKind::foa_scattering, {{"forward", {{400, 15.6}, {800, 13}}}}, {},
         {{"nominal_1550_db", 15.0}}},
        {"foa-sca-5", ComponentKind::foa_scattering, {{"forward", {{400, 11.2}, {800, 10.8}}}}, {},
         {{"nominal_1550_db", 5.0}}},
        {"bs-5050", ComponentKind::beamsplitter,
         {{"port2→port1", {{400, 5.5}, {600, 4.0}, {800, 3.2}}},
          {"port3→port1", {{400, 2.4}, {600, 2.9}, {800, 3.1}}}},
         {},
         {{"nominal_split", 0.5}}},
        {"bs-99-1", ComponentKind::beamsplitter,
         {{"port3→port1", {{400, 21}, {800, 20}}}, {"port2→port1", {{400, 0.1}, {800, 0.05}}}},
         {},
         {{"nominal_split", 0.99}}},
    };
    return all;
}

spectra::LossSpectrum curve(const Anchors& anchors, const std::vector<double>& grid) {
    std::vector<double> nm, db;
    for (const auto& [w, v] : anchors) {
        nm.push_back(w);
        db.push_back(v);
    }
    const spectra::Spectrum raw(std::move(nm), std::move(db), spectra::SpectrumUnit::dB, "synthetic");
    return spectra::loss_from_db(spectra::resample(raw, grid), kFloor);
}

}  // namespace

std::vector<AnchoredPoint> reference_points() {
    std::vector<AnchoredPoint> out;
    for (const auto& spec : specs())
        for (const auto& p : spec.points) out.push_back({spec.id, p});
    return out;
}

ComponentLibrary reference_library() {
    const auto grid = canonical_grid();
    ComponentLibrary lib(grid);
    for (const auto& spec : specs()) {
        Component c;
        c.id = spec.id;
        c.kind = spec.kind;
        c.provenance = Provenance::synthetic;
        for (const auto& d : spec.directions) c.losses.emplace(d.direction, curve(d.anchors, grid));
        c.reference_points = spec.points;
        c.datasheet = spec.datasheet;
        lib.add(std::move(c));
    }
    return lib;
}

}  // namespace ipa::budget
