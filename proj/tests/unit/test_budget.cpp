#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ipa/budget.hpp"
#include "ipa/error.hpp"
#include "ipa/grid.hpp"
#include "ipa/reference_library.hpp"

using namespace ipa::budget;
using ipa::spectra::LossSpectrum;

namespace {

constexpr double k3nWdBm = -55.228787452803376;

LossSpectrum make_loss(const std::vector<double>& grid, std::vector<double> db, std::vector<bool> floored = {}) {
    LossSpectrum l;
    l.wavelengths_nm = grid;
    l.loss_db = std::move(db);
    l.floored = floored.empty() ? std::vector<bool>(grid.size(), false) : std::move(floored);
    return l;
}

Component make_component(const std::string& id, const std::vector<double>& grid, std::vector<double> db,
                         std::vector<bool> floored = {}) {
    Component c;
    c.id = id;
    c.kind = ComponentKind::custom;
    c.provenance = Provenance::synthetic;
    c.losses.emplace("forward", make_loss(grid, std::move(db), std::move(floored)));
    return c;
}

Chain single_chain(const std::vector<std::string>& ids) {
    Chain chain;
    chain.name = "test";
    for (const auto& id : ids) chain.slots.push_back({id, {{id, "forward"}}});
    chain.thresholds = default_thresholds();
    return chain;
}

std::vector<double> flat(std::size_t n, double v) { return std::vector<double>(n, v); }

// Random library of `n_comp` components and a chain of up to 4 slots x 3 alternatives.
struct RandomCase {
    ComponentLibrary library;
    Chain chain;
};

RandomCase random_case(std::mt19937_64& rng, const std::vector<double>& grid) {
    std::uniform_real_distribution<double> loss(0.0, 50.0);
    std::uniform_int_distribution<int> coin(0, 4);
    ComponentLibrary lib(grid);
    const int n_comp = 6;
    for (int c = 0; c < n_comp; ++c) {
        std::vector<double> db(grid.size());
        std::vector<bool> fl(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            // Quantised losses produce ties between alternatives.
            db[i] = std::round(loss(rng) / 5.0) * 5.0;
            fl[i] = db[i] == 50.0 || coin(rng) == 0;
            if (fl[i]) db[i] = 50.0;
        }
        lib.add(make_component("c" + std::to_string(c), grid, db, fl));
    }
    Chain chain;
    chain.name = "random";
    chain.thresholds = default_thresholds();
    std::uniform_int_distribution<int> slots(1, 4), alts(1, 3), pick(0, n_comp - 1);
    const int n_slots = slots(rng);
    for (int s = 0; s < n_slots; ++s) {
        Slot slot{"s" + std::to_string(s), {}};
        const int n_alt = alts(rng);
        for (int a = 0; a < n_alt; ++a) slot.alternatives.push_back({"c" + std::to_string(pick(rng)), "forward"});
        chain.slots.push_back(slot);
    }
    return {std::move(lib), std::move(chain)};
}

std::vector<std::vector<std::size_t>> all_selections(const Chain& chain) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (const auto& slot : chain.slots) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& prefix : out)
            for (std::size_t a = 0; a < slot.alternatives.size(); ++a) {
                auto sel = prefix;
                sel.push_back(a);
                next.push_back(sel);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("convert_power examples") {
    CHECK(convert_power(1.0, PowerUnit::mW, PowerUnit::dBm) == 0.0);
    CHECK(std::abs(convert_power(3.0, PowerUnit::nW, PowerUnit::dBm) - k3nWdBm) < 1e-12);
    CHECK(std::abs(convert_power(-55.2288, PowerUnit::dBm, PowerUnit::nW) - 3.0) < 1e-4);
    CHECK(convert_power(40.0, PowerUnit::dBm, PowerUnit::mW) == doctest::Approx(1e4).epsilon(1e-14));
    CHECK_THROWS_AS(convert_power(0.0, PowerUnit::nW, PowerUnit::dBm), ipa::DomainError);
    CHECK_THROWS_AS(convert_power(-1.0, PowerUnit::mW, PowerUnit::dBm), ipa::DomainError);
}

TEST_CASE("convert_power round trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> exponent(-12.0, 6.0);
    for (int i = 0; i < 2000; ++i) {
        const double nw = std::pow(10.0, exponent(rng));
        const double back = convert_power(convert_power(nw, PowerUnit::nW, PowerUnit::dBm), PowerUnit::dBm, PowerUnit::nW);
        CHECK(std::abs(back - nw) / nw < 1e-12);
        const double mw = convert_power(nw, PowerUnit::nW, PowerUnit::mW);
        CHECK(std::abs(mw - nw * 1e-6) / mw < 1e-14);
    }
}

TEST_CASE("units and enums parse") {
    CHECK(parse_power_unit("nW") == PowerUnit::nW);
    CHECK(parse_power_unit("dBm") == PowerUnit::dBm);
    CHECK_THROWS_AS(parse_power_unit("W"), ipa::ParseError);
    for (auto k : {ComponentKind::voa_em, ComponentKind::foa_scattering, ComponentKind::circulator,
                   ComponentKind::custom})
        CHECK(parse_kind(to_string(k)) == k);
    for (auto p : {Provenance::paper_table, Provenance::paper_text, Provenance::measured, Provenance::synthetic})
        CHECK(parse_provenance(to_string(p)) == p);
}

TEST_CASE("default threshold is 3 nW") {
    const auto t = default_thresholds();
    REQUIRE(t.size() == 1);
    CHECK(t[0].power == 3.0);
    CHECK(t[0].unit == PowerUnit::nW);
    CHECK(std::abs(t[0].dbm() - k3nWdBm) < 1e-12);
}

TEST_CASE("chain_power examples") {
    const auto grid = ipa::uniform_grid(400, 420, 1);
    ComponentLibrary lib(grid);
    lib.add(make_component("a", grid, flat(grid.size(), 50.0)));
    lib.add(make_component("b", grid, flat(grid.size(), 50.0)));
    auto p = chain_power(single_chain({"a", "b"}), lib, std::vector<std::size_t>{0, 0});
    for (double v : p.power_dbm) CHECK(v == -60.0);
    for (bool f : p.conservative_flags) CHECK_FALSE(f);

    ComponentLibrary one(grid);
    one.add(make_component("a", grid, flat(grid.size(), 10.0)));
    p = chain_power(single_chain({"a"}), one, std::vector<std::size_t>{0});
    for (double v : p.power_dbm) CHECK(v == 30.0);

    ComponentLibrary none(grid);
    Chain empty;
    empty.name = "empty";
    p = chain_power(empty, none, std::vector<std::size_t>{});
    for (double v : p.power_dbm) CHECK(v == 40.0);
}

TEST_CASE("chain validation") {
    const auto grid = ipa::uniform_grid(400, 410, 1);
    ComponentLibrary lib(grid);
    lib.add(make_component("a", grid, flat(grid.size(), 1.0)));
    CHECK_THROWS_AS(lib.add(make_component("a", grid, flat(grid.size(), 1.0))), ipa::ValidationError);
    CHECK_THROWS_AS(lib.add(make_component("off", ipa::uniform_grid(400, 420, 2), flat(11, 1.0))),
                    ipa::ValidationError);

    auto bad = single_chain({"missing"});
    CHECK_THROWS_AS(bad.validate(lib), ipa::ValidationError);
    auto wrong_dir = single_chain({"a"});
    wrong_dir.slots[0].alternatives[0].direction = "backward";
    CHECK_THROWS_AS(wrong_dir.validate(lib), ipa::ValidationError);
    auto empty_slot = single_chain({"a"});
    empty_slot.slots[0].alternatives.clear();
    CHECK_THROWS_AS(empty_slot.validate(lib), ipa::ValidationError);
    CHECK_THROWS_AS(chain_power(single_chain({"a"}), lib, std::vector<std::size_t>{1}), ipa::ValidationError);
    CHECK_THROWS_AS(chain_power(single_chain({"a"}), lib, std::vector<std::size_t>{}), ipa::ValidationError);
}

TEST_CASE("power is invariant under slot permutation") {
    std::mt19937_64 rng(21);
    const auto grid = ipa::uniform_grid(400, 800, 10);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    ComponentLibrary lib(grid);
    std::vector<std::string> ids;
    for (int c = 0; c < 5; ++c) {
        std::vector<double> db(grid.size());
        for (auto& v : db) v = u(rng);
        ids.push_back("c" + std::to_string(c));
        lib.add(make_component(ids.back(), grid, db));
    }
    const std::vector<std::size_t> sel(ids.size(), 0);
    const auto base = chain_power(single_chain(ids), lib, sel);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(ids.begin(), ids.end(), rng);
        const auto p = chain_power(single_chain(ids), lib, sel);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(p.power_dbm[i] - base.power_dbm[i]) < 1e-12);
    }
}

TEST_CASE("adding a component never raises the power") {
    std::mt19937_64 rng(8);
    const auto grid = ipa::uniform_grid(400, 800, 20);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    ComponentLibrary lib(grid);
    std::vector<std::string> ids;
    for (int c = 0; c < 6; ++c) {
        std::vector<double> db(grid.size());
        for (auto& v : db) v = u(rng);
        ids.push_back("c" + std::to_string(c));
        lib.add(make_component(ids.back(), grid, db));
    }
    std::vector<std::string> chain_ids;
    auto prev = chain_power(single_chain(chain_ids), lib, std::vector<std::size_t>{});
    for (const auto& id : ids) {
        chain_ids.push_back(id);
        const auto next = chain_power(single_chain(chain_ids), lib, std::vector<std::size_t>(chain_ids.size(), 0));
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(next.power_dbm[i] <= prev.power_dbm[i]);
        prev = next;
    }
}

TEST_CASE("envelope of two crossing alternatives") {
    const auto grid = ipa::uniform_grid(400, 800, 1);
    std::vector<double> up(grid.size()), down(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        up[i] = 10.0 + 0.05 * (grid[i] - 400.0);
        down[i] = 30.0 - 0.05 * (grid[i] - 400.0);
    }
    ComponentLibrary lib(grid);
    lib.add(make_component("up", grid, up));
    lib.add(make_component("down", grid, down));
    Chain chain;
    chain.name = "cross";
    chain.slots.push_back({"either", {{"up", "forward"}, {"down", "forward"}}});
    const auto env = envelope(chain, lib);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(env.min_total_db[i] == std::min(up[i], down[i]));
        CHECK(env.max_total_db[i] == std::max(up[i], down[i]));
    }
    const std::size_t at600 = 200;
    CHECK(grid[at600] == 600.0);
    CHECK(env.min_total_db[at600] == 20.0);
    CHECK(env.max_total_db[at600] == 20.0);
}

TEST_CASE("envelope equals brute-force enumeration") {
    std::mt19937_64 rng(2024);
    const auto grid = ipa::uniform_grid(400, 800, 8);
    for (int trial = 0; trial < 200; ++trial) {
        auto rc = random_case(rng, grid);
        const auto env = envelope(rc.chain, rc.library);
        const auto env_serial = envelope(rc.chain, rc.library, Execution::serial);
        CHECK(env.min_total_db == env_serial.min_total_db);
        CHECK(env.max_total_db == env_serial.max_total_db);
        CHECK(env.min_floored == env_serial.min_floored);
        CHECK(env.max_floored == env_serial.max_floored);

        std::vector<double> lo(grid.size(), INFINITY), hi(grid.size(), -INFINITY);
        for (const auto& sel : all_selections(rc.chain)) {
            const auto p = chain_power(rc.chain, rc.library, sel);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double total = rc.chain.input_power_dbm - p.power_dbm[i];
                lo[i] = std::min(lo[i], total);
                hi[i] = std::max(hi[i], total);
            }
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            // Equal up to the rounding of 40 - (40 - total); compare the sums themselves.
            CHECK(std::abs(env.min_total_db[i] - lo[i]) <= 1e-12);
            CHECK(std::abs(env.max_total_db[i] - hi[i]) <= 1e-12);
        }
    }
}

TEST_CASE("envelope prefers non-floored alternatives on ties") {
    const std::vector<double> grid{400, 401};
    ComponentLibrary lib(grid);
    lib.add(make_component("floored", grid, {50, 50}, {true, true}));
    lib.add(make_component("measured", grid, {50, 20}, {false, false}));
    Chain chain;
    chain.name = "tie";
    chain.slots.push_back({"s", {{"floored", "forward"}, {"measured", "forward"}}});
    const auto env = envelope(chain, lib);
    CHECK(env.max_total_db == std::vector<double>{50, 50});
    CHECK(env.max_floored == std::vector<bool>{false, true});
    CHECK(env.min_total_db == std::vector<double>{50, 20});
    CHECK(env.min_floored == std::vector<bool>{false, false});
}

TEST_CASE("vulnerability_bands examples") {
    const std::vector<double> w{400, 401, 402, 403};
    CHECK(vulnerability_bands(w, std::vector<double>{-50, -50, -60, -60}, -55.0) == std::vector<Band>{{400, 401}});
    CHECK(vulnerability_bands(w, std::vector<double>{-60, -60, -60, -60}, -55.0).empty());
    CHECK(vulnerability_bands(w, std::vector<double>{-55, -55, -55, -55}, -55.0).empty());
    CHECK(vulnerability_bands(w, std::vector<double>{-50, -60, -50, -50}, -55.0) ==
          std::vector<Band>{{400, 400}, {402, 403}});
}

TEST_CASE("bands cover exactly the points above threshold") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-70.0, -40.0);
    const auto grid = ipa::uniform_grid(400, 800, 2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> p(grid.size());
        for (auto& v : p) v = u(rng);
        const auto bands = vulnerability_bands(grid, p, k3nWdBm);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const bool inside = std::any_of(bands.begin(), bands.end(), [&](const Band& b) {
                return grid[i] >= b.lo_nm && grid[i] <= b.hi_nm;
            });
            CHECK(inside == (p[i] > k3nWdBm));
        }
        for (std::size_t b = 1; b < bands.size(); ++b) CHECK(bands[b].lo_nm > bands[b - 1].hi_nm);
    }
}

TEST_CASE("assess_ipa verdicts") {
    const auto grid = ipa::canonical_grid();
    ComponentLibrary lib(grid);
    lib.add(make_component("flat20", grid, flat(grid.size(), 20.0)));
    std::vector<double> window(grid.size(), 20.0);
    for (std::size_t i = 0; i <= 10; ++i) window[i] = 10.0;
    lib.add(make_component("window", grid, window));
    lib.add(make_component("floor50", grid, flat(grid.size(), 50.0), std::vector<bool>(grid.size(), true)));
    const auto thr = default_thresholds();

    SUBCASE("100 dB flat is protected") {
        const auto r = assess_ipa(single_chain({"flat20", "flat20", "flat20", "flat20", "flat20"}), lib, thr);
        for (double p : r.max_power.power_dbm) CHECK(p == -60.0);
        CHECK(r.verdicts() == std::vector<Verdict>{Verdict::protected_});
        CHECK(r.max_power.thresholds[0].bands.empty());
    }
    SUBCASE("90 dB window is one severe band") {
        const auto r = assess_ipa(single_chain({"flat20", "flat20", "flat20", "flat20", "window"}), lib, thr);
        CHECK(r.verdicts() == std::vector<Verdict>{Verdict::vulnerable});
        const auto& bands = r.max_power.thresholds[0].bands;
        REQUIRE(bands.size() == 1);
        CHECK(bands[0].band == Band{400, 410});
        CHECK(bands[0].severity_rank == 1);
        CHECK_FALSE(bands[0].conservative_only);
    }
    SUBCASE("floored-only excess is indeterminate") {
        const auto r = assess_ipa(single_chain({"floor50"}), lib, thr);
        CHECK(r.verdicts() == std::vector<Verdict>{Verdict::indeterminate});
        CHECK(r.max_power.thresholds[0].bands[0].conservative_only);
    }
    SUBCASE("severity ranks follow wavelength") {
        std::vector<double> two(grid.size(), 50.0);
        for (std::size_t i = 0; i < 5; ++i) two[i] = 25.0;
        for (std::size_t i = 300; i < 320; ++i) two[i] = 25.0;
        lib.add(make_component("two", grid, two));
        const auto r = assess_ipa(single_chain({"two", "two"}), lib, thr);
        const auto& bands = r.max_power.thresholds[0].bands;
        REQUIRE(bands.size() == 2);
        CHECK(bands[0].band.lo_nm == 400.0);
        CHECK(bands[0].severity_rank == 1);
        CHECK(bands[1].band == Band{700, 719});
        CHECK(bands[1].severity_rank == 2);
    }
    CHECK_THROWS_AS(assess_ipa(single_chain({"flat20"}), lib, std::vector<IpaThreshold>{}), ipa::ValidationError);
}

TEST_CASE("reference library minima sit at the published points") {
    const auto lib = reference_library();
    const auto points = reference_points();
    CHECK(points.size() == 16);
    for (const auto& ap : points) {
        CAPTURE(ap.component_id);
        CAPTURE(ap.point.direction);
        const auto& loss = lib.loss(ap.component_id, ap.point.direction);
        const auto& grid = lib.grid();
        const auto it = std::find(grid.begin(), grid.end(), ap.point.wavelength_nm);
        REQUIRE(it != grid.end());
        const auto idx = static_cast<std::size_t>(it - grid.begin());
        CHECK(loss.loss_db[idx] == ap.point.loss_db);
        // Local minima of the multi-minimum absorption filters; global minima elsewhere.
        if (ap.point.note.find("local") == std::string::npos) {
            CHECK(*std::min_element(loss.loss_db.begin(), loss.loss_db.end()) == ap.point.loss_db);
        } else {
            if (idx > 0) CHECK(loss.loss_db[idx - 1] >= ap.point.loss_db);
            if (idx + 1 < grid.size()) CHECK(loss.loss_db[idx + 1] >= ap.point.loss_db);
        }
    }
}

TEST_CASE("reference library holds the published table values") {
    const auto lib = reference_library();
    auto at = [&](const std::string& id, const std::string& dir, double nm) {
        const auto& grid = lib.grid();
        const auto idx = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), nm) - grid.begin());
        return lib.loss(id, dir).loss_db.at(idx);
    };
    CHECK(at("cwdm1", "com→1550", 680) == 10.0);
    CHECK(at("cwdm2", "com→1550", 679) == 10.7);
    CHECK(at("cwdm3", "com→1550", 662) == 9.7);
    CHECK(at("dwdm", "com→1550", 665) == 10.3);
    CHECK(at("isolator", "backward", 784) == 44.5);
    CHECK(at("circulator", "port3→port1", 419) == 31.1);
    CHECK(at("voa-em", "0V", 761) == 10.7);
    CHECK(at("voa-eo", "0V", 557) == 21.8);
    for (const auto& [id, c] : lib.components()) CHECK_NOTHROW(c.validate(lib.grid()));
}
