#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"
#include "ppqe/hgh.hpp"

namespace ppqe {

struct SpeciesCount {
    hgh::HghSpecies species;
    int count = 0;  // N_t
};

struct MaterialSpec {
    std::string name;
    crystal::LatticeVectors lattice;
    std::vector<SpeciesCount> species;
    int eta = 0;
    std::optional<std::int64_t> default_N;
    std::optional<std::int64_t> default_n_dirty;

    int num_types() const { return static_cast<int>(species.size()); }
    int tau() const { return ceil_log2(static_cast<std::uint64_t>(num_types())); }
    int L() const {
        int s = 0;
        for (const auto& sc : species) s += sc.count;
        return s;
    }
    int n_t(int t) const { return ceil_log2(static_cast<std::uint64_t>(species[t].count)); }
    int max_n_t() const {
        int m = 0;
        for (int t = 0; t < num_types(); ++t) m = std::max(m, n_t(t));
        return m;
    }
    int max_count() const {
        int m = 0;
        for (const auto& sc : species) m = std::max(m, sc.count);
        return m;
    }
    int valence_sum() const {
        int s = 0;
        for (const auto& sc : species) s += sc.count * sc.species.Z_ion;
        return s;
    }
};

// Material file: {name, lattice_angstrom[3][3], atoms[{species, count}],
// eta_valence?, default_N?, default_n_dirty?}. Unknown fields are rejected.
inline MaterialSpec parse_material(const nlohmann::json& j, const std::vector<hgh::HghSpecies>& table) {
    if (!j.is_object()) throw InputError("material: expected an object");
    static const std::set<std::string> required = {"name", "lattice_angstrom", "atoms"};
    static const std::set<std::string> optional = {"eta_valence", "default_N", "default_n_dirty"};
    for (const auto& [k, v] : j.items())
        if (!required.count(k) && !optional.count(k)) throw InputError("material: unknown field '" + k + "'");
    for (const auto& k : required)
        if (!j.contains(k)) throw InputError("material: missing field '" + k + "'");

    MaterialSpec m;
    try {
        m.name = j.at("name").get<std::string>();
        const auto rows = j.at("lattice_angstrom").get<crystal::Mat3>();
        m.lattice = crystal::LatticeVectors::from_angstrom(rows);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("material: ") + e.what());
    }
    const auto& atoms = j.at("atoms");
    if (!atoms.is_array() || atoms.empty()) throw InputError("material: 'atoms' must be a non-empty array");
    std::set<std::string> seen;
    for (const auto& a : atoms) {
        hgh::check_keys(a, {"species", "count"}, "material atom entry");
        SpeciesCount sc;
        std::string sym;
        try {
            sym = a.at("species").get<std::string>();
            sc.count = a.at("count").get<int>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError(std::string("material atom entry: ") + e.what());
        }
        if (sc.count < 1) throw InputError("material: count for '" + sym + "' must be >= 1");
        if (!seen.insert(sym).second) throw InputError("material: species '" + sym + "' listed twice");
        sc.species = hgh::find(table, sym);
        m.species.push_back(sc);
    }
    auto opt_int = [&](const char* key) -> std::optional<std::int64_t> {
        if (!j.contains(key)) return std::nullopt;
        if (!j.at(key).is_number_integer()) throw InputError(std::string("material: '") + key + "' must be an integer");
        const auto v = j.at(key).get<std::int64_t>();
        if (v < 0) throw InputError(std::string("material: '") + key + "' must be non-negative");
        return v;
    };
    m.eta = static_cast<int>(opt_int("eta_valence").value_or(m.valence_sum()));
    if (m.eta < 2) throw InputError("material: eta_valence must be at least 2");
    m.default_N = opt_int("default_N");
    m.default_n_dirty = opt_int("default_n_dirty");
    return m;
}

inline MaterialSpec load_material(const std::string& path, const std::vector<hgh::HghSpecies>& table) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open material file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("material file '" + path + "': " + e.what());
    }
    return parse_material(j, table);
}

}  // namespace ppqe
