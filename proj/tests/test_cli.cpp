#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ppqe/cli.hpp"
#include "support.hpp"

using namespace ppqe;

namespace {
std::string write_temp(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p.string();
}
cli::EstimateArgs args(const std::string& material) {
    cli::EstimateArgs a;
    a.material = material;
    a.hgh = testsupport::hgh_path();
    a.planewaves = 10000;
    return a;
}
}  // namespace

TEST_CASE("SHA-256 digest") {
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("formation energy endpoints and linearity") {
    const double full = -12.5, empty = -7.25;
    CHECK(cli::formation_energy(full, full, empty, 2.0) == doctest::Approx(0.0));
    CHECK(cli::formation_energy(empty, full, empty, 0.0) == doctest::Approx(0.0));
    // On the straight line between the endpoints the formation energy vanishes.
    for (double x : {0.25, 1.0, 1.5})
        CHECK(cli::formation_energy((x / 2) * full + (1 - x / 2) * empty, full, empty, x) ==
              doctest::Approx(0.0).scale(1.0));
    CHECK(cli::formation_energy(-10.0, full, empty, 1.0) - cli::formation_energy(-11.0, full, empty, 1.0) ==
          doctest::Approx(1.0));
}

TEST_CASE("oxygen vacancy energy adds back half an O2 per removed atom") {
    CHECK(cli::o2_vacancy_energy(-90.0, -100.0, -30.0, 0.0) == doctest::Approx(10.0));
    CHECK(cli::o2_vacancy_energy(-90.0, -100.0, -30.0, 2.0) == doctest::Approx(-20.0));
}

TEST_CASE("material lookup by shipped name") {
    CHECK(std::filesystem::exists(cli::resolve_material_path("li2fesio4")));
    CHECK(std::filesystem::exists(cli::resolve_material_path("li2fesio4.json")));
    CHECK_THROWS_AS(cli::resolve_material_path("no-such-material"), InputError);
}

TEST_CASE("estimate reports are deterministic and carry provenance") {
    const auto a = args("li2fesio4");
    const auto j1 = cli::estimate_json(cli::run_estimate(a), a).dump(2);
    const auto j2 = cli::estimate_json(cli::run_estimate(a), a).dump(2);
    CHECK(j1 == j2);
    const auto j = cli::ojson::parse(j1);
    CHECK(j["schema_version"] == cli::kSchemaVersion);
    CHECK(j["provenance"]["inputs"]["material"]["sha256"].get<std::string>().size() == 64);
    CHECK(j["totals"]["toffoli_count"].get<std::int64_t>() ==
          j["totals"]["iterations"].get<std::int64_t>() * j["totals"]["cost"]["per_step"].get<std::int64_t>());
    CHECK(cli::estimate_table(j).find("Toffoli count") != std::string::npos);
}

TEST_CASE("digest changes with the input bytes") {
    const std::string body = R"({"name": "cube", "lattice_angstrom": [[5,0,0],[0,5,0],[0,0,5]],
        "atoms": [{"species": "Li", "count": 2}, {"species": "O", "count": 2}], "default_n_dirty": 500})";
    const auto p1 = write_temp("ppqe_cube1.json", body);
    const auto p2 = write_temp("ppqe_cube2.json", body + "\n");
    CHECK(cli::run_estimate(args(p1)).material_file.sha256 != cli::run_estimate(args(p2)).material_file.sha256);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("estimate input validation") {
    auto a = args("li2fesio4");
    a.error_ev = -1;
    CHECK_THROWS_AS(cli::run_estimate(a), InputError);
    a = args("li2fesio4");
    a.p_th = 1.0;
    CHECK_THROWS_AS(cli::run_estimate(a), InputError);
    a = args("li2fesio4");
    a.optimize = "speed";
    CHECK_THROWS_AS(cli::run_estimate(a), InputError);
    const auto p = write_temp("ppqe_bad.json", R"({"name": "x", "lattice_angstrom": [[5,0,0],[0,5,0],[0,0,5]],
        "atoms": [{"species": "Li", "count": 2}], "temperature": 300})");
    CHECK_THROWS_AS(cli::run_estimate(args(p)), InputError);
    const auto q = write_temp("ppqe_nodirty.json", R"({"name": "x", "lattice_angstrom": [[5,0,0],[0,5,0],[0,0,5]],
        "atoms": [{"species": "Li", "count": 2}]})");
    CHECK_THROWS_AS(cli::run_estimate(args(q)), InputError);
    std::remove(p.c_str());
    std::remove(q.c_str());
}
