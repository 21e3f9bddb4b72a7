#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "ppqe/hgh.hpp"
#include "ppqe/quadrature.hpp"
#include "support.hpp"

using namespace ppqe;

namespace {
const std::vector<hgh::HghSpecies>& table() {
    static const auto t = hgh::load_table(testsupport::hgh_path());
    return t;
}
nlohmann::json li_record() {
    return {{"symbol", "Li"}, {"Z_ion", 1}, {"r_loc", 0.78}, {"C", {-1.9, 0.29, 0, 0}},
            {"rl", {0.67, 1.08, 0}}, {"B", {1.86, -0.006, 0}}};
}
}  // namespace

TEST_CASE("shipped table parses and lookup is by symbol") {
    CHECK(table().size() == 7);
    CHECK(hgh::find(table(), "Fe").Z_ion == 8);
    CHECK_THROWS_AS(hgh::find(table(), "Xx"), InputError);
}

TEST_CASE("HGH records reject unknown, missing and invalid fields") {
    auto j = li_record();
    CHECK_NOTHROW(hgh::species_from_json(j));
    j["extra"] = 1;
    CHECK_THROWS_AS(hgh::species_from_json(j), InputError);
    j = li_record();
    j.erase("B");
    CHECK_THROWS_AS(hgh::species_from_json(j), InputError);
    j = li_record();
    j["r_loc"] = 0.0;
    CHECK_THROWS_AS(hgh::species_from_json(j), InputError);
    CHECK_THROWS_AS(hgh::parse_table(nlohmann::json::array({li_record(), li_record()})), InputError);
}

TEST_CASE("table path resolution: explicit, environment, fallback") {
    ::unsetenv(hgh::kTableEnv);
    CHECK(hgh::resolve_table_path("", "fb.json") == "fb.json");
    ::setenv(hgh::kTableEnv, "env.json", 1);
    CHECK(hgh::resolve_table_path("", "fb.json") == "env.json");
    CHECK(hgh::resolve_table_path("x.json", "fb.json") == "x.json");
    ::unsetenv(hgh::kTableEnv);
}

TEST_CASE("gamma equals G^2 times the local bracket when C3 = C4 = 0") {
    for (const auto& s : table())
        for (double G : {0.05, 0.7, 2.0, 6.5})
            CHECK(hgh::gamma(s, G) == doctest::Approx(G * G * hgh::local_radial(s, G)).epsilon(1e-12));
}

TEST_CASE("local bracket tends to the bare Coulomb term at small G") {
    const auto& o = hgh::find(table(), "O");
    const double G = 1e-4;
    CHECK(hgh::local_radial(o, G) * G * G == doctest::Approx(-o.Z_ion).epsilon(1e-6));
}

TEST_CASE("closed-form projector overlaps agree with numerical quadrature") {
    for (const auto& s : table())
        for (int l = 0; l < 3; ++l) {
            if (s.B[l] == 0.0) continue;
            for (double G : {1e-3, 0.3, 1.7, 4.0 / s.rl[l]})
                CHECK(quad::rel_diff(quad::projector_overlap(s, l, G), hgh::projector_overlap(s, l, G)) < 1e-9);
        }
}

TEST_CASE("projector is normalized in the sense of the closed form at G -> 0") {
    // int r^2 beta_0 dr equals the l = 0 overlap at G = 0.
    const auto& s = hgh::find(table(), "Li");
    const double num = quad::integrate([&](double r) { return r * r * hgh::projector(s, 0, r); }, 0.0, 20.0);
    CHECK(num == doctest::Approx(hgh::projector_overlap(s, 0, 0.0)).epsilon(1e-12));
}

TEST_CASE("the fourteen projector terms reproduce the non-local kernel") {
    const auto& mn = hgh::find(table(), "Mn");
    const crystal::Vec3 Gp{0.4, -0.9, 1.3}, Gq{-1.1, 0.2, 0.7};
    double sum = 0;
    for (int s = 0; s < hgh::kNumNlTerms; ++s)
        sum += hgh::nl_weight(mn, s) * hgh::nl_amplitude(mn, s, Gp) * hgh::nl_amplitude(mn, s, Gq);
    CHECK(sum == doctest::Approx(hgh::nonlocal_kernel(mn, Gp, Gq)).epsilon(1e-12));
}

TEST_CASE("non-local element is Hermitian in (p, q)") {
    const auto& fe = hgh::find(table(), "Fe");
    const crystal::Vec3 Gp{0.4, -0.9, 1.3}, Gq{-1.1, 0.2, 0.7}, R{1.0, 2.0, -0.5};
    const auto a = hgh::nonlocal_element(fe, Gp, Gq, R, 300.0);
    const auto b = hgh::nonlocal_element(fe, Gq, Gp, R, 300.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-15);
}

TEST_CASE("species sums: identity shift cancels the coefficients and l = 2 diagonal terms are included") {
    const auto rec = testsupport::cubic(10.0);
    const auto grid = crystal::build_grid(1000);
    const auto& mn = hgh::find(table(), "Mn");
    const auto s = hgh::species_sums(mn, grid, rec);
    double c = 0, a = 0;
    for (double x : s.c) {
        c += x;
        a += std::fabs(x);
    }
    CHECK(s.shift == doctest::Approx(-c));
    CHECK(s.sum_abs_c == doctest::Approx(a));
    CHECK(s.sum_abs_c > s.sum_abs_c_paper);
    for (int k = hgh::kNumPaperNlTerms; k < hgh::kNumNlTerms; ++k) CHECK(s.c[k] != 0.0);
    const auto& o = hgh::find(table(), "O");
    CHECK(hgh::species_sums(o, grid, rec).sum_abs_c == doctest::Approx(hgh::species_sums(o, grid, rec).sum_abs_c_paper));
}
