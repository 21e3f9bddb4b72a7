#include <doctest.h>

#include "ppqe/lcu_oracle.hpp"
#include "support.hpp"

using namespace ppqe;
using namespace ppqe::oracle;

namespace {
const std::vector<hgh::HghSpecies>& table() {
    static const auto t = hgh::load_table(testsupport::hgh_path());
    return t;
}
}  // namespace

TEST_CASE("every operator matches its LCU on every lattice class") {
    for (const auto& cell : standard_cells(table(), 27))
        for (Kind k : {Kind::T, Kind::V, Kind::Uloc, Kind::UNL}) {
            CAPTURE(cell.name);
            CAPTURE(to_string(k));
            const auto r = compare(k, cell);
            CHECK(r.rel_diff <= 1e-9);
            CHECK(r.hermitian_dense <= 1e-10);
            CHECK(r.hermitian_lcu <= 1e-10);
            CHECK(r.one_norm >= r.spectral_norm * (1 - 1e-12));
        }
}

TEST_CASE("standard cells cover the three lattice classes") {
    const auto cells = standard_cells(table(), 27);
    REQUIRE(cells.size() == 3);
    CHECK(cells[0].rec.ortho_class == crystal::OrthoClass::orthogonal);
    CHECK(cells[1].rec.ortho_class == crystal::OrthoClass::partially_orthogonal);
    CHECK(cells[2].rec.ortho_class == crystal::OrthoClass::general);
}

TEST_CASE("a sign error in one non-local coefficient is detected") {
    const auto cell = standard_cells(table(), 27).front();
    CHECK(compare(Kind::UNL, cell).ok());
    CHECK_FALSE(compare(Kind::UNL, cell, 0).ok());
    CHECK_FALSE(compare(Kind::UNL, cell, 12).ok());
}

TEST_CASE("the b = 0 kinetic branch is a multiple of the identity on orthogonal cells") {
    const auto cell = standard_cells(table(), 27).front();
    const auto full = lcu_T(cell, false);
    const Dense id = full.b0_branch(0, 0) * Dense::Identity(full.b0_branch.rows(), full.b0_branch.cols());
    CHECK(max_abs(Dense(full.b0_branch - id)) < 1e-12);
    const auto dropped = lcu_T(cell, true);
    CHECK(dropped.dropped_b0);
    CHECK(dropped.shift == doctest::Approx(full.b0_branch(0, 0).real()));
    CHECK(dropped.one_norm == doctest::Approx(full.one_norm - dropped.shift));
    // Not so once the cell is skewed.
    const auto skew = standard_cells(table(), 27)[1];
    CHECK_FALSE(lcu_T(skew, true).dropped_b0);
}

TEST_CASE("two's-complement wrap") {
    CHECK(wrap({3, -4, 0}, 3) == crystal::IVec3{3, -4, 0});
    CHECK(wrap({4, -5, 7}, 3) == crystal::IVec3{-4, 3, -1});
}

TEST_CASE("oracle grids are capped") {
    CHECK_THROWS_AS(make_cell("big", orthogonal_lattice(), 1000, {}), InputError);
}
