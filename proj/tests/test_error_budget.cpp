#include <doctest.h>

#include <cmath>

#include "ppqe/costing.hpp"
#include "support.hpp"

using namespace ppqe;

namespace {
const std::vector<hgh::HghSpecies>& table() {
    static const auto t = hgh::load_table(testsupport::hgh_path());
    return t;
}
budget::Solution solve_for(const std::string& stem, std::int64_t N, double eps_ev = 0.043) {
    const auto m = load_material(testsupport::material_path(stem), table());
    const auto g = crystal::build_grid(N);
    const auto rec = crystal::build_reciprocal(m.lattice);
    return budget::solve(budget::allocate(ev_to_hartree(eps_ev)), m, g, rec, prep::compute_species_data(m, g, rec), {});
}
}  // namespace

TEST_CASE("allocation saturates the master inequality") {
    const auto b = budget::allocate(1e-3);
    double s = 0;
    for (double e : b.eps) s += e;
    CHECK(b.eps_QPE * b.eps_QPE + s * s == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK_THROWS_AS(budget::allocate(0.0), InputError);
}

TEST_CASE("width_for returns the smallest sufficient width") {
    CHECK(budget::width_for(1024.0, 1.0) == 10);
    CHECK(budget::width_for(1025.0, 1.0) == 11);
    CHECK(budget::width_for(0.5, 1.0) == 1);
    for (double K : {3.7, 91.0, 1e9})
        for (double eps : {1e-3, 0.2}) {
            const int n = budget::width_for(K, eps);
            CHECK(budget::bound(K, n) <= eps);
            if (n > 1) CHECK(budget::bound(K, n - 1) > eps);
        }
    CHECK_THROWS_AS(budget::width_for(0.0, 1.0), InputError);
}

TEST_CASE("solved widths pass the budget audit") {
    for (const char* stem : {"li2fesio4", "li05mno3"}) {
        const auto s = solve_for(stem, 10000);
        const auto c = budget::verify(s.widths, s.budget, s.constants);
        CHECK(c.master_ok);
        CHECK(c.all_within);
        CHECK(c.all_minimal);
        CHECK(c.violation.empty());
    }
}

TEST_CASE("the audit catches a width that is too small or too large") {
    const auto s = solve_for("li2fesio4", 10000);
    auto w = s.widths;
    w.n[budget::Mloc] -= 1;
    auto c = budget::verify(w, s.budget, s.constants);
    CHECK_FALSE(c.all_within);
    CHECK_FALSE(c.violation.empty());
    w = s.widths;
    w.n[budget::chi] += 1;
    c = budget::verify(w, s.budget, s.constants);
    CHECK(c.all_within);
    CHECK_FALSE(c.all_minimal);
}

TEST_CASE("tighter error targets never shrink a width") {
    const auto a = solve_for("li2fesio4", 10000, 0.043);
    const auto b = solve_for("li2fesio4", 10000, 0.0043);
    for (int k = 0; k < budget::kNumChannels; ++k) CHECK(b.widths.n[k] >= a.widths.n[k]);
}
