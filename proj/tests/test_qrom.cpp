#include <doctest.h>

#include <random>

#include "ppqe/qrom_model.hpp"

using namespace ppqe;
using namespace ppqe::qrom;

TEST_CASE("lookup cost formulas") {
    CHECK(output_cost(Variant::Select, 5, 10, 1) == 32);
    CHECK(output_cost(Variant::SelSwapDirty, 5, 10, 4) == 3 * 10 * 4 + 2 * 8);
    CHECK(output_depth(Variant::SelSwapDirty, 5, 10, 4, 2) == 3 * 5 * 2 + 2 * 8);
    CHECK(select_superposition_cost(2, 10) == 2 * 7 + 7 * 2);
    CHECK_THROWS_AS(output_cost(Variant::SelSwapDirty, 3, 4, 9), InputError);
    CHECK_THROWS_AS(output_cost(Variant::SelSwapDirty, 3, 4, 0), InputError);
}

TEST_CASE("beta search returns the integer minimum within the feasible range") {
    for (int n : {6, 10, 14})
        for (int b : {8, 20}) {
            const auto be = optimal_beta(Mode::cost, n, b, 1, 100000, 500);
            std::int64_t best = superposition_cost(n, b, 1);
            for (std::int64_t x = 1; x <= std::min<std::int64_t>(100000 / b, pow2(n)); ++x)
                best = std::min(best, superposition_cost(n, b, x));
            CHECK(superposition_cost(n, b, be) == best);
            // The closed form lands near the integer optimum.
            const auto cf = closed_form_beta(Mode::cost, n, b, 1, 100000, 500);
            CHECK(superposition_cost(n, b, cf) <= best * 11 / 10);
        }
}

TEST_CASE("beta respects the dirty-qubit and parallel-Toffoli limits") {
    CHECK(optimal_beta(Mode::cost, 14, 20, 1, 0, 500) == 1);
    const auto be = optimal_beta(Mode::depth, 14, 20, 2, 1000, 30);
    CHECK(be * 20 <= 1000);
    CHECK(be * 2 <= 30);
}

TEST_CASE("depth never exceeds cost for the same beta") {
    for (std::int64_t be : {1, 2, 8, 32})
        CHECK(superposition_depth(10, 16, be, 1) <= superposition_cost(10, 16, be));
}

TEST_CASE("state preparation simulator") {
    const auto r = simulate_algorithm1({0.5, 0.5, 0.5, 0.5}, 8);
    CHECK(r.l2_error < algorithm1_error_bound(2, 8));
    // A basis state is prepared exactly.
    CHECK(simulate_algorithm1({0, 0, 1, 0}, 4).l2_error < 1e-15);
    CHECK_THROWS_AS(simulate_algorithm1({0.6, 0.8, 0}, 8), InputError);
    CHECK_THROWS_AS(simulate_algorithm1({0.6, -0.8}, 8), InputError);
    CHECK_THROWS_AS(simulate_algorithm1({1, 1}, 8), InputError);
}

TEST_CASE("simulated error shrinks with more rotation bits") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x(16);
    double n2 = 0;
    for (auto& v : x) {
        v = u(rng);
        n2 += v * v;
    }
    for (auto& v : x) v /= std::sqrt(n2);
    CHECK(simulate_algorithm1(x, 16).l2_error < simulate_algorithm1(x, 6).l2_error);
    CHECK(simulate_algorithm1(x, 16).l2_error <= algorithm1_error_bound(4, 16));
}
