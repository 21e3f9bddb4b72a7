#include <doctest.h>

#include "ppqe/verify.hpp"
#include "support.hpp"

using namespace ppqe;

namespace {
const std::vector<hgh::HghSpecies>& table() {
    static const auto t = hgh::load_table(testsupport::hgh_path());
    return t;
}
}  // namespace

TEST_CASE("quadrature helpers") {
    const auto v = quad::log_spaced(1e-3, 10.0, 5);
    REQUIRE(v.size() == 5);
    CHECK(v.front() == doctest::Approx(1e-3));
    CHECK(v.back() == doctest::Approx(10.0));
    CHECK(v[2] == doctest::Approx(0.1));
    CHECK(quad::rel_diff(1.0, 1.0) == 0.0);
    CHECK(quad::rel_diff(0.0, 0.0) == 0.0);
    CHECK(quad::rel_diff(2.0, 1.0) == doctest::Approx(0.5));
    CHECK(quad::integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-14));
}

TEST_CASE("closed-form suite passes for the shipped table") {
    const auto s = verify::quadrature_suite(table());
    CHECK(s.passed());
    // Every species has a local check; projector checks follow the nonzero B_l.
    std::size_t expected = 0;
    for (const auto& sp : table()) expected += 1 + (sp.B[0] != 0) + (sp.B[1] != 0) + (sp.B[2] != 0);
    CHECK(s.checks.size() == expected);
}

TEST_CASE("state-preparation error lemma suite passes") {
    const auto s = verify::algorithm1_suite({});
    CHECK(s.checks.size() == 15);
    CHECK(s.passed());
}

TEST_CASE("LCU suite passes and fails under an injected sign flip") {
    verify::Options opt;
    CHECK(verify::lcu_suite(table(), opt).passed());
    opt.flip_nl_sigma = 0;
    const auto bad = verify::lcu_suite(table(), opt);
    CHECK_FALSE(bad.passed());
    for (const auto& c : bad.checks)
        if (!c.passed) CHECK(c.name.find("U_NL") != std::string::npos);
}

TEST_CASE("an empty suite does not count as passing") {
    verify::Suite s;
    CHECK_FALSE(s.passed());
}
