#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ppqe/crystal.hpp"
#include "support.hpp"

using namespace ppqe;
using namespace ppqe::crystal;

TEST_CASE("cubic reciprocal lattice") {
    const double L = 9.5;
    auto r = testsupport::cubic(L);
    CHECK(r.omega == doctest::Approx(L * L * L).epsilon(1e-14));
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) CHECK(r.b[i][k] == doctest::Approx(i == k ? 2 * kPi / L : 0.0));
    CHECK(r.ortho_class == OrthoClass::orthogonal);
    CHECK(r.b_min == doctest::Approx(2 * kPi / L).epsilon(1e-13));
}

TEST_CASE("a_i . b_j = 2 pi delta_ij") {
    for (const auto& lat : {testsupport::ortho_cell(), testsupport::mono_cell(), testsupport::triclinic_cell()}) {
        auto r = build_reciprocal(lat);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double d = dot(r.a[i], r.b[j]);
                CHECK(std::fabs(d - (i == j ? 2 * kPi : 0.0)) <= 1e-12 * 2 * kPi);
            }
    }
}

TEST_CASE("Li0.75MnO2F cell volume") {
    auto lat = LatticeVectors::from_angstrom({{{12.48, 0, 0}, {0, 8.32, 0}, {0, 0, 8.32}}});
    auto r = build_reciprocal(lat);
    const double vol_A3 = r.omega / std::pow(kBohrPerAngstrom, 3);
    CHECK(vol_A3 == doctest::Approx(863.8955).epsilon(1e-6));
    CHECK(r.ortho_class == OrthoClass::orthogonal);
}

TEST_CASE("Li0.5MnO3 Gram matrix against a brute-force inverse") {
    auto lat = LatticeVectors::from_angstrom({{{10.02, 0, 0}, {0, 17.32, 0}, {-1.6949, 0, 4.7995}}});
    auto r = build_reciprocal(lat);
    // Oracle: B^T = 2 pi A^{-1}, with A holding a_i as rows.
    Eigen::Matrix3d A;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) A(i, k) = r.a[i][k];
    Eigen::Matrix3d Bt = 2 * kPi * A.inverse();  // columns are b_j
    Eigen::Matrix3d G = Bt.transpose() * Bt;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(r.gram[i][j] == doctest::Approx(G(i, j)).epsilon(1e-12).scale(1.0));
    CHECK(r.ortho_class == OrthoClass::partially_orthogonal);
    CHECK(r.omega / std::pow(kBohrPerAngstrom, 3) == doctest::Approx(832.9405).epsilon(1e-5));
}

TEST_CASE("classification") {
    CHECK(build_reciprocal(testsupport::ortho_cell()).ortho_class == OrthoClass::orthogonal);
    CHECK(build_reciprocal(testsupport::mono_cell()).ortho_class == OrthoClass::partially_orthogonal);
    CHECK(build_reciprocal(testsupport::triclinic_cell()).ortho_class == OrthoClass::general);
}

TEST_CASE("classification is rotation invariant") {
    const double t = 0.7;
    Eigen::Matrix3d Rz;
    Rz << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
    Eigen::Matrix3d Rx;
    Rx << 1, 0, 0, 0, std::cos(1.1), -std::sin(1.1), 0, std::sin(1.1), std::cos(1.1);
    const Eigen::Matrix3d Q = Rz * Rx;
    for (const auto& lat : {testsupport::ortho_cell(), testsupport::mono_cell(), testsupport::triclinic_cell()}) {
        auto rot = [&](const Vec3& v) {
            Eigen::Vector3d w = Q * Eigen::Vector3d(v[0], v[1], v[2]);
            return Vec3{w(0), w(1), w(2)};
        };
        LatticeVectors l2{rot(lat.a1), rot(lat.a2), rot(lat.a3)};
        CHECK(build_reciprocal(l2).ortho_class == build_reciprocal(lat).ortho_class);
    }
}

TEST_CASE("b_min bounds") {
    for (const auto& lat : {testsupport::ortho_cell(), testsupport::mono_cell(), testsupport::triclinic_cell()}) {
        auto r = build_reciprocal(lat);
        double mn = 1e300;
        for (const auto& b : r.b) mn = std::min(mn, norm(b));
        CHECK(r.b_min <= mn * (1 + 1e-14));
        if (r.ortho_class == OrthoClass::orthogonal) CHECK(r.b_min == doctest::Approx(mn));
        // G^2 >= b_min^2 |nu|^2 on random samples
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> d(-20, 20);
        for (int s = 0; s < 2000; ++s) {
            IVec3 nu{d(rng), d(rng), d(rng)};
            const double n2 = double(nu[0]) * nu[0] + double(nu[1]) * nu[1] + double(nu[2]) * nu[2];
            CHECK(r.g2(nu) >= r.b_min * r.b_min * n2 * (1 - 1e-12));
        }
    }
}

TEST_CASE("singular and left-handed lattices are rejected") {
    CHECK_THROWS_AS(build_reciprocal({{1, 0, 0}, {2, 0, 0}, {0, 0, 1}}), InputError);
    CHECK_THROWS_AS(build_reciprocal({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}), InputError);
}

TEST_CASE("n_p and grid side") {
    CHECK(build_grid(100000).n_p == 6);
    CHECK(build_grid(8).n_p == 2);
    CHECK(build_grid(55473).n_p == 6);
    // Direct numeric evaluation.
    for (long N : {27L, 125L, 1000L, 10000L, 19549L, 57655L, 67767L}) {
        const int expect = static_cast<int>(std::ceil(std::log2(std::cbrt(double(N)) + 1)));
        CHECK(build_grid(N).n_p == expect);
    }
    CHECK(build_grid(27).K == 2);
    CHECK(build_grid(27).size() == 27);
    CHECK(build_grid(125).size() == 125);
    CHECK(build_grid(55473).K == 20);
    CHECK_THROWS_AS(build_grid(7), InputError);
}

TEST_CASE("grid is origin symmetric and G0 excludes the origin") {
    auto g = build_grid(343);
    std::int64_t n = 0, n0 = 0;
    g.for_each([&](const IVec3& p) {
        ++n;
        CHECK(g.contains({-p[0], -p[1], -p[2]}));
        CHECK(g.point(g.index(p)) == p);
    });
    g.for_each_nonzero([&](const IVec3& p) {
        ++n0;
        CHECK((p[0] | p[1] | p[2]) != 0);
    });
    CHECK(n == g.size());
    CHECK(n0 == n - 1);
}

TEST_CASE("shell_of") {
    auto g = build_grid(4096);  // n_p = 5
    CHECK(shell_of({1, 0, 0}, g) == 2);
    CHECK(shell_of({3, -2, 1}, g) == 3);
    CHECK_THROWS_AS(shell_of({0, 0, 0}, g), InputError);
    CHECK_FALSE(shell_of({32, 0, 0}, g).has_value());
}

TEST_CASE("shells partition the cube for n_p = 4") {
    PlaneWaveGrid g = build_grid(1000);
    REQUIRE(g.n_p == 4);
    const int m = (1 << g.n_p) - 1;
    std::map<int, long> counts;
    for (int x = -m; x <= m; ++x)
        for (int y = -m; y <= m; ++y)
            for (int z = -m; z <= m; ++z) {
                if (!x && !y && !z) continue;
                const IVec3 nu{x, y, z};
                int hits = 0, hit_mu = 0;
                for (int mu = 2; mu <= g.n_p + 1; ++mu) {
                    const int a = inf_norm(nu);
                    if (a >= (1 << (mu - 2)) && a <= (1 << (mu - 1)) - 1) {
                        ++hits;
                        hit_mu = mu;
                    }
                }
                CHECK(hits == 1);
                CHECK(shell_of(nu, g) == hit_mu);
                ++counts[hit_mu];
            }
    long total = 0;
    for (auto& [mu, c] : counts) total += c;
    CHECK(total == long(2 * m + 1) * (2 * m + 1) * (2 * m + 1) - 1);
}
