#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ppqe/common.hpp"

namespace ppqe::crystal {

using Vec3 = std::array<double, 3>;
using IVec3 = std::array<int, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Primitive vectors in Bohr.
struct LatticeVectors {
    Vec3 a1{}, a2{}, a3{};

    static LatticeVectors from_angstrom(const Mat3& rows) {
        LatticeVectors l;
        Vec3* dst[3] = {&l.a1, &l.a2, &l.a3};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) (*dst[i])[k] = angstrom_to_bohr(rows[i][k]);
        return l;
    }
};

enum class OrthoClass { orthogonal, partially_orthogonal, general };

inline std::string to_string(OrthoClass c) {
    switch (c) {
        case OrthoClass::orthogonal: return "orthogonal";
        case OrthoClass::partially_orthogonal: return "partially_orthogonal";
        case OrthoClass::general: return "general";
    }
    return "?";
}

struct ReciprocalLattice {
    std::array<Vec3, 3> a{};
    std::array<Vec3, 3> b{};
    double omega = 0.0;  // Bohr^3
    Mat3 gram{};         // <b_w, b_w'>
    double b_min = 0.0;  // smallest singular value of [b1 b2 b3]
    OrthoClass ortho_class = OrthoClass::general;
    double max_a_norm = 0.0;

    Vec3 g(const IVec3& p) const {
        Vec3 out{};
        for (int w = 0; w < 3; ++w)
            for (int k = 0; k < 3; ++k) out[k] += p[w] * b[w][k];
        return out;
    }
    double g2(const IVec3& p) const {
        double s = 0.0;
        for (int w = 0; w < 3; ++w)
            for (int v = 0; v < 3; ++v) s += gram[w][v] * p[w] * p[v];
        return s;
    }
    double sum_abs_gram() const {
        double s = 0.0;
        for (const auto& row : gram)
            for (double x : row) s += std::fabs(x);
        return s;
    }
};

inline constexpr double kOrthoTolerance = 1e-10;

inline OrthoClass classify_gram(const Mat3& gram) {
    auto is_zero = [&](int i, int j) {
        return std::fabs(gram[i][j]) <= kOrthoTolerance * std::sqrt(gram[i][i] * gram[j][j]);
    };
    int orthogonal_vectors = 0;
    for (int i = 0; i < 3; ++i) {
        bool all = true;
        for (int j = 0; j < 3; ++j)
            if (j != i && !is_zero(i, j)) all = false;
        orthogonal_vectors += all ? 1 : 0;
    }
    if (orthogonal_vectors == 3) return OrthoClass::orthogonal;
    if (orthogonal_vectors == 1) return OrthoClass::partially_orthogonal;
    return OrthoClass::general;
}

inline OrthoClass classify_lattice(const ReciprocalLattice& r) { return classify_gram(r.gram); }

inline ReciprocalLattice build_reciprocal(const LatticeVectors& lat) {
    ReciprocalLattice r;
    r.a = {lat.a1, lat.a2, lat.a3};
    r.omega = dot(lat.a1, cross(lat.a2, lat.a3));
    if (!(std::fabs(r.omega) >= 1e-9)) throw InputError("singular lattice: cell volume below 1e-9 Bohr^3");
    if (r.omega < 0) throw InputError("lattice vectors must be right-handed (det[a1 a2 a3] > 0)");
    const double f = 2.0 * kPi / r.omega;
    const Vec3 c1 = cross(lat.a2, lat.a3), c2 = cross(lat.a3, lat.a1), c3 = cross(lat.a1, lat.a2);
    for (int k = 0; k < 3; ++k) {
        r.b[0][k] = f * c1[k];
        r.b[1][k] = f * c2[k];
        r.b[2][k] = f * c3[k];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.gram[i][j] = dot(r.b[i], r.b[j]);
    Eigen::Matrix3d B;
    for (int w = 0; w < 3; ++w)
        for (int k = 0; k < 3; ++k) B(k, w) = r.b[w][k];
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(B);
    r.b_min = svd.singularValues().minCoeff();
    r.ortho_class = classify_lattice(r);
    r.max_a_norm = std::max({norm(lat.a1), norm(lat.a2), norm(lat.a3)});
    return r;
}

// Symmetric cube p_i in [-(K-1), K-1]; n_p from the requested N.
struct PlaneWaveGrid {
    std::int64_t N = 0;
    int n_p = 0;
    int K = 0;

    int side() const { return 2 * K - 1; }
    std::int64_t size() const { return std::int64_t{side()} * side() * side(); }
    bool contains(const IVec3& p) const {
        return std::abs(p[0]) <= K - 1 && std::abs(p[1]) <= K - 1 && std::abs(p[2]) <= K - 1;
    }
    std::int64_t index(const IVec3& p) const {
        const int s = side(), o = K - 1;
        return (std::int64_t{p[0] + o} * s + (p[1] + o)) * s + (p[2] + o);
    }
    IVec3 point(std::int64_t idx) const {
        const int s = side(), o = K - 1;
        IVec3 p;
        p[2] = static_cast<int>(idx % s) - o;
        idx /= s;
        p[1] = static_cast<int>(idx % s) - o;
        idx /= s;
        p[0] = static_cast<int>(idx) - o;
        return p;
    }
    // Visit every member of G in a fixed lexicographic order.
    template <class F>
    void for_each(F&& f) const {
        const int m = K - 1;
        for (int x = -m; x <= m; ++x)
            for (int y = -m; y <= m; ++y)
                for (int z = -m; z <= m; ++z) f(IVec3{x, y, z});
    }
    // Visit G_0 = G minus the origin.
    template <class F>
    void for_each_nonzero(F&& f) const {
        for_each([&](const IVec3& p) {
            if (p[0] != 0 || p[1] != 0 || p[2] != 0) f(p);
        });
    }
};

inline int n_p_for(std::int64_t N) {
    return ceil_log2_real(std::cbrt(static_cast<double>(N)) + 1.0);
}

inline PlaneWaveGrid build_grid(std::int64_t N) {
    if (N < 8) throw InputError("plane-wave count N must be at least 8 to form a 3D grid");
    PlaneWaveGrid g;
    g.N = N;
    g.n_p = n_p_for(N);
    g.K = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(N)) / 2.0 - 1e-12));
    return g;
}

inline int inf_norm(const IVec3& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

// Shell index mu with 2^{mu-2} <= |nu|_inf <= 2^{mu-1}-1, or none beyond the cube.
inline std::optional<int> shell_of(const IVec3& nu, const PlaneWaveGrid& grid) {
    const int m = inf_norm(nu);
    if (m == 0) throw InputError("shell_of: the origin belongs to no shell");
    if (m >= (1 << grid.n_p)) return std::nullopt;
    int mu = 2;
    while (m > (1 << (mu - 1)) - 1) ++mu;
    return mu;
}

}  // namespace ppqe::crystal
