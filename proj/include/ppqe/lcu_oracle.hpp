#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"
#include "ppqe/hgh.hpp"

// Small-grid ground truth: every Hamiltonian term is built twice, once entrywise
// from its closed form and once by summing coefficient x unitary over its LCU.
namespace ppqe::oracle {

using crystal::IVec3;
using crystal::Vec3;
using cplx = std::complex<double>;
using Dense = Eigen::MatrixXcd;
using Sparse = Eigen::SparseMatrix<double>;

enum class Kind { T, V, Uloc, UNL };

inline std::string to_string(Kind k) {
    switch (k) {
        case Kind::T: return "T";
        case Kind::V: return "V";
        case Kind::Uloc: return "U_loc";
        case Kind::UNL: return "U_NL";
    }
    return "?";
}

inline constexpr std::int64_t kMaxOracleN = 343;

struct Atom {
    hgh::HghSpecies species;
    Vec3 frac{};  // fractional coordinates
};

struct ToyCell {
    std::string name;
    crystal::ReciprocalLattice rec;
    crystal::PlaneWaveGrid grid;
    std::vector<Atom> atoms;

    Vec3 position(const Atom& a) const {
        Vec3 r{};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) r[k] += a.frac[i] * rec.a[i][k];
        return r;
    }
};

inline ToyCell make_cell(std::string name, const crystal::LatticeVectors& lat, std::int64_t N, std::vector<Atom> atoms) {
    if (N > kMaxOracleN) throw InputError("oracle grid too large: N = " + std::to_string(N) + " > 343");
    ToyCell c;
    c.name = std::move(name);
    c.rec = crystal::build_reciprocal(lat);
    c.grid = crystal::build_grid(N);
    c.atoms = std::move(atoms);
    return c;
}

// ---- helpers ---------------------------------------------------------------

inline IVec3 add(const IVec3& a, const IVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline IVec3 sub(const IVec3& a, const IVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// Two's-complement wrap of each component into an n-bit register.
inline IVec3 wrap(const IVec3& v, int n) {
    const int m = 1 << n, h = m / 2;
    IVec3 out;
    for (int k = 0; k < 3; ++k) out[k] = ((v[k] + h) % m + m) % m - h;
    return out;
}

inline std::vector<IVec3> grid_points(const crystal::PlaneWaveGrid& g) {
    std::vector<IVec3> pts;
    pts.reserve(static_cast<std::size_t>(g.size()));
    g.for_each([&](const IVec3& p) { pts.push_back(p); });
    return pts;
}

inline double max_abs(const Dense& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs(const Sparse& m) {
    double x = 0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (Sparse::InnerIterator it(m, k); it; ++it) x = std::max(x, std::fabs(it.value()));
    return x;
}

// ---- dense operators (closed forms) ---------------------------------------

inline Dense dense_T(const ToyCell& c) {
    const auto pts = grid_points(c.grid);
    Dense m = Dense::Zero(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) m(i, i) = c.rec.g2(pts[i]) / 2;
    return m;
}

// <p|U_loc|q> with nu = q - p restricted to G_0, G_nu = G_q - G_p.
inline Dense dense_Uloc(const ToyCell& c) {
    const auto pts = grid_points(c.grid);
    Dense m = Dense::Zero(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const IVec3 nu = sub(pts[j], pts[i]);
            if (i == j || !c.grid.contains(nu)) continue;
            const Vec3 Gnu = c.rec.g(nu);
            for (const auto& a : c.atoms) m(i, j) += hgh::local_element(a.species, Gnu, c.position(a), c.rec.omega);
        }
    return m;
}

inline Dense dense_UNL(const ToyCell& c) {
    const auto pts = grid_points(c.grid);
    Dense m = Dense::Zero(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            for (const auto& a : c.atoms)
                m(i, j) += hgh::nonlocal_element(a.species, c.rec.g(pts[i]), c.rec.g(pts[j]), c.position(a), c.rec.omega);
    return m;
}

// Two electrons in the product basis |p>_1 |q>_2, index p * N + q.
inline Sparse dense_V(const ToyCell& c) {
    const auto& g = c.grid;
    const auto pts = grid_points(g);
    const std::int64_t n = g.size();
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& p : pts)
        for (const auto& q : pts)
            g.for_each_nonzero([&](const IVec3& nu) {
                const double v = 2 * kPi / (c.rec.omega * c.rec.g2(nu));
                // (i, j) = (1, 2) and (2, 1)
                for (int order = 0; order < 2; ++order) {
                    const IVec3 p2 = order == 0 ? add(p, nu) : sub(p, nu);
                    const IVec3 q2 = order == 0 ? sub(q, nu) : add(q, nu);
                    if (!g.contains(p2) || !g.contains(q2)) continue;
                    trip.emplace_back(g.index(p2) * n + g.index(q2), g.index(p) * n + g.index(q), v);
                }
            });
    Sparse m(n * n, n * n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

// ---- LCU reconstructions ---------------------------------------------------

struct TLcu {
    Dense op;          // sum of coefficient x unitary
    Dense b0_branch;   // the b = 0 part alone
    double one_norm = 0;
    double shift = 0;  // identity constant removed when the b = 0 branch is dropped
    bool dropped_b0 = false;
};

// Sign-magnitude components: bit n_p-1 is the sign, bits 0..n_p-2 the magnitude.
inline TLcu lcu_T(const ToyCell& c, bool drop_identity_branch) {
    const int n_p = c.grid.n_p;
    const auto pts = grid_points(c.grid);
    const auto& gram = c.rec.gram;
    const bool ortho = c.rec.ortho_class == crystal::OrthoClass::orthogonal;
    TLcu out;
    out.dropped_b0 = drop_identity_branch && ortho;
    out.op = Dense::Zero(pts.size(), pts.size());
    out.b0_branch = Dense::Zero(pts.size(), pts.size());
    Accumulator norm, shift;
    for (int w = 0; w < 3; ++w)
        for (int v = 0; v < 3; ++v) {
            if (gram[w][v] == 0.0) continue;
            for (int r = 0; r <= n_p - 2; ++r)
                for (int s = 0; s <= n_p - 2; ++s) {
                    const double coef = std::fabs(gram[w][v]) * std::ldexp(1.0, r + s) / 4;
                    for (int b = 0; b < 2; ++b) {
                        if (b == 0 && out.dropped_b0) {
                            shift += coef;
                            continue;
                        }
                        norm += coef;
                        for (std::size_t i = 0; i < pts.size(); ++i) {
                            const int pw = pts[i][w], pv = pts[i][v];
                            const int bits = ((std::abs(pw) >> r) & 1) * ((std::abs(pv) >> s) & 1);
                            const double x = gram[w][v] * pw * pv;
                            const int sgn = x < 0 ? 1 : 0;
                            const double u = ((sgn + b * (bits + 1)) % 2 == 0) ? 1.0 : -1.0;
                            out.op(i, i) += coef * u;
                            if (b == 0) out.b0_branch(i, i) += coef * u;
                        }
                    }
                }
        }
    out.one_norm = norm.value();
    out.shift = shift.value();
    return out;
}

// Shift |q> -> |q - nu> in the n_p-bit register with wrap-around. The two b
// branches carry opposite signs whenever the true target leaves the grid.
struct ShiftLcu {
    Dense op;
    double one_norm = 0;
};

inline ShiftLcu lcu_Uloc(const ToyCell& c) {
    const auto& g = c.grid;
    const auto pts = grid_points(g);
    ShiftLcu out;
    out.op = Dense::Zero(pts.size(), pts.size());
    Accumulator norm;
    g.for_each_nonzero([&](const IVec3& nu) {
        const Vec3 Gnu = c.rec.g(nu);
        const double G = crystal::norm(Gnu);
        for (const auto& a : c.atoms) {
            const double gm = hgh::gamma(a.species, G);
            const double coef = 2 * kPi * std::fabs(gm) / (c.rec.omega * G * G);
            const cplx phase = (gm < 0 ? -1.0 : 1.0) * std::polar(1.0, crystal::dot(Gnu, c.position(a)));
            for (int b = 0; b < 2; ++b) {
                norm += coef;
                for (std::size_t j = 0; j < pts.size(); ++j) {
                    const IVec3 target = sub(pts[j], nu);
                    const IVec3 reg = wrap(target, g.n_p);
                    const double sign = (b == 1 && !g.contains(target)) ? -1.0 : 1.0;
                    if (!g.contains(reg)) continue;  // lands outside the block we compare
                    out.op(g.index(reg), j) += coef * sign * phase;
                }
            }
        }
    });
    out.one_norm = norm.value();
    return out;
}

struct SparseLcu {
    Sparse op;
    double one_norm = 0;
};

inline SparseLcu lcu_V(const ToyCell& c) {
    const auto& g = c.grid;
    const auto pts = grid_points(g);
    const std::int64_t n = g.size();
    std::vector<Eigen::Triplet<double>> trip;
    Accumulator norm;
    g.for_each_nonzero([&](const IVec3& nu) {
        const double coef = kPi / (c.rec.omega * c.rec.g2(nu));
        for (int order = 0; order < 2; ++order) {
            const IVec3 d = order == 0 ? nu : IVec3{-nu[0], -nu[1], -nu[2]};
            norm += 2 * coef;
            for (const auto& p : pts)
                for (const auto& q : pts) {
                    const IVec3 p2 = add(p, d), q2 = sub(q, d);
                    const bool inside = g.contains(p2) && g.contains(q2);
                    const IVec3 rp = wrap(p2, g.n_p), rq = wrap(q2, g.n_p);
                    if (!g.contains(rp) || !g.contains(rq)) continue;
                    // b = 0 contributes +coef; b = 1 contributes -coef outside the grid.
                    const double v = coef + (inside ? coef : -coef);
                    if (v == 0.0) continue;
                    trip.emplace_back(g.index(rp) * n + g.index(rq), g.index(p) * n + g.index(q), v);
                }
        }
    });
    SparseLcu out;
    out.op = Sparse(n * n, n * n);
    out.op.setFromTriplets(trip.begin(), trip.end());
    out.one_norm = norm.value();
    return out;
}

struct NlLcu {
    Dense op;           // reflections only
    double shift = 0;   // identity constant, summed over nuclei
    double one_norm = 0;
};

// `flip_sigma` >= 0 negates that coefficient; used to check the oracle catches a sign error.
inline NlLcu lcu_UNL(const ToyCell& c, int flip_sigma = -1) {
    const auto pts = grid_points(c.grid);
    const auto d = static_cast<Eigen::Index>(pts.size());
    NlLcu out;
    out.op = Dense::Zero(d, d);
    Accumulator shift, norm;
    for (const auto& a : c.atoms) {
        const auto sums = hgh::species_sums(a.species, c.grid, c.rec);
        const Vec3 R = c.position(a);
        Eigen::VectorXcd phase(d);
        for (Eigen::Index i = 0; i < d; ++i) phase(i) = std::polar(1.0, crystal::dot(c.rec.g(pts[i]), R));
        for (int sigma = 0; sigma < hgh::kNumNlTerms; ++sigma) {
            const double coef = sigma == flip_sigma ? -sums.c[sigma] : sums.c[sigma];
            if (coef == 0.0) continue;
            Eigen::VectorXcd psi(d);
            for (Eigen::Index i = 0; i < d; ++i) psi(i) = hgh::nl_amplitude(a.species, sigma, c.rec.g(pts[i]));
            psi /= psi.norm();
            // R^dagger (1 - 2|psi><psi|) R
            Dense refl = Dense::Identity(d, d) - 2 * psi * psi.adjoint();
            refl = phase.conjugate().asDiagonal() * refl * phase.asDiagonal();
            out.op += coef * refl;
            norm += std::fabs(coef);
        }
        shift += sums.shift;
    }
    out.shift = shift.value();
    out.one_norm = norm.value();
    return out;
}

// ---- comparisons -----------------------------------------------------------

struct Comparison {
    Kind kind;
    std::string cell;
    std::int64_t N = 0;
    double rel_diff = 0;       // max |dense - lcu| / max |dense|
    double hermitian_dense = 0;
    double hermitian_lcu = 0;
    double spectral_norm = 0;  // of the LCU operator (upper bound for V)
    double one_norm = 0;
    double seconds = 0;

    bool ok(double tol_entry = 1e-9, double tol_herm = 1e-10) const {
        return rel_diff <= tol_entry && hermitian_dense <= tol_herm && hermitian_lcu <= tol_herm &&
               one_norm >= spectral_norm * (1 - 1e-12);
    }
};

inline double hermitian_defect(const Dense& m) {
    const double s = max_abs(m);
    return s == 0 ? 0 : (m - m.adjoint()).cwiseAbs().maxCoeff() / s;
}

inline double hermitian_defect(const Sparse& m) {
    const double s = max_abs(m);
    if (s == 0) return 0;
    Sparse t = m.transpose();
    return max_abs(Sparse(m - t)) / s;
}

inline double spectral_norm(const Dense& m) {
    Eigen::SelfAdjointEigenSolver<Dense> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Max absolute row sum; bounds the spectral norm of a symmetric matrix.
inline double row_sum_bound(const Sparse& m) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k)
        for (Sparse::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::fabs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

inline Comparison compare(Kind kind, const ToyCell& c, int flip_sigma = -1) {
    Comparison r;
    r.kind = kind;
    r.cell = c.name;
    r.N = c.grid.size();
    const auto ident = [&](double s) { return Dense(s * Dense::Identity(c.grid.size(), c.grid.size())); };
    switch (kind) {
        case Kind::T: {
            const Dense d = dense_T(c);
            const TLcu l = lcu_T(c, true);
            const Dense rec = l.op + ident(l.shift);
            r.rel_diff = max_abs(Dense(d - rec)) / max_abs(d);
            r.hermitian_dense = hermitian_defect(d);
            r.hermitian_lcu = hermitian_defect(l.op);
            r.spectral_norm = spectral_norm(l.op);
            r.one_norm = l.one_norm;
            break;
        }
        case Kind::Uloc: {
            const Dense d = dense_Uloc(c);
            const ShiftLcu l = lcu_Uloc(c);
            r.rel_diff = max_abs(Dense(d - l.op)) / max_abs(d);
            r.hermitian_dense = hermitian_defect(d);
            r.hermitian_lcu = hermitian_defect(l.op);
            r.spectral_norm = spectral_norm(l.op);
            r.one_norm = l.one_norm;
            break;
        }
        case Kind::UNL: {
            const Dense d = dense_UNL(c);
            const NlLcu l = lcu_UNL(c, flip_sigma);
            const Dense rec = l.op + ident(l.shift);
            r.rel_diff = max_abs(Dense(d - rec)) / max_abs(d);
            r.hermitian_dense = hermitian_defect(d);
            r.hermitian_lcu = hermitian_defect(l.op);
            r.spectral_norm = spectral_norm(l.op);
            r.one_norm = l.one_norm;
            break;
        }
        case Kind::V: {
            const Sparse d = dense_V(c);
            const SparseLcu l = lcu_V(c);
            r.rel_diff = max_abs(Sparse(d - l.op)) / max_abs(d);
            r.hermitian_dense = hermitian_defect(d);
            r.hermitian_lcu = hermitian_defect(l.op);
            r.spectral_norm = row_sum_bound(l.op);
            r.one_norm = l.one_norm;
            break;
        }
    }
    return r;
}

// ---- standard toy cells ----------------------------------------------------

// Bohr lattices covering the three orthogonality classes.
inline crystal::LatticeVectors orthogonal_lattice() { return {{6.0, 0, 0}, {0, 7.0, 0}, {0, 0, 8.0}}; }
inline crystal::LatticeVectors partially_orthogonal_lattice() { return {{6.0, 0, 0}, {0, 7.0, 0}, {-1.3, 0, 8.0}}; }
inline crystal::LatticeVectors general_lattice() { return {{6.0, 0.4, 0.2}, {0.9, 7.0, 0.3}, {-1.1, 0.7, 8.0}}; }

// O, Mn and Li nuclei at fixed, non-symmetric positions.
inline std::vector<Atom> toy_atoms(const std::vector<hgh::HghSpecies>& table) {
    return {{hgh::find(table, "O"), {0.0, 0.0, 0.0}},
            {hgh::find(table, "Mn"), {0.5, 0.43, 0.61}},
            {hgh::find(table, "Li"), {0.21, 0.77, 0.13}},
            {hgh::find(table, "O"), {0.83, 0.35, 0.29}}};
}

inline std::vector<ToyCell> standard_cells(const std::vector<hgh::HghSpecies>& table, std::int64_t N) {
    const auto atoms = toy_atoms(table);
    return {make_cell("orthogonal", orthogonal_lattice(), N, atoms),
            make_cell("partially_orthogonal", partially_orthogonal_lattice(), N, atoms),
            make_cell("general", general_lattice(), N, atoms)};
}

}  // namespace ppqe::oracle
