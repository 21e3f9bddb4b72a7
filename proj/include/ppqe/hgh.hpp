#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"

namespace ppqe::hgh {

using crystal::IVec3;
using crystal::Mat3;
using crystal::Vec3;
using cplx = std::complex<double>;

struct HghSpecies {
    std::string symbol;
    int Z_ion = 0;
    double r_loc = 0.0;
    std::array<double, 4> C{};
    std::array<double, 3> rl{};  // r0, r1, r2
    std::array<double, 3> B{};   // B_l = h11 of channel l

    bool has_higher_local_terms() const { return C[2] != 0.0 || C[3] != 0.0; }
};

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw InputError(where + ": unknown field '" + k + "'");
    for (const auto& k : allowed)
        if (!j.contains(k)) throw InputError(where + ": missing field '" + k + "'");
}

inline HghSpecies species_from_json(const nlohmann::json& j) {
    check_keys(j, {"symbol", "Z_ion", "r_loc", "C", "rl", "B"}, "HGH record");
    HghSpecies s;
    try {
        s.symbol = j.at("symbol").get<std::string>();
        s.Z_ion = j.at("Z_ion").get<int>();
        s.r_loc = j.at("r_loc").get<double>();
        s.C = j.at("C").get<std::array<double, 4>>();
        s.rl = j.at("rl").get<std::array<double, 3>>();
        s.B = j.at("B").get<std::array<double, 3>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError("HGH record '" + s.symbol + "': " + e.what());
    }
    if (s.Z_ion <= 0) throw InputError("HGH record '" + s.symbol + "': Z_ion must be positive");
    if (!(s.r_loc > 0)) throw InputError("HGH record '" + s.symbol + "': r_loc must be positive");
    for (int l = 0; l < 3; ++l)
        if (s.B[l] != 0.0 && !(s.rl[l] > 0))
            throw InputError("HGH record '" + s.symbol + "': r_" + std::to_string(l) + " must be positive when B is nonzero");
    return s;
}

inline std::vector<HghSpecies> parse_table(const nlohmann::json& j) {
    if (!j.is_array()) throw InputError("HGH table: expected a JSON array");
    std::vector<HghSpecies> out;
    std::set<std::string> seen;
    for (const auto& rec : j) {
        out.push_back(species_from_json(rec));
        if (!seen.insert(out.back().symbol).second)
            throw InputError("HGH table: duplicate symbol '" + out.back().symbol + "'");
    }
    return out;
}

inline constexpr const char* kTableEnv = "PPQE_HGH_TABLE";

// Explicit path wins, then the environment, then the fallback.
inline std::string resolve_table_path(const std::string& explicit_path, const std::string& fallback) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv(kTableEnv); env && *env) return env;
    return fallback;
}

inline std::vector<HghSpecies> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open HGH table '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("HGH table '" + path + "': " + e.what());
    }
    return parse_table(j);
}

inline const HghSpecies& find(const std::vector<HghSpecies>& table, const std::string& symbol) {
    for (const auto& s : table)
        if (s.symbol == symbol) return s;
    throw InputError("species '" + symbol + "' not found in the HGH table");
}

// ---- local part ----------------------------------------------------------

// Bracket of the local element without the 4pi/Omega prefactor and the phase:
// e^{-x^2/2} [ -Z/G^2 + sqrt(pi/2) r^3 (C1 + C2(3-x^2) + C3(15-10x^2+x^4) + C4(105-105x^2+21x^4-x^6)) ].
inline double local_radial(const HghSpecies& s, double G) {
    const double r = s.r_loc, x2 = G * G * r * r;
    const double poly = s.C[0] + s.C[1] * (3 - x2) + s.C[2] * (15 - 10 * x2 + x2 * x2) +
                        s.C[3] * (105 - 105 * x2 + 21 * x2 * x2 - x2 * x2 * x2);
    return std::exp(-x2 / 2) * (-s.Z_ion / (G * G) + std::sqrt(kPi / 2) * r * r * r * poly);
}

inline cplx local_element(const HghSpecies& s, const Vec3& G_nu, const Vec3& R, double omega) {
    const double G = crystal::norm(G_nu);
    if (G == 0.0) throw InputError("local_element: G_nu = 0 is excluded");
    return (4 * kPi / omega) * std::polar(1.0, crystal::dot(G_nu, R)) * local_radial(s, G);
}

// gamma(G) = G^2 * bracket, truncated after C2.
inline double gamma(const HghSpecies& s, double G) {
    const double r = s.r_loc, G2 = G * G, k = std::sqrt(kPi / 2);
    return std::exp(-G2 * r * r / 2) *
           (-s.Z_ion + (s.C[0] + 3 * s.C[1]) * k * r * r * r * G2 - s.C[1] * k * std::pow(r, 5) * G2 * G2);
}

// ---- non-local part ------------------------------------------------------

// Radial projector beta_l(r) = A_l r^l exp(-r^2 / 2 r_l^2).
inline double projector(const HghSpecies& s, int l, double r) {
    const double rl = s.rl[l];
    const double A = std::sqrt(2.0) / (std::pow(rl, l + 1.5) * std::tgamma(l + 1.5));
    return A * std::pow(r, l) * std::exp(-r * r / (2 * rl * rl));
}

// Closed form of int r^2 j_l(G r) beta_l(r) dr.
inline double projector_overlap(const HghSpecies& s, int l, double G) {
    const double r = s.rl[l], e = std::exp(-G * G * r * r / 2);
    switch (l) {
        case 0: return 2 * std::pow(r, 1.5) * e;
        case 1: return 4.0 / 3.0 * std::pow(r, 2.5) * G * e;
        case 2: return 8.0 / 15.0 * std::pow(r, 3.5) * G * G * e;
    }
    throw InputError("projector_overlap: l must be 0, 1 or 2");
}

// Kernel f(p,q) without 4pi/Omega and phase. The l = 2 angular factor is
// 5 P_2(cos) (8/15)^2 = (32/15)(Gp.Gq)^2 - (32/45) Gp^2 Gq^2.
inline double nonlocal_kernel(const HghSpecies& s, const Vec3& Gp, const Vec3& Gq) {
    const double gp2 = crystal::dot(Gp, Gp), gq2 = crystal::dot(Gq, Gq), pq = crystal::dot(Gp, Gq);
    double f = 0.0;
    if (s.B[0] != 0.0) {
        const double r = s.rl[0];
        f += 4 * std::pow(r, 3) * s.B[0] * std::exp(-(gp2 + gq2) * r * r / 2);
    }
    if (s.B[1] != 0.0) {
        const double r = s.rl[1];
        f += 16.0 / 3.0 * std::pow(r, 5) * s.B[1] * pq * std::exp(-(gp2 + gq2) * r * r / 2);
    }
    if (s.B[2] != 0.0) {
        const double r = s.rl[2];
        f += std::pow(r, 7) * s.B[2] * (32.0 / 15.0 * pq * pq - 32.0 / 45.0 * gp2 * gq2) *
             std::exp(-(gp2 + gq2) * r * r / 2);
    }
    return f;
}

inline cplx nonlocal_element(const HghSpecies& s, const Vec3& Gp, const Vec3& Gq, const Vec3& R, double omega) {
    const Vec3 d{Gq[0] - Gp[0], Gq[1] - Gp[1], Gq[2] - Gp[2]};
    return (4 * kPi / omega) * std::polar(1.0, crystal::dot(d, R)) * nonlocal_kernel(s, Gp, Gq);
}

// One Gaussian projector state of the non-local LCU. Indices 0..10 follow the
// paper's enumeration; 11..13 are the diagonal (w,w) states of (Gp.Gq)^2.
struct NlTerm {
    int l;
    int w1;  // -1 when unused
    int w2;
};

inline constexpr int kNumNlTerms = 14;
inline constexpr int kNumPaperNlTerms = 11;

inline const std::array<NlTerm, kNumNlTerms>& nl_terms() {
    static const std::array<NlTerm, kNumNlTerms> t = {{
        {0, -1, -1},
        {1, 0, -1}, {1, 1, -1}, {1, 2, -1},
        {2, -1, -1},
        {2, 0, 1}, {2, 0, 2}, {2, 1, 0}, {2, 1, 2}, {2, 2, 0}, {2, 2, 1},
        {2, 0, 0}, {2, 1, 1}, {2, 2, 2},
    }};
    return t;
}

// Unnormalized amplitude of term sigma at Cartesian momentum G.
inline double nl_amplitude(const HghSpecies& s, int sigma, const Vec3& G) {
    const NlTerm& t = nl_terms()[sigma];
    const double g2 = crystal::dot(G, G), r = s.rl[t.l];
    const double e = std::exp(-g2 * r * r / 2);
    if (t.l == 0) return e;
    if (t.l == 1) return G[t.w1] * e;
    if (t.w1 < 0) return g2 * e;
    return G[t.w1] * G[t.w2] * e;
}

// Projector weight w_sigma with U_NL = (4pi/Omega) sum_sigma w_sigma |psi><psi| (unnormalized psi).
inline double nl_weight(const HghSpecies& s, int sigma) {
    const NlTerm& t = nl_terms()[sigma];
    const double r = s.rl[t.l];
    if (t.l == 0) return 4 * std::pow(r, 3) * s.B[0];
    if (t.l == 1) return 16.0 / 3.0 * std::pow(r, 5) * s.B[1];
    if (t.w1 < 0) return -32.0 / 45.0 * std::pow(r, 7) * s.B[2];
    return 32.0 / 15.0 * std::pow(r, 7) * s.B[2];
}

// ---- grid sums -----------------------------------------------------------

struct SpeciesSums {
    double S0 = 0;          // sum e^{-G^2 r0^2}
    Vec3 S1{};              // sum G_w^2 e^{-G^2 r1^2}
    double S20 = 0;         // sum G^4 e^{-G^2 r2^2}
    Mat3 S2{};              // sum (G_w G_w')^2 e^{-G^2 r2^2}
    std::array<double, kNumNlTerms> norm{};  // sum of squared amplitudes per term
    std::array<double, kNumNlTerms> c{};     // LCU coefficients
    double shift = 0;       // identity shift per nucleus and electron: -sum c
    double sum_abs_c = 0;   // over all fourteen terms
    double sum_abs_c_paper = 0;  // over the paper's eleven
    double F = 0;           // pessimistic entry bound
    double lam_nu_loc = 0;  // sum_{G0} |gamma|/G^2
    double lam_nu_loc_R = 0;  // sum_{G0} |gamma|/G
};

inline SpeciesSums species_sums(const HghSpecies& s, const crystal::PlaneWaveGrid& grid,
                                const crystal::ReciprocalLattice& rec) {
    SpeciesSums out;
    Accumulator S0, S1[3], S20, S2[3][3];
    // Auxiliary sums for F: e_l = exp(-G^2 r_l^2 / 2).
    Accumulator a0, b0, c0, a1, b1, c1, a2, b2, c2;
    Accumulator lam, lamR;
    const double r0 = s.rl[0], r1 = s.rl[1], r2 = s.rl[2];
    grid.for_each([&](const IVec3& p) {
        const Vec3 G = rec.g(p);
        const double g2 = crystal::dot(G, G), g = std::sqrt(g2);
        const double h0 = std::exp(-g2 * r0 * r0 / 2), h1 = std::exp(-g2 * r1 * r1 / 2),
                     h2 = std::exp(-g2 * r2 * r2 / 2);
        S0 += h0 * h0;
        for (int w = 0; w < 3; ++w) S1[w] += G[w] * G[w] * h1 * h1;
        S20 += g2 * g2 * h2 * h2;
        for (int w = 0; w < 3; ++w)
            for (int v = 0; v < 3; ++v) S2[w][v] += G[w] * G[w] * G[v] * G[v] * h2 * h2;
        a0 += h0;
        b0 += g * h0;
        c0 += g * h0 * h0;
        a1 += g2 * h1;
        b1 += g * h1;
        c1 += g2 * g * h1 * h1;
        a2 += g2 * g * h2;
        b2 += g2 * h2;
        c2 += g2 * g2 * g * h2 * h2;
        if (g2 > 0) {
            const double gm = std::fabs(gamma(s, g));
            lam += gm / g2;
            lamR += gm / g;
        }
    });
    out.S0 = S0.value();
    for (int w = 0; w < 3; ++w) out.S1[w] = S1[w].value();
    out.S20 = S20.value();
    for (int w = 0; w < 3; ++w)
        for (int v = 0; v < 3; ++v) out.S2[w][v] = S2[w][v].value();
    for (int k = 0; k < kNumNlTerms; ++k) {
        const NlTerm& t = nl_terms()[k];
        double n;
        if (t.l == 0) n = out.S0;
        else if (t.l == 1) n = out.S1[t.w1];
        else if (t.w1 < 0) n = out.S20;
        else n = out.S2[t.w1][t.w2];
        out.norm[k] = n;
        const double w = s.B[t.l] == 0.0 ? 0.0 : nl_weight(s, k);
        out.c[k] = -(4 * kPi / rec.omega) * w * n / 2;
    }
    Accumulator shift, abs_all, abs_paper;
    for (int k = 0; k < kNumNlTerms; ++k) {
        shift += -out.c[k];
        abs_all += std::fabs(out.c[k]);
        if (k < kNumPaperNlTerms) abs_paper += std::fabs(out.c[k]);
    }
    out.shift = shift.value();
    out.sum_abs_c = abs_all.value();
    out.sum_abs_c_paper = abs_paper.value();
    out.F = 2 * std::fabs(4 * std::pow(r0, 3) * s.B[0]) * (a0.value() * b0.value() - c0.value()) +
            2 * std::fabs(16.0 / 3.0 * std::pow(r1, 5) * s.B[1]) * (a1.value() * b1.value() - c1.value()) +
            2 * std::fabs(128.0 / 45.0 * std::pow(r2, 7) * s.B[2]) * (a2.value() * b2.value() - c2.value());
    out.lam_nu_loc = lam.value();
    out.lam_nu_loc_R = lamR.value();
    return out;
}

}  // namespace ppqe::hgh
