#pragma once

#include <cmath>
#include <vector>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"
#include "ppqe/hgh.hpp"
#include "ppqe/material.hpp"

namespace ppqe::prep {

// Success probability of a uniform superposition over n states built with one
// round of amplitude amplification and a b_r-bit rotation.
inline double ps_uniform(std::int64_t n, int b_r) {
    if (n < 1) throw InputError("ps_uniform: n must be positive");
    const int k = ceil_log2(static_cast<std::uint64_t>(n));
    if (pow2(k) == n) return 1.0;
    const double c = static_cast<double>(n) / static_cast<double>(pow2(k));
    const double d = 2 * kPi / std::ldexp(1.0, b_r);
    const double theta = d * std::nearbyint(std::asin(std::sqrt(1 / (4 * c))) / d);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double t = 1 + (2 - 4 * c) * s2;
    const double s2t = std::sin(2 * theta);
    return c * (t * t + s2t * s2t);
}

inline constexpr int kMaxAmplificationRounds = 29;

struct Amplification {
    int rounds = 0;
    double p_amp = 0;
};

// Fewest rounds a with sin^2((2a+1) asin sqrt(p)) >= p_th. If the sine peak is
// reached first, the rounds at the peak are used and p_amp may stay below p_th.
inline Amplification amplify(double p, double p_th) {
    if (!(p > 0 && p <= 1)) throw InputError("amplify: probability must be in (0, 1]");
    const double th = std::asin(std::sqrt(p));
    auto val = [&](int a) {
        const double s = std::sin((2 * a + 1) * th);
        return s * s;
    };
    for (int a = 0; a <= kMaxAmplificationRounds; ++a) {
        if (val(a) >= p_th) return {a, val(a)};
        if ((2 * a + 1) * th >= kPi / 2) {
            const int best = (a > 0 && val(a - 1) > val(a)) ? a - 1 : a;
            return {best, val(best)};
        }
    }
    throw InfeasibleError("amplitude amplification: threshold unreachable within " +
                          std::to_string(kMaxAmplificationRounds) + " rounds");
}

struct MomentumStatePlan {
    int n_MV = 0;
    double M_V = 0;
    double lambda_nu_V = 0;
    double P_nu_V = 0;
    int a_V = 0;
    double P_amp = 0;
    double p_th = 0;
};

// sum over shells of ceil(M (2^{mu-2} b_min / G)^2) / (M (2^{mu-2} b_min)^2).
inline double lambda_nu_V(const crystal::PlaneWaveGrid& grid, const crystal::ReciprocalLattice& rec, int n_MV) {
    const double M = std::ldexp(1.0, n_MV);
    const int m = (1 << grid.n_p) - 1;
    Accumulator acc;
    for (int x = -m; x <= m; ++x)
        for (int y = -m; y <= m; ++y)
            for (int z = -m; z <= m; ++z) {
                if (!x && !y && !z) continue;
                const crystal::IVec3 nu{x, y, z};
                const int mu = *crystal::shell_of(nu, grid);
                const double s = std::ldexp(rec.b_min, mu - 2);
                const double a = std::ceil(M * s * s / rec.g2(nu));
                acc += a / (M * s * s);
            }
    return acc.value();
}

inline MomentumStatePlan momentum_state_V(const crystal::PlaneWaveGrid& grid, const crystal::ReciprocalLattice& rec,
                                          int n_MV, double p_th) {
    if (!(p_th > 0 && p_th < 1)) throw InputError("p_th must lie in (0, 1)");
    MomentumStatePlan plan;
    plan.n_MV = n_MV;
    plan.M_V = std::ldexp(1.0, n_MV);
    plan.p_th = p_th;
    plan.lambda_nu_V = lambda_nu_V(grid, rec, n_MV);
    plan.P_nu_V = plan.lambda_nu_V * rec.b_min * rec.b_min / std::ldexp(1.0, grid.n_p + 6);
    const auto amp = amplify(plan.P_nu_V, p_th);
    plan.a_V = amp.rounds;
    plan.P_amp = amp.p_amp;
    return plan;
}

struct LambdaBreakdown {
    double lambda_T = 0, lambda_V = 0, lambda_loc = 0, lambda_NL = 0, lambda = 0;
    double ps_eta = 0;
    std::vector<double> ps_nt;  // Ps(N_t, b_r) per species
};

struct SpeciesData {
    std::vector<hgh::SpeciesSums> sums;  // one per species, material order
};

inline SpeciesData compute_species_data(const MaterialSpec& m, const crystal::PlaneWaveGrid& grid,
                                        const crystal::ReciprocalLattice& rec) {
    SpeciesData d;
    for (const auto& sc : m.species) d.sums.push_back(hgh::species_sums(sc.species, grid, rec));
    return d;
}

// Sum over nuclei and non-local terms of |c|. `paper_terms` restricts to the
// eleven terms of the published decomposition.
inline double sum_abs_c_total(const MaterialSpec& m, const SpeciesData& d, bool paper_terms = false) {
    Accumulator a;
    for (int t = 0; t < m.num_types(); ++t)
        a += m.species[t].count * (paper_terms ? d.sums[t].sum_abs_c_paper : d.sums[t].sum_abs_c);
    return a.value();
}

inline double lambda_nu_loc_total(const MaterialSpec& m, const SpeciesData& d) {
    Accumulator a;
    for (int t = 0; t < m.num_types(); ++t) a += m.species[t].count * d.sums[t].lam_nu_loc;
    return a.value();
}

inline LambdaBreakdown lambda_breakdown(const MaterialSpec& m, const crystal::PlaneWaveGrid& grid,
                                        const crystal::ReciprocalLattice& rec, const SpeciesData& d,
                                        const MomentumStatePlan& plan, int b_r, bool paper_terms = false) {
    LambdaBreakdown lb;
    const double eta = m.eta;
    lb.ps_eta = ps_uniform(m.eta, b_r);
    const double ps2 = lb.ps_eta * lb.ps_eta;
    for (const auto& sc : m.species) lb.ps_nt.push_back(ps_uniform(sc.count, b_r));
    lb.lambda_T = eta * std::ldexp(1.0, 2 * grid.n_p - 3) * rec.sum_abs_gram() / ps2;
    if (rec.ortho_class == crystal::OrthoClass::orthogonal) lb.lambda_T /= 2;
    lb.lambda_NL = eta * sum_abs_c_total(m, d, paper_terms) / ps2;
    lb.lambda_V = 2 * kPi * eta * (eta - 1) * plan.lambda_nu_V / (rec.omega * plan.P_amp * ps2);
    lb.lambda_loc = 4 * kPi * eta * lambda_nu_loc_total(m, d) / (rec.omega * ps2);
    lb.lambda = lb.lambda_T + lb.lambda_loc + lb.lambda_NL + lb.lambda_V;
    return lb;
}

struct ExactAAPlan {
    double p = 0;
    int l = 0;
    double a = 0;
    int n_AA = 0;
    std::int64_t toffoli = 0;
};

// Exact amplitude amplification: damp the amplitude by a so that l rounds land
// exactly on success.
inline ExactAAPlan exact_aa_plan(double p, int n_AA) {
    if (!(p > 0 && p <= 1)) throw InputError("exact_aa_plan: p must be in (0, 1]");
    ExactAAPlan plan;
    plan.p = p;
    plan.n_AA = n_AA;
    for (int l = 0;; ++l) {
        const double s = std::sin(kPi / (2 * (2 * l + 1)));
        if (p >= s * s * (1 - 1e-12)) {
            plan.l = l;
            plan.a = std::min(1.0, std::sqrt(s * s / p));
            break;
        }
    }
    plan.toffoli = 1 + (n_AA - 3);
    return plan;
}

}  // namespace ppqe::prep
