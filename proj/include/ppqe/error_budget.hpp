#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"
#include "ppqe/material.hpp"
#include "ppqe/prep_model.hpp"

namespace ppqe::budget {

enum Channel { chi, B, NL, R, MV, Mloc, Psi, kNumChannels };

inline const char* channel_name(int c) {
    static const char* names[] = {"chi", "B", "NL", "R", "MV", "Mloc", "Psi"};
    return names[c];
}

struct ErrorBudget {
    double eps_total = 0;
    double eps_QPE = 0;
    std::array<double, kNumChannels> eps{};
};

inline ErrorBudget allocate(double eps_total) {
    if (!(eps_total > 0)) throw InputError("error target must be positive");
    ErrorBudget b;
    b.eps_total = eps_total;
    b.eps_QPE = std::sqrt(0.995) * eps_total;
    b.eps.fill(std::sqrt(0.005) * eps_total / static_cast<double>(kNumChannels));
    return b;
}

// Which non-local decomposition the coefficient sums cover.
enum class NlTermSet { complete, paper };

struct Options {
    int b_r = 8;
    int n_AA = 35;
    int n_b = 50;
    double p_th = 0.75;
    NlTermSet nl_terms = NlTermSet::complete;
};

struct BitWidths {
    std::array<int, kNumChannels> n{};
    int b_r = 0, n_AA = 0, n_b = 0;
    int n_p = 0, n_eta = 0, tau = 0, max_n_t = 0;
    std::vector<int> n_t;

    int n_chi() const { return n[chi]; }
    int n_B() const { return n[B]; }
    int n_NL() const { return n[NL]; }
    int n_R() const { return n[R]; }
    int n_MV() const { return n[MV]; }
    int n_Mloc() const { return n[Mloc]; }
    int n_Psi() const { return n[Psi]; }
};

// Every channel bound has the form K_X / 2^{n_X}; these are the K_X.
struct ChannelConstants {
    std::array<double, kNumChannels> K{};
};

inline bool orthogonal(const crystal::ReciprocalLattice& rec) {
    return rec.ortho_class == crystal::OrthoClass::orthogonal;
}

inline double K_MV(const MaterialSpec& m, const crystal::PlaneWaveGrid& g, const crystal::ReciprocalLattice& rec) {
    const double eta = m.eta;
    const double bracket = 7 * std::ldexp(1.0, g.n_p + 1) - 9.0 * g.n_p - 11 - 3 * std::ldexp(1.0, -g.n_p);
    return 8 * kPi * eta * (eta - 1) * bracket / (rec.omega * rec.b_min * rec.b_min);
}

inline ChannelConstants channel_constants(const MaterialSpec& m, const crystal::PlaneWaveGrid& g,
                                          const crystal::ReciprocalLattice& rec, const prep::SpeciesData& d,
                                          double lambda, const Options& opt) {
    ChannelConstants c;
    const double eta = m.eta;
    const int tau = m.tau();
    const bool paper = opt.nl_terms == NlTermSet::paper;
    c.K[chi] = 4 * kPi * lambda;
    c.K[B] = 4 * kPi * eta * std::ldexp(1.0, 2 * g.n_p - 2) * rec.sum_abs_gram();
    if (orthogonal(rec)) c.K[B] /= 2;

    Accumulator nl, loc_types, r_sum, c_all;
    double max_ratio = 0;
    for (int t = 0; t < m.num_types(); ++t) {
        const auto& s = d.sums[t];
        const double Nt = m.species[t].count;
        const double ps = prep::ps_uniform(m.species[t].count, opt.b_r);
        const double abs_c = paper ? s.sum_abs_c_paper : s.sum_abs_c;
        nl += abs_c * Nt / ps;
        c_all += abs_c * Nt;
        max_ratio = std::max(max_ratio, Nt / ps);
        loc_types += s.lam_nu_loc;
        r_sum += Nt * (s.F + s.lam_nu_loc_R);
    }
    c.K[NL] = 2 * (tau + 4) * kPi * eta * nl.value();
    c.K[R] = 2 * eta * kPi * rec.max_a_norm / rec.omega * r_sum.value();
    c.K[MV] = K_MV(m, g, rec);
    c.K[Mloc] = 8 * kPi * kPi * eta * max_ratio * (3 * g.n_p + tau) * loc_types.value() / rec.omega;
    const int width = orthogonal(rec) ? g.n_p : 2 * g.n_p;
    c.K[Psi] = 18.0 * (width + 4 + tau) * kPi * eta * c_all.value();
    return c;
}

inline double bound(double K, int n) { return std::ldexp(K, -n); }

// Smallest n >= 1 with K / 2^n <= eps.
inline int width_for(double K, double eps) {
    if (!(K > 0) || !std::isfinite(K)) throw InputError("error bound constant must be positive and finite");
    int n = std::max(1, ceil_log2_real(K / eps));
    while (n > 1 && bound(K, n - 1) <= eps) --n;
    while (bound(K, n) > eps) ++n;
    return n;
}

struct Solution {
    ErrorBudget budget;
    BitWidths widths;
    ChannelConstants constants;
    prep::MomentumStatePlan plan;
    prep::LambdaBreakdown lambda;
};

inline Solution solve(const ErrorBudget& bud, const MaterialSpec& m, const crystal::PlaneWaveGrid& g,
                      const crystal::ReciprocalLattice& rec, const prep::SpeciesData& d, const Options& opt) {
    Solution s;
    s.budget = bud;
    auto& w = s.widths;
    w.b_r = opt.b_r;
    w.n_AA = opt.n_AA;
    w.n_b = opt.n_b;
    w.n_p = g.n_p;
    w.n_eta = ceil_log2(static_cast<std::uint64_t>(m.eta));
    w.tau = m.tau();
    w.max_n_t = m.max_n_t();
    for (int t = 0; t < m.num_types(); ++t) w.n_t.push_back(m.n_t(t));

    w.n[MV] = width_for(K_MV(m, g, rec), bud.eps[MV]);
    s.plan = prep::momentum_state_V(g, rec, w.n[MV], opt.p_th);
    s.lambda = prep::lambda_breakdown(m, g, rec, d, s.plan, opt.b_r, opt.nl_terms == NlTermSet::paper);
    s.constants = channel_constants(m, g, rec, d, s.lambda.lambda, opt);
    for (int c = 0; c < kNumChannels; ++c)
        if (c != MV) w.n[c] = width_for(s.constants.K[c], bud.eps[c]);
    return s;
}

struct ChannelCheck {
    std::string name;
    int n = 0;
    double bound = 0;
    double allocation = 0;
    bool within = false;
    bool minimal = false;
};

struct BudgetCheck {
    std::vector<ChannelCheck> channels;
    double lhs = 0;  // eps_QPE^2 + (sum of channel bounds)^2
    double rhs = 0;  // eps_total^2
    bool master_ok = false;
    bool all_within = false;
    bool all_minimal = false;
    std::string violation;  // first failing channel, if any
};

inline BudgetCheck verify(const BitWidths& w, const ErrorBudget& bud, const ChannelConstants& c) {
    BudgetCheck out;
    Accumulator sum;
    out.all_within = out.all_minimal = true;
    for (int k = 0; k < kNumChannels; ++k) {
        ChannelCheck ch;
        ch.name = channel_name(k);
        ch.n = w.n[k];
        ch.bound = bound(c.K[k], w.n[k]);
        ch.allocation = bud.eps[k];
        ch.within = ch.bound <= ch.allocation;
        ch.minimal = w.n[k] == 1 || bound(c.K[k], w.n[k] - 1) > ch.allocation;
        if (!ch.within && out.violation.empty()) out.violation = ch.name + " exceeds its allocation";
        if (!ch.minimal && out.violation.empty()) out.violation = ch.name + " is not minimal";
        out.all_within = out.all_within && ch.within;
        out.all_minimal = out.all_minimal && ch.minimal;
        sum += ch.bound;
        out.channels.push_back(ch);
    }
    out.lhs = bud.eps_QPE * bud.eps_QPE + sum.value() * sum.value();
    out.rhs = bud.eps_total * bud.eps_total;
    out.master_ok = out.lhs <= out.rhs * (1 + 1e-12);
    if (!out.master_ok && out.violation.empty()) out.violation = "master inequality violated";
    return out;
}

}  // namespace ppqe::budget
