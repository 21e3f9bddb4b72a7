#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppqe/common.hpp"
#include "ppqe/crystal.hpp"
#include "ppqe/error_budget.hpp"
#include "ppqe/material.hpp"
#include "ppqe/prep_model.hpp"
#include "ppqe/qrom_model.hpp"

namespace ppqe::costing {

using qrom::Mode;

struct RunConfig {
    std::int64_t N = 0;
    double eps_total = 0;  // Hartree
    double p_th = 0.75;
    std::int64_t n_tof = 500;
    std::int64_t n_dirty = 0;
    Mode optimize = Mode::cost;
    int b_r = 8;
    int n_AA = 35;
    int n_b = 50;
    int kappa = 1;
    budget::NlTermSet nl_terms = budget::NlTermSet::complete;
};

enum class Group { prep, sel, reflection };

inline std::string to_string(Group g) {
    switch (g) {
        case Group::prep: return "PREP";
        case Group::sel: return "SEL";
        case Group::reflection: return "REFLECTION";
    }
    return "?";
}

// One SelSwapDirty lookup inside a row, with the resources it was planned for.
struct QromUse {
    std::string name;
    int n = 0;  // address bits
    int b = 0;  // output bits
    std::int64_t beta = 1;
    int kappa = 1;
    std::int64_t dirty_qubits = 0;       // dirty qubits in use at once
    std::int64_t parallel_toffolis = 0;  // simultaneous Toffolis
    std::int64_t beta_limit = 1;         // largest feasible beta
};

struct CostRow {
    Group group = Group::prep;
    std::string label;
    std::int64_t toffoli = 0;
    std::int64_t depth = 0;
    std::vector<QromUse> qroms;
};

struct Totals {
    std::int64_t prep = 0, sel = 0, reflection = 0, per_step = 0;
};

struct QubitReport {
    std::int64_t system = 0;
    std::int64_t qpe_control = 0;
    std::int64_t phase_gradient = 0;
    std::int64_t n_clean = 0;       // persistent clean qubits, system included
    std::int64_t n_clean_prep = 0;  // PREP temporaries
    std::int64_t n_tmp_H = 0;
    std::int64_t n_tmp = 0;  // temporary clean qubits
    std::int64_t clean_total = 0;
    std::int64_t dirty_max = 0;
    std::int64_t grand_total = 0;
};

struct CostReport {
    RunConfig config;
    crystal::PlaneWaveGrid grid;
    crystal::ReciprocalLattice rec;
    budget::Solution solution;
    std::vector<CostRow> rows;
    Totals cost, depth;
    std::int64_t iterations = 0;
    std::int64_t total_toffoli = 0;
    std::int64_t total_depth = 0;
    QubitReport qubits;
    std::vector<std::string> warnings;
};

// Interpretation switches; defaults are the shipped behaviour.
struct ModelOptions {
    bool unary_electron_registers = true;  // i, j registers hold eta qubits each
    bool double_prep = true;               // per step = 2 PREP + SEL + reflection
};

inline bool is_orthogonal(const crystal::ReciprocalLattice& rec) {
    return rec.ortho_class == crystal::OrthoClass::orthogonal;
}

// ---- row building blocks -------------------------------------------------

struct BetaRule {
    std::int64_t dirty_per_beta_cost = 1;   // sequential use in cost mode
    std::int64_t dirty_per_beta_depth = 1;  // parallel use in depth mode
    std::int64_t tof_per_beta = 1;
};

// Pick beta for one lookup: minimize the count in cost mode, the depth in
// depth mode, over the feasible range.
inline std::int64_t choose_beta(Mode mode, int address_bits, const RunConfig& cfg, const BetaRule& rule,
                                const std::function<std::int64_t(std::int64_t)>& cost,
                                const std::function<std::int64_t(std::int64_t)>& depth, std::int64_t* limit_out) {
    qrom::Limits lim;
    lim.n_dirty = cfg.n_dirty;
    lim.n_tof = cfg.n_tof;
    lim.tof_per_beta = rule.tof_per_beta;
    lim.dirty_per_beta = mode == Mode::cost ? rule.dirty_per_beta_cost : rule.dirty_per_beta_depth;
    const std::int64_t mx = qrom::beta_max(mode, address_bits, lim);
    if (limit_out) *limit_out = mx;
    return qrom::argmin_beta(mode == Mode::cost ? cost : depth, mx);
}

inline QromUse make_use(const std::string& name, int n, int b, std::int64_t beta, int kappa, Mode mode,
                        const BetaRule& rule, std::int64_t limit) {
    QromUse u;
    u.name = name;
    u.n = n;
    u.b = b;
    u.beta = beta;
    u.kappa = kappa;
    u.beta_limit = limit;
    u.dirty_qubits = beta * (mode == Mode::cost ? rule.dirty_per_beta_cost : rule.dirty_per_beta_depth);
    u.parallel_toffolis = beta * (mode == Mode::cost ? kappa : rule.tof_per_beta);
    return u;
}

// Gaussian-state lookup of the Psi reflections: Algorithm 1 on `width` momentum
// bits behind `nq - width` bits fixed by PREP.
inline std::int64_t q_psi(int nq, int n_p, int width, int n_psi, std::int64_t beta) {
    const std::int64_t X = pow2(nq + 1) - pow2(nq - n_p);
    return 2 * (2 * ceil_div(X, beta) + 3 * beta * n_psi * width + 2 * width) + std::int64_t{n_psi - 3} * width;
}

inline std::int64_t q_psi_depth(int nq, int n_p, int width, int n_psi, std::int64_t beta, int kappa) {
    const std::int64_t X = pow2(nq + 1) - pow2(nq - n_p);
    return 2 * (2 * ceil_div(X, beta) + 3 * qrom::log_beta(beta) * ceil_div(n_psi, kappa) * width + 2 * width) +
           std::int64_t{n_psi - 3} * width;
}

// ---- PREP ------------------------------------------------------------------

inline std::vector<CostRow> prep_rows(const RunConfig& cfg, Mode mode, const budget::BitWidths& w,
                                      const MaterialSpec& m, const prep::MomentumStatePlan& plan) {
    std::vector<CostRow> rows;
    auto fixed = [&](const std::string& label, std::int64_t v) {
        rows.push_back({Group::prep, label, v, v, {}});
    };
    const int n_p = w.n_p, tau = w.tau, mnt = w.max_n_t, k = cfg.kappa;

    fixed("register X superposition", 2 * qrom::select_superposition_cost(2, w.n_chi()));
    fixed("c,d,e electron superpositions", 14 * w.n_eta + 8 * w.b_r - 36);
    fixed("f,g,h registers for T", 2 * (qrom::select_superposition_cost(4, w.n_B()) + pow2(4) + (n_p - 2)));
    fixed("R output QROMs", 2 * (2 * pow2(tau + mnt + 1)));
    fixed("nuclei uniform superpositions",
          2 * (2 * (3 * mnt - 3 * v2(m.max_count()) + 2 * w.b_r - 9 + 2 * pow2(tau))));

    {  // (k_NL, k'_NL, s_NL)
        const int n = tau + 4, b = w.n_NL();
        BetaRule rule{b, b, k};
        auto c = [&](std::int64_t be) { return 2 * (qrom::superposition_cost(n, b, be) + pow2(tau + 2)) + 12; };
        auto d = [&](std::int64_t be) {
            return 2 * (2 * (2 * ceil_div(pow2(n + 1) - 1, be) + 3 * ceil_div(b, k) * n * qrom::log_beta(be) + 2 * n) +
                        std::int64_t{b - 3} * n + pow2(tau + 2)) + 12;
        };
        std::int64_t lim = 1;
        const auto be = choose_beta(mode, n, cfg, rule, c, d, &lim);
        rows.push_back({Group::prep, "k_NL superposition QROM", c(be), d(be), {make_use("beta_NL", n, b, be, k, mode, rule, lim)}});
    }
    {  // V momentum state via inequality test
        const int n = 3 * n_p, b = w.n_MV();
        const std::int64_t rounds = 2 * plan.a_V + 1;
        const std::int64_t rest = 8 * (n_p - 1) + 6 * n_p + 2 + b;
        BetaRule rule{b, b, k};
        auto c = [&](std::int64_t be) { return rounds * (2 * qrom::output_cost(qrom::Variant::SelSwapDirty, n, b, be) + rest); };
        auto d = [&](std::int64_t be) { return rounds * (2 * qrom::output_depth(qrom::Variant::SelSwapDirty, n, b, be, k) + rest); };
        std::int64_t lim = 1;
        const auto be = choose_beta(mode, n, cfg, rule, c, d, &lim);
        rows.push_back({Group::prep, "V momentum state (inequality test)", c(be), d(be), {make_use("beta_V", n, b, be, k, mode, rule, lim)}});
    }
    {  // loc momentum state
        const int n = 3 * n_p + tau, b = w.n_Mloc();
        const std::int64_t X = pow2(3 * n_p + tau + 1) - 1;
        BetaRule rule{b + 1, b + 1, k};
        auto c = [&](std::int64_t be) {
            return 2 * (2 * (2 * ceil_div(X, be) + 3 * be * b * (3 * n_p - 1) + 3 * be * (b + 1) + 2 * (3 * n_p)) +
                        std::int64_t{b - 3} * (3 * n_p + tau));
        };
        auto d = [&](std::int64_t be) {
            const std::int64_t lb = qrom::log_beta(be);
            return 2 * (2 * (2 * ceil_div(X, be) + 3 * lb * ceil_div(b, k) * (3 * n_p - 1) + 3 * lb * ceil_div(b + 1, k) +
                             2 * (3 * n_p)) +
                        std::int64_t{b - 3} * (3 * n_p + tau));
        };
        std::int64_t lim = 1;
        const auto be = choose_beta(mode, n, cfg, rule, c, d, &lim);
        rows.push_back({Group::prep, "loc momentum state QROM", c(be), d(be), {make_use("beta_loc", n, b + 1, be, k, mode, rule, lim)}});
    }
    fixed("selection register flags", 6 + 3 + 3 + tau + 9);
    fixed("NL,c register", 4);
    return rows;
}

// ---- SEL -------------------------------------------------------------------

inline std::vector<CostRow> sel_rows(const RunConfig& cfg, Mode mode, const budget::BitWidths& w,
                                     const MaterialSpec& m, bool orthogonal) {
    std::vector<CostRow> rows;
    auto fixed = [&](const std::string& label, std::int64_t v) { rows.push_back({Group::sel, label, v, v, {}}); };
    const int n_p = w.n_p, tau = w.tau, k = cfg.kappa, np = w.n_Psi();
    const std::int64_t eta = m.eta;

    fixed("controlled swaps of p and q", 12 * eta * n_p + 4 * eta - 8);
    fixed("SEL for T", 5 * (n_p - 1) + 2);
    fixed("add/subtract nu (loc, V)", 48 * std::int64_t{n_p});
    fixed("phase for U_loc", 6 * std::int64_t{n_p} * w.n_R());
    fixed("phase for U_NL", 12 * std::int64_t{n_p} * w.n_R());

    const int l_ortho = prep::exact_aa_plan(1.0 / 8, cfg.n_AA).l;  // 2
    const int l_non = prep::exact_aa_plan(1.0 / 4, cfg.n_AA).l;    // 1
    const std::int64_t aa_ortho = 2 * l_ortho + 1, aa_non = 2 * l_non + 1;

    if (orthogonal) {
        const int nq = n_p + tau + 4;
        BetaRule rule{np, 3 * std::int64_t{np}, 3 * std::int64_t{k}};
        auto c = [&](std::int64_t be) { return 6 * q_psi(nq, n_p, n_p, np, be) + 3 * n_p - 1; };
        auto d = [&](std::int64_t be) { return 2 * q_psi_depth(nq, n_p, n_p, np, be, k) + 3 * n_p - 1; };
        std::int64_t lim = 1;
        const auto be = choose_beta(mode, nq, cfg, rule, c, d, &lim);
        rows.push_back({Group::sel, "reflection on Psi_{I,sigma}", c(be), d(be), {make_use("beta_Psi", nq, np, be, k, mode, rule, lim)}});

        const int nq2 = n_p + tau + 2;
        const std::int64_t qi = 2 * (pow2(3 + 1) - 1) + 3 * (cfg.n_b - 3);
        auto c2 = [&](std::int64_t be) { return aa_ortho * 2 * (qi + 3 * q_psi(nq2, n_p, n_p, np, be) + cfg.n_AA); };
        auto d2 = [&](std::int64_t be) { return aa_ortho * 2 * (qi + q_psi_depth(nq2, n_p, n_p, np, be, k) + cfg.n_AA); };
        const auto be2 = choose_beta(mode, nq2, cfg, rule, c2, d2, &lim);
        rows.push_back({Group::sel, "reflection on Psi_{I,2,0}", c2(be2), d2(be2), {make_use("beta_Psi'", nq2, np, be2, k, mode, rule, lim)}});
    } else {
        // One 1D and one 2D Gaussian lookup, run side by side in depth mode.
        BetaRule rule{np, 2 * std::int64_t{np}, 2 * std::int64_t{k}};
        auto pick_pair = [&](int nq1, int nq2, std::int64_t extra_cost, std::int64_t extra_depth, std::int64_t factor,
                             bool include_1d_depth, const std::string& label, const std::string& n1, const std::string& n2) {
            auto c1 = [&](std::int64_t be) { return q_psi(nq1, n_p, n_p, np, be); };
            auto d1 = [&](std::int64_t be) { return q_psi_depth(nq1, n_p, n_p, np, be, k); };
            auto c2 = [&](std::int64_t be) { return q_psi(nq2, n_p, 2 * n_p, np, be); };
            auto d2 = [&](std::int64_t be) { return q_psi_depth(nq2, n_p, 2 * n_p, np, be, k); };
            std::int64_t lim1 = 1, lim2 = 1;
            const auto b1 = choose_beta(mode, nq1, cfg, rule, c1, d1, &lim1);
            const auto b2 = choose_beta(mode, nq2, cfg, rule, c2, d2, &lim2);
            const std::int64_t cost = factor * (c1(b1) + c2(b2) + extra_cost);
            const std::int64_t dep =
                factor * ((include_1d_depth ? std::max(d1(b1), d2(b2)) : d2(b2)) + extra_depth);
            rows.push_back({Group::sel, label, cost, dep,
                            {make_use(n1, nq1, np, b1, k, mode, rule, lim1), make_use(n2, nq2, np, b2, k, mode, rule, lim2)}});
        };
        // U_{I,sigma}: compute and uncompute, plus the reflection itself.
        pick_pair(n_p + tau + 4, 2 * n_p + tau + 4, 0, 0, 2, true, "reflection on Psi_{I,sigma}", "beta_Psi_1D", "beta_Psi_2D");
        rows.back().toffoli += 3 * n_p - 1;
        rows.back().depth += 3 * n_p - 1;
        const std::int64_t qi = 2 * (pow2(2 + 1) - 1) + 3 * (cfg.n_b - 3);
        pick_pair(n_p + tau + 2, 2 * n_p + tau + 2, qi + 2, qi + 2, aa_non * 2, false, "reflection on Psi_{I,2,0}",
                  "beta_Psi'_1D", "beta_Psi'_2D");
    }
    return rows;
}

// `electron_width` is the width of each of the i, j registers: n_eta in binary, eta in unary.
inline std::int64_t reflection_count(const budget::BitWidths& w, bool orthogonal, std::int64_t electron_width) {
    return 2 * electron_width + 9 * w.n_p + w.n_MV() + 35 + 2 * (w.tau + w.max_n_t) - (orthogonal ? 0 : 3);
}

// Independent count of the reflected registers, one term per register group.
inline std::int64_t reflection_bullet_audit(const budget::BitWidths& w, bool orthogonal, std::int64_t electron_width) {
    const std::int64_t n_p = w.n_p, tau = w.tau, mnt = w.max_n_t;
    std::int64_t s = 0;
    s += 2;                                  // operator selection
    s += 2 * n_p;                            // r and s
    s += 5;                                  // register f
    s += 2 * electron_width + 2;             // d, e and their rotated qubits
    s += 3 * (n_p + 1) + n_p + w.n_MV();     // V momentum state
    s += 3 * n_p + 1 + (tau + mnt + 2);      // loc momentum state
    s += 9;                                  // overflow qubits
    s += tau + mnt + 5 + 1;                  // k_NL, k'_NL, s_NL and rotation
    s += orthogonal ? 2 : 0;                 // amplitude-amplification trick
    s += orthogonal ? 3 : 2;                 // one-hot register
    return s;
}

inline CostRow reflection_row(const budget::BitWidths& w, bool orthogonal, std::int64_t electron_width) {
    const auto v = reflection_count(w, orthogonal, electron_width);
    return {Group::reflection, "reflection on preparation qubits", v, v, {}};
}

inline std::int64_t electron_register_width(const MaterialSpec& m, const budget::BitWidths& w, const ModelOptions& opt) {
    return opt.unary_electron_registers ? m.eta : w.n_eta;
}

// ---- qubits ----------------------------------------------------------------

inline QubitReport qubit_report(const MaterialSpec& m, const budget::BitWidths& w, double lambda, double eps_QPE,
                                bool orthogonal, const std::vector<CostRow>& rows, const ModelOptions& opt) {
    QubitReport q;
    const std::int64_t n_p = w.n_p, tau = w.tau, mnt = w.max_n_t, eta = m.eta;
    q.system = 3 * eta * n_p;
    q.qpe_control = ceil_log2(static_cast<std::uint64_t>(std::ceil(kPi * lambda / (2 * eps_QPE))));
    q.phase_gradient = std::max({w.n_R() + 1, w.n_chi(), orthogonal ? w.n_AA : 0, w.n_B(), w.n_NL(), w.n_Mloc(), w.n_b,
                                 w.n_Psi()});
    std::int64_t c = q.system + q.qpe_control + q.phase_gradient;
    c += 1 + 2 + 4;                                                  // T state, X, operator flags
    c += 2 * electron_register_width(m, w, opt) + 5;                 // i, j superpositions
    c += 8;                                                          // register f with flags
    c += 2 * n_p;                                                    // r, s in unary
    c += 3 * std::int64_t{w.n_R()};                                  // nuclear position register
    c += tau + mnt;                                                  // k'_loc
    c += tau + mnt + 5;                                              // k_NL, k'_NL, s_NL
    c += 4;                                                          // nuclei superposition rotations and flags
    c += 4;                                                          // eligibility flags for k_NL
    c += 2;                                                          // sigma-group type bits
    c += 3 * (n_p + 1) + n_p + w.n_MV() + (3 * n_p + 2) + (2 * n_p + 1) + w.n_MV() + 1 + 2;  // V momentum state
    c += 3 * n_p + tau + mnt + 1;                                    // loc momentum state
    c += 3 + 3 + 3 + tau + 9 + 4;                                    // selection flags and NL,c
    c += 9;                                                          // overflow
    c += 2;                                                          // add/subtract control
    c += orthogonal ? 3 : 2;                                         // one-hot register
    c += orthogonal ? 2 : 0;                                         // amplitude-amplification trick
    q.n_clean = c;

    q.n_clean_prep = std::max({std::int64_t{5}, 2 * (tau + mnt), w.n_NL() + tau + 4, std::int64_t{4}, tau + 2,
                               w.n_MV() + 3 * n_p, (w.n_Mloc() + 1) + (3 * n_p + tau) + w.n_Mloc()});
    const std::int64_t psi1 = orthogonal ? 3 * w.n_Psi() + 3 * (n_p + tau + 4) : 2 * w.n_Psi() + 3 * n_p + 2 * tau + 8;
    const std::int64_t psi2 =
        orthogonal ? 3 * w.n_Psi() + 3 * (n_p + tau + 2) + 3 : 2 * w.n_Psi() + 3 * n_p + 2 * tau + 4 + 2;
    q.n_tmp_H = std::max(5 * n_p + 1, 5 * std::int64_t{w.n_R()} - 4) +
                std::max({q.n_clean_prep, 3 * n_p - 1, psi1, psi2});
    q.n_tmp = std::max(q.n_tmp_H, reflection_count(w, orthogonal, electron_register_width(m, w, opt)));
    q.clean_total = q.n_clean + q.n_tmp;
    for (const auto& r : rows)
        for (const auto& u : r.qroms) q.dirty_max = std::max(q.dirty_max, u.dirty_qubits);
    q.grand_total = std::max(q.dirty_max, q.clean_total);
    return q;
}

// ---- orchestration ---------------------------------------------------------

inline Totals sum_rows(const std::vector<CostRow>& rows, bool depth, const ModelOptions& opt) {
    Totals t;
    for (const auto& r : rows) {
        const std::int64_t v = depth ? r.depth : r.toffoli;
        if (r.group == Group::prep) t.prep += v;
        if (r.group == Group::sel) t.sel += v;
        if (r.group == Group::reflection) t.reflection += v;
    }
    t.per_step = (opt.double_prep ? 2 : 1) * t.prep + t.sel + t.reflection;
    return t;
}

inline std::int64_t qpe_iterations(double lambda, double eps_QPE) {
    return static_cast<std::int64_t>(std::ceil(kPi * lambda / eps_QPE));
}

inline CostReport total_report(const RunConfig& cfg, const MaterialSpec& m, const ModelOptions& opt = {}) {
    if (cfg.n_dirty < 0) throw InputError("n_dirty must be non-negative");
    if (cfg.n_tof < 1) throw InputError("n_tof must be positive");
    if (cfg.kappa < 1) throw InputError("kappa must be positive");
    if (cfg.b_r < 3) throw InputError("b_r must be at least 3");
    if (cfg.n_b < 3 || cfg.n_AA < 3) throw InputError("n_b and n_AA must be at least 3");
    CostReport r;
    r.config = cfg;
    r.grid = crystal::build_grid(cfg.N);
    r.rec = crystal::build_reciprocal(m.lattice);
    if (r.rec.ortho_class == crystal::OrthoClass::general)
        r.warnings.push_back("general lattice: costed with the partially orthogonal formulas");
    for (const auto& sc : m.species)
        if (sc.species.has_higher_local_terms())
            r.warnings.push_back("species " + sc.species.symbol + " has C3/C4 terms that gamma truncates");
    const auto data = prep::compute_species_data(m, r.grid, r.rec);
    budget::Options bo;
    bo.b_r = cfg.b_r;
    bo.n_AA = cfg.n_AA;
    bo.n_b = cfg.n_b;
    bo.p_th = cfg.p_th;
    bo.nl_terms = cfg.nl_terms;
    r.solution = budget::solve(budget::allocate(cfg.eps_total), m, r.grid, r.rec, data, bo);
    if (r.solution.plan.P_amp < cfg.p_th)
        r.warnings.push_back("amplitude amplification peaked below p_th; using the peak");

    const bool ortho = is_orthogonal(r.rec);
    const auto& w = r.solution.widths;
    r.rows = prep_rows(cfg, cfg.optimize, w, m, r.solution.plan);
    auto sel = sel_rows(cfg, cfg.optimize, w, m, ortho);
    r.rows.insert(r.rows.end(), sel.begin(), sel.end());
    r.rows.push_back(reflection_row(w, ortho, electron_register_width(m, w, opt)));

    r.cost = sum_rows(r.rows, false, opt);
    r.depth = sum_rows(r.rows, true, opt);
    r.iterations = qpe_iterations(r.solution.lambda.lambda, r.solution.budget.eps_QPE);
    r.total_toffoli = r.iterations * r.cost.per_step;
    r.total_depth = r.iterations * r.depth.per_step;
    r.qubits = qubit_report(m, w, r.solution.lambda.lambda, r.solution.budget.eps_QPE, ortho, r.rows, opt);
    return r;
}

}  // namespace ppqe::costing
