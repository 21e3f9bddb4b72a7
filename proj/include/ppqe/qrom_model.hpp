#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppqe/common.hpp"

namespace ppqe::qrom {

enum class Variant { Select, SelSwapDirty };
enum class Mode { cost, depth };

inline std::string to_string(Variant v) { return v == Variant::Select ? "Select" : "SelSwapDirty"; }
inline std::string to_string(Mode m) { return m == Mode::cost ? "cost" : "depth"; }

inline void check_beta(int n, std::int64_t beta) {
    if (n < 0 || n > 60) throw InputError("QROM: address width out of range");
    if (beta < 1 || beta > pow2(n)) throw InputError("QROM: beta must lie in [1, 2^n]");
}

// ceil(log2(beta)), the swap-tree depth.
inline std::int64_t log_beta(std::int64_t beta) { return ceil_log2(static_cast<std::uint64_t>(beta)); }

inline std::int64_t output_cost(Variant v, int n, int b, std::int64_t beta) {
    if (v == Variant::Select) return pow2(n);
    check_beta(n, beta);
    return 3 * std::int64_t{b} * beta + 2 * ceil_div(pow2(n), beta);
}

inline std::int64_t output_depth(Variant v, int n, int b, std::int64_t beta, int kappa) {
    if (v == Variant::Select) return pow2(n);
    check_beta(n, beta);
    return 3 * ceil_div(b, kappa) * log_beta(beta) + 2 * ceil_div(pow2(n), beta);
}

// Algorithm 1 (rotate-and-uncompute) with SelSwapDirty lookups.
inline std::int64_t superposition_cost(int n, int b, std::int64_t beta) {
    check_beta(n, beta);
    return 2 * (3 * std::int64_t{b} * beta * n + 2 * ceil_div(pow2(n + 1) - 1, beta) + 2 * n) +
           std::int64_t{b - 3} * n;
}

inline std::int64_t superposition_depth(int n, int b, std::int64_t beta, int kappa) {
    check_beta(n, beta);
    return 2 * (3 * ceil_div(b, kappa) * log_beta(beta) * n + 2 * ceil_div(pow2(n + 1) - 1, beta) + 2 * n) +
           std::int64_t{b - 3} * n;
}

// Algorithm 1 with Select lookups.
inline std::int64_t select_superposition_cost(int n, int b) { return 2 * (pow2(n + 1) - 1) + std::int64_t{b - 3} * n; }

// Closed-form optima. Cost: sqrt(2(2^{n+1}-1)/(3bn)); depth: 2(2^{n+1}-1) ln2 kappa/(3bn).
inline std::int64_t closed_form_beta(Mode mode, int n, int b, int kappa, std::int64_t n_dirty, std::int64_t n_tof) {
    const double X = static_cast<double>(pow2(n + 1) - 1);
    double v = static_cast<double>(n_dirty) / b;
    if (mode == Mode::cost) {
        v = std::min(v, std::sqrt(2 * X / (3.0 * b * n)));
    } else {
        v = std::min({v, static_cast<double>(n_tof) / kappa, 2 * X * std::log(2.0) * kappa / (3.0 * b * n)});
    }
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(v)));
}

// Smallest beta in [1, beta_max] minimizing f.
inline std::int64_t argmin_beta(const std::function<std::int64_t(std::int64_t)>& f, std::int64_t beta_max) {
    beta_max = std::max<std::int64_t>(1, beta_max);
    std::int64_t best = 1, best_val = f(1);
    for (std::int64_t b = 2; b <= beta_max; ++b) {
        const std::int64_t v = f(b);
        if (v < best_val) {
            best = b;
            best_val = v;
        }
    }
    return best;
}

// Feasibility limits for one QROM. Each unit of beta consumes `dirty_per_beta`
// dirty qubits and `tof_per_beta` simultaneous Toffolis.
struct Limits {
    std::int64_t n_dirty = 0;
    std::int64_t dirty_per_beta = 1;
    std::int64_t n_tof = 0;
    std::int64_t tof_per_beta = 1;
};

inline std::int64_t beta_max(Mode mode, int n, const Limits& lim) {
    std::int64_t m = lim.n_dirty / std::max<std::int64_t>(1, lim.dirty_per_beta);
    if (mode == Mode::depth) m = std::min(m, lim.n_tof / std::max<std::int64_t>(1, lim.tof_per_beta));
    return std::clamp<std::int64_t>(m, 1, pow2(n));
}

// The beta a plan uses. The closed forms are a starting point; the integer
// minimum over the feasible range is never worse.
inline std::int64_t optimal_beta(Mode mode, int n, int b, int kappa, std::int64_t n_dirty, std::int64_t n_tof) {
    Limits lim{n_dirty, b, n_tof, kappa};
    const std::int64_t mx = beta_max(mode, n, lim);
    if (mode == Mode::cost) return argmin_beta([&](std::int64_t be) { return superposition_cost(n, b, be); }, mx);
    return argmin_beta([&](std::int64_t be) { return superposition_depth(n, b, be, kappa); }, mx);
}

struct QromPlan {
    Variant variant = Variant::SelSwapDirty;
    int n = 0;
    int b = 0;
    std::int64_t beta = 1;
    int kappa = 1;
    std::int64_t toffoli_count = 0;
    std::int64_t toffoli_depth = 0;
    std::int64_t clean_qubits = 0;
    std::int64_t dirty_qubits = 0;
    std::int64_t parallel_toffolis = 0;
};

// ---- Algorithm 1 simulator -----------------------------------------------

struct SimulationResult {
    std::vector<double> state;
    double l2_error = 0;
};

// Emulates the binary-tree preparation: at each level the split angle
// arccos(sqrt(P_left/P)) is rounded to a multiple of 2pi/2^b.
inline SimulationResult simulate_algorithm1(const std::vector<double>& target, int b) {
    const std::size_t N = target.size();
    if (N < 2 || (N & (N - 1)) != 0 || N > 256) throw InputError("simulate_algorithm1: size must be 2^n with 1 <= n <= 8");
    double norm2 = 0;
    for (double x : target) {
        if (x < 0) throw InputError("simulate_algorithm1: amplitudes must be non-negative");
        norm2 += x * x;
    }
    if (std::fabs(norm2 - 1) > 1e-9) throw InputError("simulate_algorithm1: target is not normalized");
    const int n = ceil_log2(N);
    const double step = 2 * kPi / std::ldexp(1.0, b);

    // prob[k][j]: probability mass of prefix j at depth k.
    std::vector<std::vector<double>> prob(n + 1);
    prob[n].resize(N);
    for (std::size_t i = 0; i < N; ++i) prob[n][i] = target[i] * target[i];
    for (int k = n - 1; k >= 0; --k) {
        prob[k].resize(std::size_t{1} << k);
        for (std::size_t j = 0; j < prob[k].size(); ++j) prob[k][j] = prob[k + 1][2 * j] + prob[k + 1][2 * j + 1];
    }
    std::vector<double> amp{1.0};
    for (int k = 0; k < n; ++k) {
        std::vector<double> next(amp.size() * 2);
        for (std::size_t j = 0; j < amp.size(); ++j) {
            const double P = prob[k][j];
            const double ratio = P > 0 ? std::clamp(prob[k + 1][2 * j] / P, 0.0, 1.0) : 1.0;
            const double theta = step * std::nearbyint(std::acos(std::sqrt(ratio)) / step);
            next[2 * j] = amp[j] * std::cos(theta);
            next[2 * j + 1] = amp[j] * std::sin(theta);
        }
        amp.swap(next);
    }
    double err2 = 0;
    for (std::size_t i = 0; i < N; ++i) err2 += (amp[i] - target[i]) * (amp[i] - target[i]);
    return {amp, std::sqrt(err2)};
}

inline double algorithm1_error_bound(int n, int b) { return std::ldexp(kPi * n, -b); }

}  // namespace ppqe::qrom
