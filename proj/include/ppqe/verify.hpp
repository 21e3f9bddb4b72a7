#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ppqe/hgh.hpp"
#include "ppqe/lcu_oracle.hpp"
#include "ppqe/qrom_model.hpp"
#include "ppqe/quadrature.hpp"

// Property suites behind the `verify` command.
namespace ppqe::verify {

struct Check {
    std::string name;
    bool passed = false;
    double value = 0;  // measured error or margin
    double limit = 0;
};

struct Suite {
    std::string name;
    std::vector<Check> checks;
    double seconds = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& c : checks) n += !c.passed;
        return n;
    }
};

struct Options {
    std::vector<std::int64_t> grids{27};
    int flip_nl_sigma = -1;  // mutation hook for the U_NL suite
    std::uint64_t seed = 20240607;
};

namespace detail {
template <class F>
Suite timed(std::string name, F&& body) {
    Suite s;
    s.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    body(s);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}
}  // namespace detail

inline constexpr double kEntryTol = 1e-9;
inline constexpr double kHermitianTol = 1e-10;

inline Suite lcu_suite(const std::vector<hgh::HghSpecies>& table, const Options& opt) {
    return detail::timed("lcu_equivalence", [&](Suite& s) {
        using oracle::Kind;
        for (std::int64_t N : opt.grids)
            for (const auto& cell : oracle::standard_cells(table, N))
                for (Kind k : {Kind::T, Kind::V, Kind::Uloc, Kind::UNL}) {
                    const auto r = oracle::compare(k, cell, k == Kind::UNL ? opt.flip_nl_sigma : -1);
                    const std::string tag = oracle::to_string(k) + " " + cell.name + " N=" + std::to_string(N);
                    s.checks.push_back({tag + " entrywise", r.rel_diff <= kEntryTol, r.rel_diff, kEntryTol});
                    const double herm = std::max(r.hermitian_dense, r.hermitian_lcu);
                    s.checks.push_back({tag + " hermitian", herm <= kHermitianTol, herm, kHermitianTol});
                    s.checks.push_back({tag + " one-norm >= spectral norm", r.one_norm >= r.spectral_norm * (1 - 1e-12),
                                        r.one_norm - r.spectral_norm, 0.0});
                }
    });
}

inline constexpr int kQuadraturePoints = 50;
inline constexpr double kQuadratureTol = 1e-8;

// Momenta span [1e-3, 5/r]: beyond that the Gaussian factor is below e^-12.5.
inline Suite quadrature_suite(const std::vector<hgh::HghSpecies>& table) {
    return detail::timed("closed_form_quadrature", [&](Suite& s) {
        for (const auto& sp : table) {
            for (int l = 0; l < 3; ++l) {
                if (sp.B[l] == 0.0) continue;
                double worst = 0;
                for (double G : quad::log_spaced(1e-3, 5 / sp.rl[l], kQuadraturePoints))
                    worst = std::max(worst, quad::rel_diff(quad::projector_overlap(sp, l, G), hgh::projector_overlap(sp, l, G)));
                s.checks.push_back({sp.symbol + " <p|1>_" + std::to_string(l), worst <= kQuadratureTol, worst, kQuadratureTol});
            }
            double worst = 0;
            for (double G : quad::log_spaced(1e-3, 5 / sp.r_loc, kQuadraturePoints))
                worst = std::max(worst, quad::rel_diff(quad::local_bracket(sp, G), hgh::local_radial(sp, G)));
            s.checks.push_back({sp.symbol + " u_loc", worst <= kQuadratureTol, worst, kQuadratureTol});
        }
    });
}

inline constexpr int kTargetsPerSetting = 100;

// Random non-negative normalized targets; the preparation error must respect pi n 2^-b.
inline Suite algorithm1_suite(const Options& opt) {
    return detail::timed("qrom_error_lemma", [&](Suite& s) {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int n = 2; n <= 6; ++n)
            for (int b : {4, 8, 12}) {
                const double bound = qrom::algorithm1_error_bound(n, b);
                double worst = 0;
                for (int t = 0; t < kTargetsPerSetting; ++t) {
                    std::vector<double> x(std::size_t{1} << n);
                    double n2 = 0;
                    for (auto& v : x) {
                        v = u(rng);
                        n2 += v * v;
                    }
                    for (auto& v : x) v /= std::sqrt(n2);
                    worst = std::max(worst, qrom::simulate_algorithm1(x, b).l2_error);
                }
                s.checks.push_back({"n=" + std::to_string(n) + " b=" + std::to_string(b), worst <= bound, worst, bound});
            }
    });
}

inline std::vector<Suite> run_all(const std::vector<hgh::HghSpecies>& table, const Options& opt) {
    return {lcu_suite(table, opt), quadrature_suite(table), algorithm1_suite(opt)};
}

inline bool all_passed(const std::vector<Suite>& suites) {
    for (const auto& s : suites)
        if (!s.passed()) return false;
    return true;
}

}  // namespace ppqe::verify
