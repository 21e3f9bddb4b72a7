#pragma once

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ppqe/common.hpp"
#include "ppqe/hgh.hpp"

// Numerical radial integrals used to validate the closed-form matrix elements.
namespace ppqe::quad {

inline constexpr double kRelTol = 1e-14;
inline constexpr unsigned kMaxDepth = 20;

template <class F>
double integrate(F&& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, kRelTol);
}

inline double cutoff(const hgh::HghSpecies& s) {
    return 12 * std::max({s.r_loc, s.rl[0], s.rl[1], s.rl[2]});
}

// int_0^inf r^2 j_l(G r) beta_l(r) dr.
inline double projector_overlap(const hgh::HghSpecies& s, int l, double G) {
    return integrate([&](double r) { return r * r * std::sph_bessel(l, G * r) * hgh::projector(s, l, r); }, 0.0,
                     cutoff(s));
}

// (1/G) int_0^inf r u_loc(r) sin(G r) dr, the bracket of the local element.
// The Coulomb tail -Z erf(a r)/r is split as -Z/r + Z erfc(a r)/r; the first
// piece integrates to -Z/G^2 in closed form, the second decays like a Gaussian.
inline double local_bracket(const hgh::HghSpecies& s, double G) {
    const double rl = s.r_loc, alpha = 1 / (std::sqrt(2.0) * rl);
    const double tail = integrate([&](double r) { return std::erfc(alpha * r) * std::sin(G * r); }, 0.0, cutoff(s));
    const double poly = integrate(
        [&](double r) {
            const double x2 = (r / rl) * (r / rl);
            const double p = s.C[0] + s.C[1] * x2 + s.C[2] * x2 * x2 + s.C[3] * x2 * x2 * x2;
            return r * std::exp(-x2 / 2) * p * std::sin(G * r);
        },
        0.0, cutoff(s));
    return -s.Z_ion / (G * G) + (s.Z_ion * tail + poly) / G;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return out;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::fabs(a), std::fabs(b));
    return s == 0 ? 0 : std::fabs(a - b) / s;
}

}  // namespace ppqe::quad
