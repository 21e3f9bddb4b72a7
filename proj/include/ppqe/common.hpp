#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ppqe {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kBohrPerAngstrom = 1.8897259886;
inline constexpr double kEvPerHartree = 27.211386245988;

inline double angstrom_to_bohr(double x) { return x * kBohrPerAngstrom; }
inline double ev_to_hartree(double x) { return x / kEvPerHartree; }
inline double hartree_to_ev(double x) { return x * kEvPerHartree; }

// Malformed or inconsistent input (exit code 2).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs parse but no valid plan exists (exit code 3).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumaier-compensated sum. Order-dependent but deterministic, which is what
// reproducible reports need.
class Accumulator {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    Accumulator& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ceil(log2(x)) for x >= 1; 0 for x <= 1.
inline int ceil_log2(std::uint64_t x) {
    if (x <= 1) return 0;
    int k = 0;
    std::uint64_t v = 1;
    while (v < x) {
        v <<= 1;
        ++k;
    }
    return k;
}

// ceil(log2(x)) for real x > 0, robust at exact powers of two.
inline int ceil_log2_real(double x) {
    if (!(x > 0.0)) throw std::domain_error("ceil_log2_real: non-positive argument");
    int e = 0;
    const double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
    return m == 0.5 ? e - 1 : e;
}

inline std::int64_t pow2(int k) { return std::int64_t{1} << k; }

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Exponent of the largest power of two dividing x; 0 for x == 0.
inline int v2(std::int64_t x) {
    if (x == 0) return 0;
    int k = 0;
    while ((x & 1) == 0) {
        x >>= 1;
        ++k;
    }
    return k;
}

}  // namespace ppqe
