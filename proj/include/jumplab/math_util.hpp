#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace jumplab {

inline constexpr double kPi = 3.14159265358979323846;

// Standard normal distribution helpers.
inline double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

inline double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Upper tail P(N > x).
inline double norm_sf(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Two-sided normal p-value 2(1 - Phi(|z|)).
inline double normal_two_sided_pvalue(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

/// Absolute moment m_r = E|N|^r of a standard normal, r >= 0.
double gaussian_abs_moment(double r);

// cot(pi * p) for p in (0,1), evaluated from the short end so both
// p -> 0 and p -> 1 stay accurate. Equals tan(pi * (1/2 - p)).
inline double cauchy_tail_transform(double p) {
    if (p <= 0.5) return 1.0 / std::tan(kPi * p);
    return -1.0 / std::tan(kPi * (1.0 - p));
}

// P(C > t) for a standard Cauchy variable, i.e. 1/2 - arctan(t)/pi,
// written so the result does not lose precision for large |t|.
inline double cauchy_sf(double t) {
    if (t > 0.0) return std::atan(1.0 / t) / kPi;
    if (t < 0.0) return 1.0 - std::atan(-1.0 / t) / kPi;
    return 0.5;
}

// Gumbel survival 1 - exp(-e^{-x}).
inline double gumbel_pvalue(double xi) {
    return -std::expm1(-std::exp(-xi));
}

// Exact binomial coefficient as a double (small arguments only).
double binomial(int n, int k);

// Integer power by repeated squaring.
double ipow(double x, int e);

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
/// Subdivides until the local error estimate is below abs_tol.
/// Throws NumericFailure if the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 40);

// 64-bit mixing/hash utilities used for seed derivation.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v);
std::uint64_t hash_tag(std::uint64_t seed, const char* tag);

}  // namespace jumplab
