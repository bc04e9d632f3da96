#pragma once

#include <utility>
#include <vector>

namespace jumplab {

/// Bias-correction weights rho_0..rho_{p/2} for powers of pre-averaged
/// returns: rho_0 = 1 and, for j = 1..p/2,
///   sum_{l=0}^{j} 2^l m_{2j-2l} C(p-2l, p-2j) rho_l = 0,
/// solved by forward substitution. p must be even and >= 4.
std::vector<double> rho_coefficients(int p);

/// Residual of equation j of the triangular system for the given weights
/// (diagnostic; exact solutions give 0 up to rounding).
double rho_residual(int p, int j, const std::vector<double>& rho);

enum class WeightKind { Sine, SinePower };

/// Discretized pre-averaging weight profile on a window of k_n increments.
///
/// phi[j] = w(j/k_n) with exact zeros at both endpoints; dphi[j-1] holds the
/// difference phi_j - phi_{j-1} for j = 1..k_n. The integral functionals
/// bar(q) = int |w|^q and bar_prime(q) = int |w'|^q are evaluated on the
/// continuous profile by adaptive quadrature (tolerance 1e-10).
struct PreAveragingWeights {
    WeightKind kind = WeightKind::Sine;
    double a = 1.0;  // exponent for SinePower
    int k_n = 0;
    std::vector<double> phi;   // size k_n + 1
    std::vector<double> dphi;  // size k_n

    double value(double u) const;
    double derivative(double u) const;
    double bar(double q) const;
    double bar_prime(double q) const;
};

/// Builds a weight profile. SinePower requires a > 1 (otherwise the
/// sum-statistic calibration constant gamma'' cannot exceed 1).
PreAveragingWeights build_weights(WeightKind kind, double a, int k_n);

/// Both sides of the noise-correction identity with a deterministic shift:
///   lhs = sum_l rho_l E|sqrt(a+b) N + x|^{p-2l} (2b)^l,  rhs = E|sqrt(a) N + x|^p,
/// each via the closed-form even-moment expansion. Exported as an oracle check.
std::pair<double, double> noise_shift_identity_check(int p, double a, double b,
                                                     double x);

/// Closed form E|sqrt(v) N + x|^q for even q >= 0.
double gaussian_shifted_abs_moment_even(int q, double v, double x);

}  // namespace jumplab
