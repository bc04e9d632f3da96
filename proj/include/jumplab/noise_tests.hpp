#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "jumplab/mark_law.hpp"
#include "jumplab/path.hpp"
#include "jumplab/preaverage.hpp"
#include "jumplab/report.hpp"

namespace jumplab {

/// Tuning of the pre-averaged ratio test.
///
/// Built through make() so the calibration constants gamma, gamma' and
/// gamma'' are computed once and the restriction gamma'' > 1 is enforced
/// at construction.
struct PaConfig {
    int p = 4;           // even power >= 4
    double theta = 1.0;  // target of k_n * sqrt(delta)
    int k_n = 0;         // pre-averaging window
    int r_n = 0;         // CLT block length, > k_n
    PreAveragingWeights weight_g;
    PreAveragingWeights weight_h;
    std::vector<double> rho;
    double gamma = 0.0;        // g_bar(2) / h_bar(2)
    double gamma_prime = 0.0;  // g_bar(p) / h_bar(p)
    double gamma_pp = 0.0;     // gamma^{p/2} / gamma'

    static PaConfig make(int p, double theta, int k_n, int r_n,
                         double h_exponent = 2.0);

    /// Window/block defaults for grid spacing delta: k_n = ceil(theta/sqrt(delta)),
    /// r_n = ceil(delta^{-rn_exponent}).
    static PaConfig for_grid(int p, double theta, double delta,
                             double h_exponent = 2.0, double rn_exponent = 0.85);
};

/// Tuning of the local-average max test and its TSRSV spot-variance plug-in.
struct LaConfig {
    int M_n = 0;          // local-average window
    double lambda = 1.0;  // target of M_n * sqrt(delta) (used when M_n == 0)
    double tsrsv_cK = 1.0;
    double tsrsv_ch = 1.0;
    double sigma_floor = 1e-8;  // floor for spot-variance estimates

    int resolve_window(double delta) const;
};

/// Spot-variance estimates on the disjoint local-average grid.
struct SpotVarianceSeries {
    std::vector<std::size_t> grid_indices;  // {0, 2M, 4M, ...}
    std::vector<double> sigma_sq;           // floored at sigma_floor
    double omega_sq_hat = 0.0;
};

/// Pre-averaged levels and squared-difference compensators:
/// barY_i = sum_j phi_j dY_{i+j}, hatY_i = sum_j (dphi_j dY_{i+j})^2,
/// both for i = 0..n-k_n.
std::pair<std::vector<double>, std::vector<double>> preaveraged_series(
    const ObservedPath& y, const PreAveragingWeights& w);

/// Bias-corrected power functional V_n(Y, phi, p) = sum_l rho_l V_n(Y,phi,p-2l,l).
double corrected_power_functional(const ObservedPath& y,
                                  const PreAveragingWeights& w,
                                  const std::vector<double>& rho, int p);

/// Pre-averaged ratio R = V_n(Y,g,p) / (gamma' V_n(Y,h,p)).
double pa_ratio(const ObservedPath& y, const PaConfig& cfg);

/// Ratio test with the block self-normalizer.
JumpTestReport pa_test(const ObservedPath& y, const PaConfig& cfg);

/// Noise-variance estimator (1/2n) sum (dY_i)^2. Presumes dominant noise:
/// on a noiseless diffusion it returns half the average squared increment.
double noise_variance_hat(const ObservedPath& y);

/// Two-scale realized spot variance on the disjoint grid, with the
/// noise-variance estimate attached. Negative estimates are floored.
SpotVarianceSeries tsrsv_spot(const ObservedPath& y, const LaConfig& cfg);

/// Local-average max test with Gumbel calibration on the disjoint grid.
JumpTestReport la_test(const ObservedPath& y, const LaConfig& cfg,
                       const SpotVarianceSeries& spot);

/// Equal-weight Cauchy combination of the two noisy p-values.
std::pair<double, double> noisy_cauchy(double p_pa, double p_la);

/// Local mean shift of the pre-averaged ratio under the noisy dense
/// alternative. sigma_hat_sq is the feasible stand-in for the asymptotic
/// variance of the normalized ratio (e.g. the squared block self-normalizer
/// from a null calibration run). Mark-law moments are estimated by seeded
/// Monte Carlo; the u-integrals use adaptive quadrature.
double noisy_dense_shift(const PaConfig& cfg, double vartheta, const MarkLaw& mark,
                         double sigma_hat_sq, std::int64_t mc_budget,
                         std::uint64_t seed);

}  // namespace jumplab
