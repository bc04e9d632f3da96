#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "jumplab/mark_law.hpp"
#include "jumplab/path.hpp"
#include "jumplab/report.hpp"

namespace jumplab {

/// Tuning of the power-variation ratio test.
struct AjConfig {
    double p = 4.0;  // power, > 3
    int k = 2;       // coarse block size, >= 2
    std::int64_t kernel_mc_paths = 10'000'000;
    std::uint64_t kernel_mc_seed = 0x6a756d706c6162ULL;

    void validate() const;
};

/// Tuning of the standardized-maximum test.
struct LmConfig {
    int window = 0;      // K_n; 0 = ceil(n^0.6) resolved at test time
    bool demean = true;  // subtract the sample mean of the increments

    int resolve_window(std::size_t n) const;
};

/// Monte Carlo moments of the block kernel: varsigma_sq is the variance of
/// U_{p,k} over i.i.d. standard normals; d_pk is the mean-shift kernel under
/// a mark law (0 when no law is supplied).
struct KernelMoments {
    double varsigma_sq = 0.0;
    double d_pk = 0.0;
    std::int64_t mc_paths = 0;
    std::uint64_t mc_seed = 0;
    double standard_error = 0.0;       // SE of varsigma_sq
    double d_pk_standard_error = 0.0;  // SE of d_pk (0 when no law supplied)
};

/// Sum of p-th absolute powers of the fine-scale increments.
double power_variation(const LogPricePath& path, double p);

/// Coarse-scale power variation over non-overlapping blocks of k increments;
/// the trailing partial block is discarded.
double block_power_variation(const LogPricePath& path, double p, int k);

/// Block kernel |sum x|^p - k^{p/2-1} * sum |x|^p.
double block_kernel_u(std::span<const double> x, double p, int k);

/// Seeded Monte Carlo estimates of varsigma^2_{p,k} (and d_{p,k} when a mark
/// law is given). Results are cached by (p, k, law, paths, seed); the draw
/// budget is split into fixed-size chunks with per-chunk substreams so the
/// merged estimate is bit-identical for any worker count.
KernelMoments kernel_moments(const AjConfig& cfg,
                             const std::optional<MarkLaw>& mark = std::nullopt);

/// Same computation without the cache; recomputes every time.
KernelMoments kernel_moments_nocache(
    const AjConfig& cfg, const std::optional<MarkLaw>& mark = std::nullopt);

/// Ratio test: statistic R, normalized Z, two-sided normal p-value.
JumpTestReport aj_test(const LogPricePath& path, const AjConfig& cfg,
                       const KernelMoments& moments);

/// Gumbel location/scale constants C_n and a_n for sample size n.
std::pair<double, double> lm_normalizing_constants(std::size_t n);

/// Core of the max statistic: max |r_i| / sqrt(var_i) over i in [K_n, n]
/// (1-based increments). When variance_override is non-null it replaces the
/// rolling bipower estimate (used by oracles and calibration).
double lm_max_statistic(std::span<const double> incs, int window, bool demean,
                        const std::vector<double>* variance_override,
                        std::size_t* argmax_out);

/// Rolling bipower variance series: entry i-1 holds V_hat_{n,i} for
/// i = K_n..n (1-based); entries before K_n are filled with V_hat_{n,K_n}.
std::vector<double> local_bipower_series(std::span<const double> incs, int window);

/// Standardized-maximum test with Gumbel calibration.
JumpTestReport lm_test(const LogPricePath& path, const LmConfig& cfg);

/// Weighted Cauchy combination of p-values: returns (statistic, p-value).
/// Inputs are clamped to [1e-15, 1 - 1e-15] before the tangent transform.
std::pair<double, double> cauchy_combine(std::span<const double> pvalues,
                                         std::span<const double> weights);

/// Equal-weight convenience overload.
std::pair<double, double> cauchy_combine(std::span<const double> pvalues);

/// Upper alpha-quantile of the standard Cauchy law, cot(pi * alpha).
double cauchy_critical(double alpha);

/// Local mean shift of the ratio statistic under the dense alternative:
/// theta * d_{p,k} / (m_p * tau0).
double dense_shift_mu(const AjConfig& cfg, double theta, const MarkLaw& mark,
                      double tau0);

/// Asymptotic power of the level-alpha combined test at mean shift mu,
/// by adaptive quadrature (absolute error target 1e-6).
double dense_power_curve(double alpha, double mu);

/// Oracle-normalized ratio statistic under fixed finite-activity jumps.
/// spot_sigmas holds the spot volatility (not variance) at each jump time.
double aj_oracle_fixed_stat(const LogPricePath& path,
                            std::span<const JumpRecord> jumps,
                            std::span<const double> spot_sigmas,
                            const AjConfig& cfg);

}  // namespace jumplab
