#pragma once

#include <cstdint>
#include <vector>

#include "jumplab/frictionless.hpp"
#include "jumplab/noise_tests.hpp"
#include "jumplab/path.hpp"

namespace jumplab {

/// Resample budgets and seed for the bootstrap calibrators.
/// b1/b2 of 199/99 are production defaults; 99/49 suits CI-scale runs.
struct BootstrapConfig {
    int b1 = 199;
    int b2 = 99;
    double alpha = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Pathwise parametric bootstrap p-value for the standardized-maximum test.
///
/// Fits a continuous surrogate from the path's own local bipower series,
/// draws b1 no-jump paths with fresh Gaussian innovations, recomputes the
/// max statistic on each, and returns (1 + #{T* >= T_obs}) / (b1 + 1).
double lm_bootstrap_pvalue(const LogPricePath& path, const LmConfig& cfg_lm,
                           const BootstrapConfig& cfg_bs);

/// Two-stage bootstrap calibration of the noisy local-average max test.
struct DoubleBootstrapResult {
    bool reject = false;
    double p_star = 0.0;     // first-stage bootstrap p-value (add-one convention)
    double threshold = 0.0;  // empirical alpha-quantile of the p** sample
    double t_observed = 0.0;
    std::vector<double> p_star_star;  // one raw-count p** per outer resample
};

/// Stage 1 fits a continuous Gaussian surrogate (TSRSV spot variance on the
/// disjoint grid, estimated noise variance), draws B1 paths, re-estimates the
/// nuisances on each, and recomputes the max statistic. Stage 2 repeats the
/// scheme from each first-stage fit with B2 inner paths. Rejects when p* is
/// below the empirical alpha-quantile of the p** sample.
DoubleBootstrapResult double_bootstrap_decision(const ObservedPath& y,
                                                const LaConfig& cfg_la,
                                                const BootstrapConfig& cfg_bs);

/// Decision at a different level from the same p** sample.
bool double_bootstrap_reject_at(const DoubleBootstrapResult& result, double alpha);

/// One draw from the continuous Gaussian surrogate fitted to y (the model
/// the bootstrap stages resample from); exposed for calibration diagnostics.
ObservedPath draw_null_surrogate(const ObservedPath& y, const LaConfig& cfg_la,
                                 std::uint64_t seed);

}  // namespace jumplab
