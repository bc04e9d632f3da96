#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumplab/mark_law.hpp"
#include "jumplab/path.hpp"

namespace jumplab {

/// Square-root stochastic-volatility parameters with leverage.
struct HestonParams {
    double v0 = 0.16;
    double kappa = 5.0;
    double beta_bar = 0.16;  // long-run variance level
    double gamma = 0.5;      // vol-of-vol
    double rho = -0.5;       // corr(dW, dB)

    void validate() const;
};

/// Jump alternative attached to the latent path.
struct JumpSpec {
    enum class Kind { None, Dense, Sparse };

    Kind kind = Kind::None;
    double intensity = 0.0;  // theta (dense) or lambda (sparse)
    MarkLaw mark = MarkLaw::point_mass(0.0);

    static JumpSpec none() { return {}; }
    static JumpSpec dense(double theta, MarkLaw law);
    static JumpSpec sparse(double lambda, MarkLaw law);
};

/// Additive observation noise.
struct NoiseSpec {
    enum class Kind { None, Gaussian, StudentT8 };

    Kind kind = Kind::None;
    double q = 0.0;  // noise scale; variance is q^2 for both kinds

    static NoiseSpec none() { return {}; }
    static NoiseSpec gaussian(double q_);
    static NoiseSpec student_t8(double q_);
};

/// Full generator recipe for one (multi-day) path.
struct SimulationSpec {
    HestonParams heston;
    JumpSpec jumps;
    NoiseSpec noise;
    int days = 1;
    int steps_per_day = 23'400;
    std::uint64_t seed = 0;
};

/// One generated day: latent and observed paths on a shared grid, the
/// effective variance path, and the jump records that were injected.
struct SimulatedDay {
    LogPricePath latent;
    ObservedPath observed;
    std::vector<double> variance_path;  // V at each grid point, length n+1
    std::vector<JumpRecord> jumps;
    std::uint64_t seed = 0;
};

/// Euler scheme with full truncation for the variance; deterministic per
/// seed. Returns the log-price path and the effective (nonnegative)
/// variance at every grid point.
std::pair<LogPricePath, std::vector<double>> simulate_heston(
    const HestonParams& params, std::size_t n, double delta, std::uint64_t seed);

/// Adds the jump component on top of a latent path.
/// Dense: per interval, Poisson(theta sqrt(delta)) marks scaled by
/// sqrt(V_{i-1} delta) enter the increment. Sparse: compound Poisson level
/// shifts; a jump at an interior time lands in the right-closed interval
/// that contains it.
std::pair<LogPricePath, std::vector<JumpRecord>> attach_jumps(
    const LogPricePath& x, const std::vector<double>& variance,
    const JumpSpec& spec, std::uint64_t seed);

/// Adds i.i.d. observation noise pointwise; the t8 variant is scaled so the
/// variance equals q^2.
ObservedPath attach_noise(const LogPricePath& x, const NoiseSpec& spec,
                          std::uint64_t seed);

/// Full pipeline with per-purpose substreams, so changing the jump or noise
/// spec never perturbs the Brownian draws.
SimulatedDay simulate_day(const SimulationSpec& spec);

/// Writes (index, time, latent, observed, variance) rows.
void write_day_csv(const SimulatedDay& day, const std::string& file);

}  // namespace jumplab
