#pragma once

#include <cstddef>
#include <vector>

namespace jumplab {

/// Regularly sampled log-price path.
///
/// values holds X_{t_0},...,X_{t_n}; delta is the grid spacing in units of
/// the horizon, so count() * delta == horizon up to rounding. All statistics
/// in this library are pure functions of immutable paths.
struct LogPricePath {
    std::vector<double> values;
    double delta = 0.0;
    double horizon = 0.0;

    /// Number of increments n (= values.size() - 1).
    std::size_t count() const { return values.empty() ? 0 : values.size() - 1; }

    /// Validates the grid invariants; throws InvalidArgument on violation.
    void validate() const;
};

// Noisy observations share the sampling-grid contract of the latent path.
using ObservedPath = LogPricePath;

LogPricePath make_path(std::vector<double> values, double delta, double horizon);

/// First differences Delta_i X = X_{t_i} - X_{t_{i-1}}, length n.
std::vector<double> increments(const LogPricePath& path);

/// Last-tick aggregation: keep every factor-th observation starting at
/// index 0 and scale the grid spacing accordingly. A trailing remainder
/// that does not fill a block is dropped; the number of dropped
/// observations is reported through dropped_out when non-null.
LogPricePath aggregate_last_tick(const LogPricePath& path, int factor,
                                 std::size_t* dropped_out = nullptr);

/// One fixed jump: location in (0, horizon), nonzero size.
struct JumpRecord {
    double time = 0.0;
    double size = 0.0;
};

}  // namespace jumplab
