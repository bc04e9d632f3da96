#include "jumplab/path.hpp"

#include <cmath>

#include "jumplab/errors.hpp"

namespace jumplab {

void LogPricePath::validate() const {
    require(values.size() >= 3, ErrorCode::InvalidArgument,
            "path: need at least 3 observations (n >= 2)");
    require(delta > 0.0 && horizon > 0.0, ErrorCode::InvalidArgument,
            "path: delta and horizon must be positive");
    const double n = static_cast<double>(count());
    require(std::fabs(n * delta - horizon) <= 1e-9 * std::fabs(horizon),
            ErrorCode::InvalidArgument,
            "path: n * delta must equal horizon (relative tol 1e-9)");
    for (double v : values) {
        require(std::isfinite(v), ErrorCode::InvalidArgument,
                "path: all values must be finite");
    }
}

LogPricePath make_path(std::vector<double> values, double delta, double horizon) {
    LogPricePath p{std::move(values), delta, horizon};
    p.validate();
    return p;
}

std::vector<double> increments(const LogPricePath& path) {
    path.validate();
    std::vector<double> out(path.count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = path.values[i + 1] - path.values[i];
    }
    return out;
}

LogPricePath aggregate_last_tick(const LogPricePath& path, int factor,
                                 std::size_t* dropped_out) {
    path.validate();
    require(factor > 0, ErrorCode::InvalidArgument,
            "aggregate_last_tick: factor must be positive");
    if (factor == 1) {
        if (dropped_out) *dropped_out = 0;
        return path;
    }
    const std::size_t n = path.count();
    const std::size_t blocks = n / static_cast<std::size_t>(factor);
    require(blocks >= 2, ErrorCode::InsufficientData,
            "aggregate_last_tick: fewer than 2 coarse increments would remain");
    if (dropped_out) *dropped_out = n - blocks * static_cast<std::size_t>(factor);

    std::vector<double> coarse(blocks + 1);
    for (std::size_t j = 0; j <= blocks; ++j) {
        coarse[j] = path.values[j * static_cast<std::size_t>(factor)];
    }
    const double new_delta = path.delta * factor;
    // The horizon shrinks with the dropped tail so the grid stays regular.
    return LogPricePath{std::move(coarse), new_delta,
                        new_delta * static_cast<double>(blocks)};
}

}  // namespace jumplab
