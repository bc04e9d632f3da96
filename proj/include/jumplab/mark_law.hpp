#pragma once

#include <cstdint>
#include <string>

#include "jumplab/rng.hpp"

namespace jumplab {

/// Jump-mark distribution: point mass at a value, or centered Gaussian
/// with a given variance.
struct MarkLaw {
    enum class Kind { PointMass, Gaussian };

    Kind kind = Kind::PointMass;
    double param = 0.0;  // location (PointMass) or variance (Gaussian)

    static MarkLaw point_mass(double value) {
        return MarkLaw{Kind::PointMass, value};
    }
    static MarkLaw gaussian(double variance);

    double sample(Rng& rng) const {
        if (kind == Kind::PointMass) return param;
        return std::sqrt(param) * rng.normal();
    }

    std::string cache_key() const;
};

}  // namespace jumplab
