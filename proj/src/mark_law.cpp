#include "jumplab/mark_law.hpp"

#include <cstdio>

#include "jumplab/errors.hpp"

namespace jumplab {

MarkLaw MarkLaw::gaussian(double variance) {
    require(variance >= 0.0, ErrorCode::InvalidArgument,
            "MarkLaw::gaussian: variance must be nonnegative");
    return MarkLaw{Kind::Gaussian, variance};
}

std::string MarkLaw::cache_key() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%.17g",
                  kind == Kind::PointMass ? "pm" : "gauss", param);
    return buf;
}

}  // namespace jumplab
