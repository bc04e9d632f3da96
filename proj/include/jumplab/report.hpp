#pragma once

#include <map>
#include <string>

namespace jumplab {

/// Test identifiers: frictionless battery (AJ, LM, CC) and the
/// noise-robust battery (PA, LA, CCN).
enum class Method { AJ, LM, CC, PA, LA, CCN };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

/// Outcome of one jump test on one path.
struct JumpTestReport {
    Method method = Method::AJ;
    double statistic = 0.0;   // raw statistic (ratio or max)
    double normalized = 0.0;  // standardized statistic (Z or xi)
    double pvalue = 1.0;
    std::map<std::string, double> tuning;  // echoes k, p, K_n, argmax, ...
};

}  // namespace jumplab
