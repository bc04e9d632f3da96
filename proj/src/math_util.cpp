#include "jumplab/math_util.hpp"

#include <array>
#include <cstring>
#include <vector>

#include "jumplab/errors.hpp"

namespace jumplab {

double gaussian_abs_moment(double r) {
    require(r >= 0.0, ErrorCode::InvalidArgument,
            "gaussian_abs_moment: order must be nonnegative");
    // E|N|^r = 2^{r/2} Gamma((r+1)/2) / sqrt(pi)
    return std::exp((r / 2.0) * std::log(2.0) + std::lgamma((r + 1.0) / 2.0)) /
           std::sqrt(kPi);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * double(n - k + i) / double(i);
    return out;
}

double ipow(double x, int e) {
    double out = 1.0;
    double base = x;
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

namespace {

// Kronrod 15-point nodes/weights on [-1,1]; Gauss 7-point weights embedded.
constexpr std::array<double, 15> kKronrodNodes = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr std::array<double, 15> kKronrodWeights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss-7 weights aligned with the odd Kronrod nodes (indices 1,3,...,13).
constexpr std::array<double, 7> kGaussWeights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double kronrod = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double fx = f(mid + half * kKronrodNodes[i]);
        kronrod += kKronrodWeights[i] * fx;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fx;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::fabs(kronrod - gauss)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
    const GkResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= max_depth) {
        if (depth >= max_depth && r.error > 64.0 * tol) {
            raise(ErrorCode::NumericFailure,
                  "integrate: subdivision limit reached without convergence");
        }
        return r.value;
    }
    const double mid = 0.5 * (a + b);
    return integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return integrate_rec(f, a, b, abs_tol, 0, max_depth);
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
    return mix64(seed ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

std::uint64_t hash_tag(std::uint64_t seed, const char* tag) {
    // FNV-1a over the tag, folded into the seed.
    std::uint64_t h = 1469598103934665603ULL;
    for (const char* p = tag; *p; ++p) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*p));
        h *= 1099511628211ULL;
    }
    return hash_combine(seed, h);
}

}  // namespace jumplab
