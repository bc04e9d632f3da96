#include "jumplab/preaverage.hpp"

#include <cmath>

#include "jumplab/errors.hpp"
#include "jumplab/math_util.hpp"

namespace jumplab {

namespace {

// m_{2j} = (2j-1)!! as an exact double.
double even_abs_moment(int two_j) {
    double out = 1.0;
    for (int i = 1; i < two_j; i += 2) out *= static_cast<double>(i);
    return out;
}

void require_even_p(int p, const char* who) {
    require(p >= 4 && p % 2 == 0, ErrorCode::InvalidArgument,
            std::string(who) + ": p must be an even integer >= 4");
}

}  // namespace

std::vector<double> rho_coefficients(int p) {
    require_even_p(p, "rho_coefficients");
    const int half = p / 2;
    std::vector<double> rho(static_cast<std::size_t>(half) + 1, 0.0);
    rho[0] = 1.0;
    for (int j = 1; j <= half; ++j) {
        double partial = 0.0;
        for (int l = 0; l < j; ++l) {
            partial += ipow(2.0, l) * even_abs_moment(2 * (j - l)) *
                       binomial(p - 2 * l, p - 2 * j) * rho[static_cast<std::size_t>(l)];
        }
        // diagonal term: 2^j * m_0 * C(p-2j, p-2j) = 2^j
        rho[static_cast<std::size_t>(j)] = -partial / ipow(2.0, j);
    }
    return rho;
}

double rho_residual(int p, int j, const std::vector<double>& rho) {
    require_even_p(p, "rho_residual");
    require(j >= 1 && j <= p / 2, ErrorCode::InvalidArgument,
            "rho_residual: equation index out of range");
    double sum = 0.0;
    for (int l = 0; l <= j; ++l) {
        sum += ipow(2.0, l) * even_abs_moment(2 * (j - l)) *
               binomial(p - 2 * l, p - 2 * j) * rho[static_cast<std::size_t>(l)];
    }
    return sum;
}

double PreAveragingWeights::value(double u) const {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double s = std::sin(kPi * u);
    return kind == WeightKind::Sine ? s : std::pow(s, a);
}

double PreAveragingWeights::derivative(double u) const {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    if (kind == WeightKind::Sine) return kPi * std::cos(kPi * u);
    return a * kPi * std::pow(std::sin(kPi * u), a - 1.0) * std::cos(kPi * u);
}

double PreAveragingWeights::bar(double q) const {
    return integrate([this, q](double u) { return std::pow(std::fabs(value(u)), q); },
                     0.0, 1.0, 1e-10);
}

double PreAveragingWeights::bar_prime(double q) const {
    return integrate(
        [this, q](double u) { return std::pow(std::fabs(derivative(u)), q); }, 0.0,
        1.0, 1e-10);
}

PreAveragingWeights build_weights(WeightKind kind, double a, int k_n) {
    require(k_n >= 4, ErrorCode::InvalidArgument, "build_weights: k_n must be >= 4");
    if (kind == WeightKind::SinePower) {
        require(a > 1.0, ErrorCode::InvalidArgument,
                "build_weights: SinePower exponent must exceed 1");
    }
    PreAveragingWeights w;
    w.kind = kind;
    w.a = (kind == WeightKind::SinePower) ? a : 1.0;
    w.k_n = k_n;
    w.phi.resize(static_cast<std::size_t>(k_n) + 1);
    for (int j = 0; j <= k_n; ++j) {
        w.phi[static_cast<std::size_t>(j)] =
            w.value(static_cast<double>(j) / static_cast<double>(k_n));
    }
    w.phi.front() = 0.0;
    w.phi.back() = 0.0;
    w.dphi.resize(static_cast<std::size_t>(k_n));
    for (int j = 1; j <= k_n; ++j) {
        w.dphi[static_cast<std::size_t>(j) - 1] =
            w.phi[static_cast<std::size_t>(j)] - w.phi[static_cast<std::size_t>(j) - 1];
    }
    return w;
}

double gaussian_shifted_abs_moment_even(int q, double v, double x) {
    require(q >= 0 && q % 2 == 0, ErrorCode::InvalidArgument,
            "gaussian_shifted_abs_moment_even: q must be even and nonnegative");
    // E|sqrt(v) N + x|^q = sum_j C(q, 2j) m_{q-2j} v^{(q-2j)/2} x^{2j}
    double sum = 0.0;
    for (int j = 0; 2 * j <= q; ++j) {
        sum += binomial(q, 2 * j) * even_abs_moment(q - 2 * j) *
               ipow(v, (q - 2 * j) / 2) * ipow(x, 2 * j);
    }
    return sum;
}

std::pair<double, double> noise_shift_identity_check(int p, double a, double b,
                                                     double x) {
    require_even_p(p, "noise_shift_identity_check");
    require(a >= 0.0 && b >= 0.0, ErrorCode::InvalidArgument,
            "noise_shift_identity_check: a and b must be nonnegative");
    const auto rho = rho_coefficients(p);
    double lhs = 0.0;
    for (int l = 0; 2 * l <= p; ++l) {
        lhs += rho[static_cast<std::size_t>(l)] *
               gaussian_shifted_abs_moment_even(p - 2 * l, a + b, x) *
               ipow(2.0 * b, l);
    }
    const double rhs = gaussian_shifted_abs_moment_even(p, a, x);
    return {lhs, rhs};
}

}  // namespace jumplab
