#include "jumplab/frictionless.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "jumplab/errors.hpp"
#include "jumplab/math_util.hpp"
#include "jumplab/parallel.hpp"

namespace jumplab {

void AjConfig::validate() const {
    require(p > 3.0, ErrorCode::InvalidArgument, "AjConfig: power p must exceed 3");
    require(k >= 2, ErrorCode::InvalidArgument, "AjConfig: block size k must be >= 2");
    require(kernel_mc_paths >= 100'000, ErrorCode::InvalidArgument,
            "AjConfig: kernel MC budget must be at least 1e5");
}

int LmConfig::resolve_window(std::size_t n) const {
    if (window > 0) return window;
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.6)));
}

double power_variation(const LogPricePath& path, double p) {
    require(p > 0.0, ErrorCode::InvalidArgument, "power_variation: p must be positive");
    const auto incs = increments(path);
    double sum = 0.0;
    for (double d : incs) sum += std::pow(std::fabs(d), p);
    return sum;
}

double block_power_variation(const LogPricePath& path, double p, int k) {
    require(p > 0.0, ErrorCode::InvalidArgument,
            "block_power_variation: p must be positive");
    require(k >= 2, ErrorCode::InvalidArgument, "block_power_variation: k must be >= 2");
    const auto incs = increments(path);
    const std::size_t blocks = incs.size() / static_cast<std::size_t>(k);
    require(blocks >= 1, ErrorCode::InsufficientData,
            "block_power_variation: fewer than k increments");
    double sum = 0.0;
    for (std::size_t j = 0; j < blocks; ++j) {
        double block = 0.0;
        for (int l = 0; l < k; ++l) block += incs[j * k + l];
        sum += std::pow(std::fabs(block), p);
    }
    return sum;
}

double block_kernel_u(std::span<const double> x, double p, int k) {
    require(static_cast<int>(x.size()) == k, ErrorCode::InvalidArgument,
            "block_kernel_u: input length must equal k");
    double total = 0.0;
    double abs_powers = 0.0;
    for (double v : x) {
        total += v;
        abs_powers += std::pow(std::fabs(v), p);
    }
    return std::pow(std::fabs(total), p) -
           std::pow(static_cast<double>(k), p / 2.0 - 1.0) * abs_powers;
}

namespace {

constexpr std::int64_t kMcChunk = 1 << 15;

struct MomentAccumulator {
    double sum_u = 0.0;
    double sum_u2 = 0.0;
    double sum_u4 = 0.0;
    double sum_d = 0.0;
    double sum_d2 = 0.0;
    std::int64_t count = 0;
};

// One chunk of draws; merging across chunks happens in fixed chunk order.
MomentAccumulator kernel_chunk(const AjConfig& cfg,
                               const std::optional<MarkLaw>& mark,
                               std::uint64_t chunk_seed, std::int64_t draws) {
    MomentAccumulator acc;
    Rng rng(chunk_seed);
    const double kpow = std::pow(static_cast<double>(cfg.k), cfg.p / 2.0 - 1.0);
    std::vector<double> e(static_cast<std::size_t>(cfg.k));
    for (std::int64_t d = 0; d < draws; ++d) {
        double total = 0.0;
        double abs_powers = 0.0;
        for (auto& v : e) {
            v = rng.normal();
            total += v;
            abs_powers += std::pow(std::fabs(v), cfg.p);
        }
        const double u = std::pow(std::fabs(total), cfg.p) - kpow * abs_powers;
        acc.sum_u += u;
        acc.sum_u2 += u * u;
        acc.sum_u4 += (u * u) * (u * u);
        if (mark) {
            const double y = mark->sample(rng);
            const double shifted_sum = std::pow(std::fabs(y + total), cfg.p) -
                                       std::pow(std::fabs(total), cfg.p);
            const double shifted_one = std::pow(std::fabs(y + e[0]), cfg.p) -
                                       std::pow(std::fabs(e[0]), cfg.p);
            const double dk = shifted_sum - kpow * shifted_one;
            acc.sum_d += dk;
            acc.sum_d2 += dk * dk;
        }
        acc.count += 1;
    }
    return acc;
}

KernelMoments compute_kernel_moments(const AjConfig& cfg,
                                     const std::optional<MarkLaw>& mark) {
    const std::int64_t chunks = (cfg.kernel_mc_paths + kMcChunk - 1) / kMcChunk;
    std::vector<MomentAccumulator> partials(static_cast<std::size_t>(chunks));
    parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        const std::int64_t lo = static_cast<std::int64_t>(c) * kMcChunk;
        const std::int64_t draws = std::min(kMcChunk, cfg.kernel_mc_paths - lo);
        partials[c] = kernel_chunk(
            cfg, mark, Rng::derive(cfg.kernel_mc_seed, static_cast<std::uint64_t>(c)),
            draws);
    });

    MomentAccumulator total;
    for (const auto& a : partials) {
        total.sum_u += a.sum_u;
        total.sum_u2 += a.sum_u2;
        total.sum_u4 += a.sum_u4;
        total.sum_d += a.sum_d;
        total.sum_d2 += a.sum_d2;
        total.count += a.count;
    }
    const double m = static_cast<double>(total.count);
    const double mean_u = total.sum_u / m;
    const double var_u = total.sum_u2 / m - mean_u * mean_u;
    // SE of the variance estimate; E U_{p,k} = 0, so raw moments suffice.
    const double raw4 = total.sum_u4 / m;
    const double se_var = std::sqrt(std::max(0.0, raw4 - var_u * var_u) / m);

    KernelMoments out;
    out.varsigma_sq = var_u;
    out.mc_paths = cfg.kernel_mc_paths;
    out.mc_seed = cfg.kernel_mc_seed;
    out.standard_error = se_var;
    if (mark) {
        out.d_pk = total.sum_d / m;
        const double var_d = total.sum_d2 / m - out.d_pk * out.d_pk;
        out.d_pk_standard_error = std::sqrt(std::max(0.0, var_d) / m);
    }
    return out;
}

std::mutex g_kernel_cache_mutex;
std::map<std::string, KernelMoments>& kernel_cache() {
    static std::map<std::string, KernelMoments> cache;
    return cache;
}

std::string kernel_cache_key(const AjConfig& cfg, const std::optional<MarkLaw>& mark) {
    std::ostringstream os;
    os << cfg.p << "|" << cfg.k << "|" << cfg.kernel_mc_paths << "|"
       << cfg.kernel_mc_seed << "|" << (mark ? mark->cache_key() : "-");
    return os.str();
}

}  // namespace

KernelMoments kernel_moments_nocache(const AjConfig& cfg,
                                     const std::optional<MarkLaw>& mark) {
    cfg.validate();
    return compute_kernel_moments(cfg, mark);
}

KernelMoments kernel_moments(const AjConfig& cfg, const std::optional<MarkLaw>& mark) {
    cfg.validate();
    const std::string key = kernel_cache_key(cfg, mark);
    {
        std::lock_guard<std::mutex> lock(g_kernel_cache_mutex);
        auto it = kernel_cache().find(key);
        if (it != kernel_cache().end()) return it->second;
    }
    const KernelMoments computed = compute_kernel_moments(cfg, mark);
    std::lock_guard<std::mutex> lock(g_kernel_cache_mutex);
    return kernel_cache().emplace(key, computed).first->second;
}

JumpTestReport aj_test(const LogPricePath& path, const AjConfig& cfg,
                       const KernelMoments& moments) {
    cfg.validate();
    const auto incs = increments(path);
    const std::size_t n = incs.size();
    require(n >= static_cast<std::size_t>(cfg.k), ErrorCode::InsufficientData,
            "aj_test: need at least k increments");

    double fine_p = 0.0;    // B_n(p)
    double fine_2p = 0.0;   // B_n(2p)
    for (double d : incs) {
        const double a = std::pow(std::fabs(d), cfg.p);
        fine_p += a;
        fine_2p += a * a;
    }
    require(fine_p > 0.0, ErrorCode::DegeneratePath,
            "aj_test: zero fine-scale power variation");

    const double coarse = block_power_variation(path, cfg.p, cfg.k);
    const double ratio = coarse / fine_p;

    const double delta = path.delta;
    const double m_p = gaussian_abs_moment(cfg.p);
    const double m_2p = gaussian_abs_moment(2.0 * cfg.p);
    const double a_p_hat = std::pow(delta, 1.0 - cfg.p / 2.0) * fine_p / m_p;
    const double a_2p_hat = std::pow(delta, 1.0 - cfg.p) * fine_2p / m_2p;
    const double tau_sq = moments.varsigma_sq * a_2p_hat /
                          (cfg.k * m_p * m_p * a_p_hat * a_p_hat);
    require(tau_sq > 0.0, ErrorCode::DegenerateVariance,
            "aj_test: degenerate variance estimate");
    const double tau = std::sqrt(tau_sq);

    const double target = std::pow(static_cast<double>(cfg.k), cfg.p / 2.0 - 1.0);
    const double z = (ratio - target) / (std::sqrt(delta) * tau);

    JumpTestReport report;
    report.method = Method::AJ;
    report.statistic = ratio;
    report.normalized = z;
    report.pvalue = normal_two_sided_pvalue(z);
    report.tuning = {{"p", cfg.p},
                     {"k", static_cast<double>(cfg.k)},
                     {"m_n", static_cast<double>(n / static_cast<std::size_t>(cfg.k))},
                     {"tau_hat", tau},
                     {"varsigma_sq", moments.varsigma_sq}};
    return report;
}

std::pair<double, double> lm_normalizing_constants(std::size_t n) {
    const double logn = std::log(static_cast<double>(n));
    const double root = std::sqrt(2.0 * logn);
    const double c_n = root - (std::log(kPi) + std::log(logn)) / (2.0 * root);
    return {c_n, 1.0 / root};
}

std::vector<double> local_bipower_series(std::span<const double> incs, int window) {
    const std::size_t n = incs.size();
    require(window >= 2 && static_cast<std::size_t>(window) <= n,
            ErrorCode::InvalidArgument, "local_bipower_series: bad window");
    const double scale = kPi / (2.0 * (window - 1));

    std::vector<double> out(n);
    // products w_j = |r_j| |r_{j-1}| for j = 2..n (1-based), rolling sum of
    // the window [i-K+2, i] so the own increment is included.
    double rolling = 0.0;
    for (int j = 2; j <= window; ++j) {
        rolling += std::fabs(incs[j - 1]) * std::fabs(incs[j - 2]);
    }
    out[static_cast<std::size_t>(window) - 1] = scale * rolling;
    for (std::size_t i = static_cast<std::size_t>(window) + 1; i <= n; ++i) {
        rolling += std::fabs(incs[i - 1]) * std::fabs(incs[i - 2]);
        rolling -= std::fabs(incs[i - window]) * std::fabs(incs[i - window - 1]);
        out[i - 1] = scale * rolling;
    }
    for (int i = 0; i < window - 1; ++i) {
        out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(window) - 1];
    }
    return out;
}

double lm_max_statistic(std::span<const double> incs, int window, bool demean,
                        const std::vector<double>* variance_override,
                        std::size_t* argmax_out) {
    const std::size_t n = incs.size();
    require(window >= 2, ErrorCode::InvalidArgument, "lm: window must be >= 2");
    require(n >= 2 * static_cast<std::size_t>(window), ErrorCode::InsufficientData,
            "lm: need n >= 2 * window");

    std::vector<double> r(incs.begin(), incs.end());
    if (demean) {
        double mean = 0.0;
        for (double v : r) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : r) v -= mean;
    }

    const std::vector<double>* variance = variance_override;
    std::vector<double> bipower;
    if (!variance) {
        bipower = local_bipower_series(r, window);
        variance = &bipower;
    }
    require(variance->size() == n, ErrorCode::InvalidArgument,
            "lm: variance series length mismatch");

    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = static_cast<std::size_t>(window); i <= n; ++i) {
        const double v = (*variance)[i - 1];
        require(v > 0.0, ErrorCode::DegenerateVariance,
                "lm: nonpositive local variance");
        const double standardized = std::fabs(r[i - 1]) / std::sqrt(v);
        if (standardized > best) {
            best = standardized;
            best_index = i;
        }
    }
    if (argmax_out) *argmax_out = best_index;
    return best;
}

JumpTestReport lm_test(const LogPricePath& path, const LmConfig& cfg) {
    const auto incs = increments(path);
    const int window = cfg.resolve_window(incs.size());
    std::size_t argmax = 0;
    const double max_stat = lm_max_statistic(incs, window, cfg.demean, nullptr, &argmax);

    const auto [c_n, a_n] = lm_normalizing_constants(incs.size());
    const double xi = (max_stat - c_n) / a_n;

    JumpTestReport report;
    report.method = Method::LM;
    report.statistic = max_stat;
    report.normalized = xi;
    report.pvalue = gumbel_pvalue(xi);
    report.tuning = {{"K_n", static_cast<double>(window)},
                     {"demean", cfg.demean ? 1.0 : 0.0},
                     {"C_n", c_n},
                     {"a_n", a_n},
                     {"argmax_index", static_cast<double>(argmax)}};
    return report;
}

std::pair<double, double> cauchy_combine(std::span<const double> pvalues,
                                         std::span<const double> weights) {
    require(!pvalues.empty(), ErrorCode::InvalidArgument,
            "cauchy_combine: empty p-value list");
    require(pvalues.size() == weights.size(), ErrorCode::InvalidArgument,
            "cauchy_combine: weight count mismatch");
    double weight_sum = 0.0;
    for (double w : weights) {
        require(w >= 0.0, ErrorCode::InvalidArgument,
                "cauchy_combine: weights must be nonnegative");
        weight_sum += w;
    }
    require(std::fabs(weight_sum - 1.0) <= 1e-9, ErrorCode::InvalidArgument,
            "cauchy_combine: weights must sum to 1");

    constexpr double kClamp = 1e-15;
    double stat = 0.0;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double p = std::clamp(pvalues[i], kClamp, 1.0 - kClamp);
        stat += weights[i] * cauchy_tail_transform(p);
    }
    return {stat, cauchy_sf(stat)};
}

std::pair<double, double> cauchy_combine(std::span<const double> pvalues) {
    std::vector<double> w(pvalues.size(), 1.0 / static_cast<double>(pvalues.size()));
    return cauchy_combine(pvalues, w);
}

double cauchy_critical(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidArgument,
            "cauchy_critical: alpha must lie strictly inside (0,1)");
    return cauchy_tail_transform(alpha);
}

double dense_shift_mu(const AjConfig& cfg, double theta, const MarkLaw& mark,
                      double tau0) {
    require(theta >= 0.0, ErrorCode::InvalidArgument,
            "dense_shift_mu: theta must be nonnegative");
    require(tau0 > 0.0, ErrorCode::InvalidArgument,
            "dense_shift_mu: tau0 must be positive");
    if (theta == 0.0) return 0.0;
    const KernelMoments moments = kernel_moments(cfg, mark);
    return theta * moments.d_pk / (gaussian_abs_moment(cfg.p) * tau0);
}

double dense_power_curve(double alpha, double mu) {
    require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidArgument,
            "dense_power_curve: alpha must lie strictly inside (0,1)");
    const double critical = cauchy_critical(alpha);
    auto integrand = [critical, mu](double z) {
        const double p_sum = normal_two_sided_pvalue(z);
        // tan(pi(1/2 - p_sum)); diverges to -inf as z -> 0 where p_sum -> 1,
        // with the rejection probability tending continuously to 0.
        const double a_z =
            cauchy_tail_transform(std::clamp(p_sum, 1e-300, 1.0 - 1e-16));
        return cauchy_sf(2.0 * critical - a_z) * norm_pdf(z - mu);
    };
    const double lo = mu - 10.0;
    const double hi = mu + 10.0;
    // Split at the integrable singular point z = 0 when it is interior.
    if (lo < 0.0 && hi > 0.0) {
        return integrate(integrand, lo, 0.0, 5e-7) +
               integrate(integrand, 0.0, hi, 5e-7);
    }
    return integrate(integrand, lo, hi, 1e-6);
}

double aj_oracle_fixed_stat(const LogPricePath& path,
                            std::span<const JumpRecord> jumps,
                            std::span<const double> spot_sigmas,
                            const AjConfig& cfg) {
    cfg.validate();
    require(!jumps.empty(), ErrorCode::InvalidArgument,
            "aj_oracle_fixed_stat: no jumps supplied");
    require(jumps.size() == spot_sigmas.size(), ErrorCode::InvalidArgument,
            "aj_oracle_fixed_stat: spot volatility count mismatch");

    double b_p = 0.0;
    double cross = 0.0;
    for (std::size_t q = 0; q < jumps.size(); ++q) {
        require(jumps[q].size != 0.0, ErrorCode::InvalidArgument,
                "aj_oracle_fixed_stat: zero jump size");
        require(spot_sigmas[q] > 0.0, ErrorCode::InvalidArgument,
                "aj_oracle_fixed_stat: spot volatility must be positive");
        const double abs_size = std::fabs(jumps[q].size);
        b_p += std::pow(abs_size, cfg.p);
        cross += std::pow(abs_size, 2.0 * cfg.p - 2.0) * spot_sigmas[q] * spot_sigmas[q];
    }
    const double tau_f_sq = cfg.p * cfg.p * (cfg.k - 1) * cross / (b_p * b_p);
    require(tau_f_sq > 0.0, ErrorCode::DegenerateVariance,
            "aj_oracle_fixed_stat: degenerate oracle variance");

    const double fine = power_variation(path, cfg.p);
    require(fine > 0.0, ErrorCode::DegeneratePath,
            "aj_oracle_fixed_stat: zero power variation");
    const double ratio = block_power_variation(path, cfg.p, cfg.k) / fine;
    return (ratio - 1.0) / (std::sqrt(path.delta) * std::sqrt(tau_f_sq));
}

}  // namespace jumplab
