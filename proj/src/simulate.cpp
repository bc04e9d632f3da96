#include "jumplab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "jumplab/errors.hpp"

namespace jumplab {

void HestonParams::validate() const {
    require(v0 > 0.0 && beta_bar > 0.0, ErrorCode::InvalidArgument,
            "HestonParams: v0 and beta_bar must be positive");
    require(kappa >= 0.0 && gamma >= 0.0, ErrorCode::InvalidArgument,
            "HestonParams: kappa and gamma must be nonnegative");
    require(std::fabs(rho) <= 1.0, ErrorCode::InvalidArgument,
            "HestonParams: |rho| must not exceed 1");
}

JumpSpec JumpSpec::dense(double theta, MarkLaw law) {
    require(theta > 0.0, ErrorCode::InvalidArgument,
            "JumpSpec::dense: theta must be positive");
    return JumpSpec{Kind::Dense, theta, law};
}

JumpSpec JumpSpec::sparse(double lambda, MarkLaw law) {
    require(lambda > 0.0, ErrorCode::InvalidArgument,
            "JumpSpec::sparse: lambda must be positive");
    return JumpSpec{Kind::Sparse, lambda, law};
}

NoiseSpec NoiseSpec::gaussian(double q_) {
    require(q_ >= 0.0, ErrorCode::InvalidArgument,
            "NoiseSpec::gaussian: q must be nonnegative");
    return NoiseSpec{Kind::Gaussian, q_};
}

NoiseSpec NoiseSpec::student_t8(double q_) {
    require(q_ >= 0.0, ErrorCode::InvalidArgument,
            "NoiseSpec::student_t8: q must be nonnegative");
    return NoiseSpec{Kind::StudentT8, q_};
}

std::pair<LogPricePath, std::vector<double>> simulate_heston(
    const HestonParams& params, std::size_t n, double delta, std::uint64_t seed) {
    params.validate();
    require(n >= 2, ErrorCode::InvalidArgument, "simulate_heston: need n >= 2");
    require(delta > 0.0, ErrorCode::InvalidArgument,
            "simulate_heston: delta must be positive");

    Rng rng(seed);
    const double sqrt_delta = std::sqrt(delta);
    const double rho_orth = std::sqrt(std::max(0.0, 1.0 - params.rho * params.rho));

    std::vector<double> x(n + 1);
    std::vector<double> v(n + 1);
    x[0] = 0.0;
    double v_raw = params.v0;
    v[0] = std::max(v_raw, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v_eff = std::max(v_raw, 0.0);
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double dw = sqrt_delta * z1;
        const double db = sqrt_delta * (params.rho * z1 + rho_orth * z2);
        x[i + 1] = x[i] - 0.5 * v_eff * delta + std::sqrt(v_eff) * dw;
        v_raw += params.kappa * (params.beta_bar - v_eff) * delta +
                 params.gamma * std::sqrt(v_eff) * db;
        v[i + 1] = std::max(v_raw, 0.0);
    }
    return {LogPricePath{std::move(x), delta, delta * static_cast<double>(n)},
            std::move(v)};
}

std::pair<LogPricePath, std::vector<JumpRecord>> attach_jumps(
    const LogPricePath& x, const std::vector<double>& variance,
    const JumpSpec& spec, std::uint64_t seed) {
    x.validate();
    require(variance.size() == x.values.size(), ErrorCode::InvalidArgument,
            "attach_jumps: variance path length mismatch");

    LogPricePath out = x;
    std::vector<JumpRecord> records;
    if (spec.kind == JumpSpec::Kind::None) return {std::move(out), std::move(records)};

    Rng rng(seed);
    const std::size_t n = x.count();
    const double delta = x.delta;

    if (spec.kind == JumpSpec::Kind::Dense) {
        const double interval_mean = spec.intensity * std::sqrt(delta);
        double shift = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const std::uint64_t count = rng.poisson(interval_mean);
            if (count > 0) {
                double marks = 0.0;
                for (std::uint64_t m = 0; m < count; ++m) marks += spec.mark.sample(rng);
                const double jump =
                    std::sqrt(variance[i - 1]) * std::sqrt(delta) * marks;
                if (jump != 0.0) {
                    shift += jump;
                    // label the record inside the carrying interval
                    records.push_back({(static_cast<double>(i) - 0.5) * delta, jump});
                }
            }
            out.values[i] += shift;
        }
        return {std::move(out), std::move(records)};
    }

    // Sparse: compound Poisson times on (0, T), level shifts onward from the
    // right-closed interval that contains each time.
    const double horizon = x.horizon;
    const std::uint64_t total = rng.poisson(spec.intensity * horizon);
    std::vector<JumpRecord> draws;
    draws.reserve(total);
    for (std::uint64_t q_idx = 0; q_idx < total; ++q_idx) {
        const double time = rng.uniform(0.0, horizon);
        const double size = spec.mark.sample(rng);
        if (size != 0.0) draws.push_back({time, size});
    }
    std::sort(draws.begin(), draws.end(),
              [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
    // Exact time ties collapse into one record.
    for (const auto& d : draws) {
        if (!records.empty() && records.back().time == d.time) {
            records.back().size += d.size;
        } else {
            records.push_back(d);
        }
    }
    for (const auto& rec : records) {
        const auto first = static_cast<std::size_t>(std::ceil(rec.time / delta));
        for (std::size_t i = std::max<std::size_t>(first, 1); i <= n; ++i) {
            out.values[i] += rec.size;
        }
    }
    return {std::move(out), std::move(records)};
}

ObservedPath attach_noise(const LogPricePath& x, const NoiseSpec& spec,
                          std::uint64_t seed) {
    if (spec.kind == NoiseSpec::Kind::None || spec.q == 0.0) return x;
    ObservedPath out = x;
    Rng rng(seed);
    if (spec.kind == NoiseSpec::Kind::Gaussian) {
        for (auto& v : out.values) v += spec.q * rng.normal();
    } else {
        const double scale = spec.q * std::sqrt(0.75);  // Var(t8) = 4/3
        for (auto& v : out.values) v += scale * rng.student_t8();
    }
    return out;
}

SimulatedDay simulate_day(const SimulationSpec& spec) {
    require(spec.days >= 1 && spec.steps_per_day >= 2, ErrorCode::InvalidArgument,
            "simulate_day: bad grid spec");
    const auto n = static_cast<std::size_t>(spec.days) *
                   static_cast<std::size_t>(spec.steps_per_day);
    const double delta = 1.0 / static_cast<double>(spec.steps_per_day);

    auto [x, v] = simulate_heston(spec.heston, n, delta,
                                  Rng::derive(spec.seed, "heston"));
    auto [with_jumps, records] =
        attach_jumps(x, v, spec.jumps, Rng::derive(spec.seed, "jumps"));
    ObservedPath observed =
        attach_noise(with_jumps, spec.noise, Rng::derive(spec.seed, "noise"));

    SimulatedDay day;
    day.latent = std::move(with_jumps);
    day.observed = std::move(observed);
    day.variance_path = std::move(v);
    day.jumps = std::move(records);
    day.seed = spec.seed;
    return day;
}

void write_day_csv(const SimulatedDay& day, const std::string& file) {
    std::ofstream out(file);
    require(out.good(), ErrorCode::IoError, "write_day_csv: cannot open " + file);
    out << "index,time,latent,observed,variance\n";
    char line[160];
    for (std::size_t i = 0; i < day.latent.values.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%.10g,%.12g,%.12g,%.12g\n", i,
                      static_cast<double>(i) * day.latent.delta,
                      day.latent.values[i], day.observed.values[i],
                      day.variance_path[i]);
        out << line;
    }
    require(out.good(), ErrorCode::IoError, "write_day_csv: write failed");
}

}  // namespace jumplab
