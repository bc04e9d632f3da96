#include <doctest.h>

#include <cmath>

#include "jumplab/errors.hpp"
#include "jumplab/simulate.hpp"
#include "support/stats_check.hpp"

using namespace jumplab;

TEST_CASE("constant-variance reduction when kappa = gamma = 0") {
    HestonParams params;
    params.kappa = 0.0;
    params.gamma = 0.0;
    params.v0 = 0.16;
    const std::size_t n = 23'400;
    const auto [path, variance] = simulate_heston(params, n, 1.0 / double(n), 5);
    for (double v : variance) CHECK(v == 0.16);

    const auto incs = increments(path);
    double sum_sq = 0.0;
    for (double d : incs) sum_sq += d * d;
    CHECK(sum_sq / double(n) ==
          doctest::Approx(0.16 / double(n)).epsilon(0.05));
}

TEST_CASE("paper-default parameters give the stationary mean variance") {
    HestonParams params;  // defaults: v0 = beta_bar = 0.16, kappa 5, gamma 0.5
    double total_rv = 0.0;
    const int days = 200;
    for (int d = 0; d < days; ++d) {
        const auto [path, variance] =
            simulate_heston(params, 23'400, 1.0 / 23'400.0, 100 + d);
        const auto incs = increments(path);
        for (double dx : incs) total_rv += dx * dx;
    }
    CHECK(total_rv / days == doctest::Approx(0.16).epsilon(0.10));
}

TEST_CASE("leverage correlation is reproduced") {
    HestonParams params;
    const std::size_t n = 1'000'000;
    const auto [path, variance] = simulate_heston(params, n, 1.0 / double(n), 9);
    const auto incs = increments(path);
    // reconstruct shocks: dW ~ dX/sqrt(V dt), dB ~ dV/(gamma sqrt(V dt))
    double sw = 0.0, sb = 0.0, swb = 0.0, sww = 0.0, sbb = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double v = variance[i];
        if (v <= 1e-12) continue;
        const double denom = std::sqrt(v / double(n));
        const double zw = (incs[i] + 0.5 * v / double(n)) / denom;
        const double zb =
            (variance[i + 1] - v - params.kappa * (params.beta_bar - v) / double(n)) /
            (params.gamma * denom);
        sw += zw;
        sb += zb;
        swb += zw * zb;
        sww += zw * zw;
        sbb += zb * zb;
        ++used;
    }
    const double m = double(used);
    const double corr = (swb / m - sw / m * sb / m) /
                        std::sqrt((sww / m - sw / m * sw / m) *
                                  (sbb / m - sb / m * sb / m));
    CHECK(std::fabs(corr - params.rho) < 0.05);
}

TEST_CASE("attach_jumps none is the identity") {
    HestonParams params;
    const auto [path, variance] = simulate_heston(params, 1'000, 1e-3, 3);
    const auto [same, records] = attach_jumps(path, variance, JumpSpec::none(), 1);
    CHECK(same.values == path.values);
    CHECK(records.empty());
}

TEST_CASE("sparse jump counts have the Poisson mean") {
    HestonParams params;
    const auto [path, variance] = simulate_heston(params, 2'000, 1.0 / 2'000.0, 4);
    const auto spec = JumpSpec::sparse(2.5, MarkLaw::gaussian(0.05));
    double total = 0.0;
    const int reps = 10'000;
    for (int r = 0; r < reps; ++r) {
        total += double(attach_jumps(path, variance, spec, 50 + r).second.size());
    }
    CHECK(total / reps == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("sparse jumps are level shifts from the containing interval onward") {
    HestonParams params;
    params.gamma = 0.0;
    const auto [path, variance] = simulate_heston(params, 500, 1.0 / 500.0, 12);
    const auto spec = JumpSpec::sparse(3.0, MarkLaw::gaussian(0.05));
    const auto [shifted, records] = attach_jumps(path, variance, spec, 6);
    REQUIRE(!records.empty());
    for (std::size_t q = 1; q < records.size(); ++q) {
        CHECK(records[q].time > records[q - 1].time);
    }
    // cumulative level difference at the end equals the sum of sizes
    double total = 0.0;
    for (const auto& r : records) total += r.size;
    CHECK(shifted.values.back() - path.values.back() == doctest::Approx(total));
    // before the first jump, nothing moved
    const auto first_index =
        static_cast<std::size_t>(std::ceil(records.front().time / path.delta));
    CHECK(shifted.values[first_index - 1] == path.values[first_index - 1]);
}

TEST_CASE("dense mark totals follow theta n sqrt(delta)") {
    HestonParams params;
    const std::size_t n = 23'400;
    const auto [path, variance] = simulate_heston(params, n, 1.0 / double(n), 8);
    const double theta = 300.0;
    const auto spec = JumpSpec::dense(theta, MarkLaw::gaussian(1.0));
    // count marks via Poisson totals across days
    double marks = 0.0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        Rng rng(Rng::derive(1'000 + r, "count-check"));
        for (std::size_t i = 0; i < n; ++i) {
            marks += double(rng.poisson(theta * std::sqrt(path.delta)));
        }
    }
    const double expected = theta * double(n) * std::sqrt(path.delta);
    CHECK(marks / reps == doctest::Approx(expected).epsilon(0.01));
    // and the attach path actually injects records
    const auto [with_jumps, records] = attach_jumps(path, variance, spec, 77);
    CHECK(!records.empty());
}

TEST_CASE("attach_noise variances") {
    const auto flat = make_path(std::vector<double>(1'000'001, 0.0), 1e-6, 1.0);

    const auto same = attach_noise(flat, NoiseSpec::none(), 3);
    CHECK(same.values == flat.values);

    const auto gauss = attach_noise(flat, NoiseSpec::gaussian(0.005), 3);
    CHECK(testsupport::variance_of(gauss.values) ==
          doctest::Approx(2.5e-5).epsilon(0.03));

    const auto t8 = attach_noise(flat, NoiseSpec::student_t8(0.01), 4);
    CHECK(testsupport::variance_of(t8.values) ==
          doctest::Approx(1e-4).epsilon(0.03));
}

TEST_CASE("simulate_day determinism and no-jump reduction") {
    SimulationSpec spec;
    spec.jumps = JumpSpec::sparse(2.0, MarkLaw::gaussian(0.05));
    spec.noise = NoiseSpec::gaussian(0.005);
    spec.steps_per_day = 2'000;
    spec.seed = 99;
    const auto a = simulate_day(spec);
    const auto b = simulate_day(spec);
    CHECK(a.latent.values == b.latent.values);
    CHECK(a.observed.values == b.observed.values);
    CHECK(a.jumps.size() == b.jumps.size());

    SimulationSpec clean = spec;
    clean.jumps = JumpSpec::none();
    clean.noise = NoiseSpec::none();
    const auto bare = simulate_day(clean);
    const auto [direct, variance] = simulate_heston(
        clean.heston, 2'000, 1.0 / 2'000.0, Rng::derive(clean.seed, "heston"));
    CHECK(bare.latent.values == direct.values);
    CHECK(bare.observed.values == direct.values);
}

TEST_CASE("substreams give near-independent days") {
    SimulationSpec spec;
    spec.steps_per_day = 10'000;
    spec.seed = Rng::derive(123, std::uint64_t{0});
    const auto day0 = simulate_day(spec);
    spec.seed = Rng::derive(123, std::uint64_t{1});
    const auto day1 = simulate_day(spec);
    const auto r0 = increments(day0.latent);
    const auto r1 = increments(day1.latent);
    double dot = 0.0, n0 = 0.0, n1 = 0.0;
    for (std::size_t i = 0; i < r0.size(); ++i) {
        dot += r0[i] * r1[i];
        n0 += r0[i] * r0[i];
        n1 += r1[i] * r1[i];
    }
    CHECK(std::fabs(dot / std::sqrt(n0 * n1)) < 0.05);
}
