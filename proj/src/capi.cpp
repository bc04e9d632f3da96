#include "jumplab.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "jumplab/calibrate.hpp"
#include "jumplab/errors.hpp"
#include "jumplab/frictionless.hpp"
#include "jumplab/harness.hpp"
#include "jumplab/noise_tests.hpp"
#include "jumplab/path.hpp"
#include "jumplab/simulate.hpp"

using nlohmann::json;

struct jl_path {
    jumplab::LogPricePath path;
};

namespace {

thread_local std::string t_last_error;

jl_status status_from(jumplab::ErrorCode code) {
    using jumplab::ErrorCode;
    switch (code) {
        case ErrorCode::Ok: return JL_OK;
        case ErrorCode::InvalidArgument: return JL_ERR_INVALID_ARGUMENT;
        case ErrorCode::InsufficientData: return JL_ERR_INSUFFICIENT_DATA;
        case ErrorCode::DegeneratePath: return JL_ERR_DEGENERATE_PATH;
        case ErrorCode::DegenerateVariance: return JL_ERR_DEGENERATE_VARIANCE;
        case ErrorCode::NumericFailure: return JL_ERR_NUMERIC;
        case ErrorCode::ParseError: return JL_ERR_PARSE;
        case ErrorCode::FlatDay: return JL_ERR_FLAT_DAY;
        case ErrorCode::IoError: return JL_ERR_IO;
        case ErrorCode::Internal: return JL_ERR_INTERNAL;
    }
    return JL_ERR_INTERNAL;
}

template <typename Fn>
jl_status guarded(Fn&& fn) {
    try {
        fn();
        return JL_OK;
    } catch (const jumplab::Error& e) {
        t_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return JL_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return JL_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

json parse_json(const char* text, const char* what) {
    jumplab::require(text != nullptr, jumplab::ErrorCode::InvalidArgument,
                     std::string(what) + ": null JSON input");
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        jumplab::raise(jumplab::ErrorCode::ParseError,
                       std::string(what) + ": " + e.what());
    }
}

jumplab::SimulationSpec spec_from_json(const json& j) {
    jumplab::SimulationSpec spec;
    spec.seed = j.value("seed", 0ULL);
    spec.days = j.value("days", 1);
    spec.steps_per_day = j.value("steps_per_day", 23'400);
    if (j.contains("heston")) {
        const auto& h = j["heston"];
        spec.heston.v0 = h.value("v0", spec.heston.v0);
        spec.heston.kappa = h.value("kappa", spec.heston.kappa);
        spec.heston.beta_bar = h.value("beta_bar", spec.heston.beta_bar);
        spec.heston.gamma = h.value("gamma", spec.heston.gamma);
        spec.heston.rho = h.value("rho", spec.heston.rho);
    }
    if (j.contains("jumps")) {
        const auto& jj = j["jumps"];
        const std::string kind = jj.value("kind", "none");
        if (kind != "none") {
            const double intensity = jj.value("intensity", 0.0);
            jumplab::MarkLaw mark =
                jj.contains("mark_value")
                    ? jumplab::MarkLaw::point_mass(jj["mark_value"].get<double>())
                    : jumplab::MarkLaw::gaussian(jj.value("mark_variance", 0.05));
            if (kind == "dense") {
                spec.jumps = jumplab::JumpSpec::dense(intensity, mark);
            } else if (kind == "sparse") {
                spec.jumps = jumplab::JumpSpec::sparse(intensity, mark);
            } else {
                jumplab::raise(jumplab::ErrorCode::InvalidArgument,
                               "unknown jump kind: " + kind);
            }
        }
    }
    if (j.contains("noise")) {
        const auto& nj = j["noise"];
        const std::string kind = nj.value("kind", "none");
        const double q = nj.value("q", 0.0);
        if (kind == "gaussian") {
            spec.noise = jumplab::NoiseSpec::gaussian(q);
        } else if (kind == "t8" || kind == "student_t8") {
            spec.noise = jumplab::NoiseSpec::student_t8(q);
        } else if (kind != "none") {
            jumplab::raise(jumplab::ErrorCode::InvalidArgument,
                           "unknown noise kind: " + kind);
        }
    }
    return spec;
}

json report_to_json(const jumplab::JumpTestReport& report) {
    json j;
    j["method"] = jumplab::method_name(report.method);
    j["statistic"] = report.statistic;
    j["normalized"] = report.normalized;
    j["pvalue"] = report.pvalue;
    j["tuning"] = report.tuning;
    return j;
}

// Single-path test dispatch shared by the CLI; mirrors the harness method
// conventions (bootstrap-calibrated LM, double-bootstrap LA).
json run_single_test(const jumplab::LogPricePath& path, const json& options) {
    using namespace jumplab;
    const std::string name = options.value("method", "cc");
    const Method method = method_from_name(name);
    const double level = options.value("level", 0.05);
    const std::uint64_t seed = options.value("seed", 0ULL);

    BootstrapConfig bs;
    if (options.contains("bootstrap") && options["bootstrap"].is_object()) {
        bs.b1 = options["bootstrap"].value("b1", bs.b1);
        bs.b2 = options["bootstrap"].value("b2", bs.b2);
    }
    bs.alpha = level;
    bs.seed = Rng::derive(seed, "single-test");
    const bool use_bootstrap = !options.contains("bootstrap") ||
                               !options["bootstrap"].is_boolean() ||
                               options["bootstrap"].get<bool>();

    auto aj_report = [&](double p, int k) {
        AjConfig cfg;
        cfg.p = p;
        cfg.k = k;
        return aj_test(path, cfg, kernel_moments(cfg));
    };
    auto lm_pvalue_boot = [&]() {
        LmConfig cfg;
        cfg.window = options.value("window", 0);
        return lm_bootstrap_pvalue(path, cfg, bs);
    };
    auto pa_config = [&]() {
        const int p = options.value("p_even", 4);
        const double theta = options.value("theta", 1.0);
        if (options.contains("k_n") && options.contains("r_n")) {
            return PaConfig::make(p, theta, options["k_n"].get<int>(),
                                  options["r_n"].get<int>(),
                                  options.value("h_exponent", 2.0));
        }
        return PaConfig::for_grid(p, theta, path.delta,
                                  options.value("h_exponent", 2.0),
                                  options.value("rn_exponent", 0.85));
    };
    auto la_config = [&]() {
        LaConfig cfg;
        cfg.M_n = options.value("M_n", 0);
        cfg.lambda = options.value("lambda", 1.0);
        cfg.tsrsv_cK = options.value("cK", 1.0);
        cfg.tsrsv_ch = options.value("ch", 1.0);
        return cfg;
    };

    json out;
    JumpTestReport report;
    switch (method) {
        case Method::AJ: {
            report = aj_report(options.value("p", 4.0), options.value("k", 2));
            break;
        }
        case Method::LM: {
            LmConfig cfg;
            cfg.window = options.value("window", 0);
            cfg.demean = options.value("demean", true);
            report = lm_test(path, cfg);
            if (use_bootstrap) {
                const double boot_p = lm_pvalue_boot();
                report.tuning["asymptotic_pvalue"] = report.pvalue;
                report.tuning["b1"] = bs.b1;
                report.pvalue = boot_p;
            }
            break;
        }
        case Method::CC: {
            const auto aj = aj_report(options.value("p", 4.0), options.value("k", 2));
            const double lm_p = use_bootstrap
                                    ? lm_pvalue_boot()
                                    : lm_test(path, LmConfig{}).pvalue;
            const double ps[2] = {aj.pvalue, lm_p};
            const auto [stat, pvalue] = cauchy_combine(ps);
            report.method = Method::CC;
            report.statistic = stat;
            report.normalized = stat;
            report.pvalue = pvalue;
            report.tuning = {{"p_aj", aj.pvalue},
                             {"p_lm", lm_p},
                             {"k", static_cast<double>(options.value("k", 2))}};
            break;
        }
        case Method::PA: {
            report = pa_test(path, pa_config());
            break;
        }
        case Method::LA: {
            const LaConfig cfg = la_config();
            const auto spot = tsrsv_spot(path, cfg);
            report = la_test(path, cfg, spot);
            if (use_bootstrap) {
                const auto decision = double_bootstrap_decision(path, cfg, bs);
                report.tuning["asymptotic_pvalue"] = report.pvalue;
                report.tuning["threshold"] = decision.threshold;
                report.tuning["b1"] = bs.b1;
                report.tuning["b2"] = bs.b2;
                report.pvalue = decision.p_star;
                out["reject"] = decision.reject;
            }
            break;
        }
        case Method::CCN: {
            const auto pa = pa_test(path, pa_config());
            const LaConfig cfg = la_config();
            double la_p;
            if (use_bootstrap) {
                la_p = double_bootstrap_decision(path, cfg, bs).p_star;
            } else {
                la_p = la_test(path, cfg, tsrsv_spot(path, cfg)).pvalue;
            }
            const auto [stat, pvalue] = noisy_cauchy(pa.pvalue, la_p);
            report.method = Method::CCN;
            report.statistic = stat;
            report.normalized = stat;
            report.pvalue = pvalue;
            report.tuning = {{"p_pa", pa.pvalue}, {"p_la", la_p}};
            break;
        }
    }

    out.update(report_to_json(report));
    out["level"] = level;
    if (!out.contains("reject")) out["reject"] = report.pvalue <= level;
    return out;
}

}  // namespace

extern "C" {

JUMPLAB_API const char* jl_version(void) { return jumplab::version(); }

JUMPLAB_API const char* jl_last_error(void) { return t_last_error.c_str(); }

JUMPLAB_API void jl_string_free(char* s) { delete[] s; }

JUMPLAB_API jl_status jl_path_create(const double* values, size_t count,
                                     double delta, double horizon, jl_path** out) {
    return guarded([&] {
        jumplab::require(values != nullptr && out != nullptr,
                         jumplab::ErrorCode::InvalidArgument,
                         "jl_path_create: null argument");
        *out = new jl_path{jumplab::make_path(
            std::vector<double>(values, values + count), delta, horizon)};
    });
}

JUMPLAB_API jl_status jl_path_from_csv(const char* file, const char* session_start,
                                       const char* session_end, jl_path** out,
                                       char** metadata_json) {
    return guarded([&] {
        jumplab::require(file && session_start && session_end && out,
                         jumplab::ErrorCode::InvalidArgument,
                         "jl_path_from_csv: null argument");
        auto day = jumplab::ingest_day_csv(file, session_start, session_end);
        if (metadata_json) {
            json meta;
            meta["rows_total"] = day.rows_total;
            meta["rows_in_session"] = day.rows_in_session;
            meta["filled_gaps"] = day.filled_gaps;
            meta["spacing_seconds"] = day.spacing_seconds;
            meta["n"] = day.path.count();
            *metadata_json = dup_string(meta.dump());
        }
        *out = new jl_path{std::move(day.path)};
    });
}

JUMPLAB_API void jl_path_free(jl_path* path) { delete path; }

JUMPLAB_API size_t jl_path_count(const jl_path* path) {
    return path ? path->path.count() : 0;
}

JUMPLAB_API double jl_path_delta(const jl_path* path) {
    return path ? path->path.delta : 0.0;
}

JUMPLAB_API double jl_path_horizon(const jl_path* path) {
    return path ? path->path.horizon : 0.0;
}

JUMPLAB_API jl_status jl_path_values(const jl_path* path, double* out, size_t cap) {
    return guarded([&] {
        jumplab::require(path && out, jumplab::ErrorCode::InvalidArgument,
                         "jl_path_values: null argument");
        jumplab::require(cap >= path->path.values.size(),
                         jumplab::ErrorCode::InvalidArgument,
                         "jl_path_values: buffer too small");
        std::memcpy(out, path->path.values.data(),
                    path->path.values.size() * sizeof(double));
    });
}

JUMPLAB_API jl_status jl_path_aggregate(const jl_path* path, int factor,
                                        jl_path** out, size_t* dropped) {
    return guarded([&] {
        jumplab::require(path && out, jumplab::ErrorCode::InvalidArgument,
                         "jl_path_aggregate: null argument");
        std::size_t dropped_count = 0;
        auto coarse = jumplab::aggregate_last_tick(path->path, factor, &dropped_count);
        if (dropped) *dropped = dropped_count;
        *out = new jl_path{std::move(coarse)};
    });
}

JUMPLAB_API jl_status jl_simulate_day(const char* spec_json, jl_path** latent,
                                      jl_path** observed, char** jumps_json) {
    return guarded([&] {
        const auto spec = spec_from_json(parse_json(spec_json, "jl_simulate_day"));
        auto day = jumplab::simulate_day(spec);
        if (jumps_json) {
            json arr = json::array();
            for (const auto& rec : day.jumps) {
                arr.push_back({{"time", rec.time}, {"size", rec.size}});
            }
            *jumps_json = dup_string(arr.dump());
        }
        if (latent) *latent = new jl_path{std::move(day.latent)};
        if (observed) *observed = new jl_path{std::move(day.observed)};
    });
}

JUMPLAB_API jl_status jl_simulate_to_csv(const char* spec_json, const char* out_file) {
    return guarded([&] {
        jumplab::require(out_file != nullptr, jumplab::ErrorCode::InvalidArgument,
                         "jl_simulate_to_csv: null output file");
        const auto spec = spec_from_json(parse_json(spec_json, "jl_simulate_to_csv"));
        jumplab::write_day_csv(jumplab::simulate_day(spec), out_file);
    });
}

JUMPLAB_API jl_status jl_test_path(const jl_path* path, const char* options_json,
                                   char** report_json) {
    return guarded([&] {
        jumplab::require(path && report_json, jumplab::ErrorCode::InvalidArgument,
                         "jl_test_path: null argument");
        const json options = parse_json(options_json ? options_json : "{}",
                                        "jl_test_path");
        *report_json = dup_string(run_single_test(path->path, options).dump());
    });
}

JUMPLAB_API jl_status jl_experiment_run(const char* config_json,
                                        const char* out_csv_file,
                                        const char* sidecar_json_file,
                                        char** summary_json) {
    return guarded([&] {
        jumplab::require(config_json != nullptr,
                         jumplab::ErrorCode::InvalidArgument,
                         "jl_experiment_run: null config");
        const auto cfg = jumplab::ExperimentConfig::from_json(config_json);
        const auto result = jumplab::run_experiment(cfg);
        if (out_csv_file) jumplab::write_result_csv(result, out_csv_file);
        if (sidecar_json_file) jumplab::write_sidecar_json(cfg, sidecar_json_file);
        if (summary_json) {
            json rows = json::array();
            for (const auto& r : result.rows) {
                rows.push_back({{"design", r.design},
                                {"grid_seconds", r.grid_seconds},
                                {"method", r.method},
                                {"alt_param", r.alt_param},
                                {"level", r.level},
                                {"rejection_frequency", r.rejection_frequency},
                                {"replications", r.replications},
                                {"failed", r.failed},
                                {"mc_std_error", r.mc_std_error}});
            }
            *summary_json = dup_string(json{{"rows", rows}}.dump());
        }
    });
}

JUMPLAB_API jl_status jl_bh_select(const double* pvalues, size_t count, double q,
                                   int* selected) {
    return guarded([&] {
        jumplab::require(pvalues && selected, jumplab::ErrorCode::InvalidArgument,
                         "jl_bh_select: null argument");
        const std::vector<double> pv(pvalues, pvalues + count);
        const auto chosen = jumplab::bh_select(pv, q);
        for (size_t i = 0; i < count; ++i) selected[i] = 0;
        for (auto idx : chosen) selected[idx] = 1;
    });
}

}  // extern "C"
