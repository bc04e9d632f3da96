#include "jumplab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "jumplab/errors.hpp"
#include "jumplab/frictionless.hpp"
#include "jumplab/math_util.hpp"
#include "jumplab/noise_tests.hpp"
#include "jumplab/parallel.hpp"

namespace jumplab {

using nlohmann::json;

const char* version() { return "0.1.0"; }

const char* design_name(Design d) {
    switch (d) {
        case Design::SizeNull: return "size_null";
        case Design::Dense: return "dense";
        case Design::Sparse: return "sparse";
        case Design::NoisySize: return "noisy_size";
        case Design::NoisyDense: return "noisy_dense";
        case Design::NoisySparse: return "noisy_sparse";
    }
    return "?";
}

Design design_from_name(const std::string& name) {
    if (name == "size_null") return Design::SizeNull;
    if (name == "dense") return Design::Dense;
    if (name == "sparse") return Design::Sparse;
    if (name == "noisy_size") return Design::NoisySize;
    if (name == "noisy_dense") return Design::NoisyDense;
    if (name == "noisy_sparse") return Design::NoisySparse;
    raise(ErrorCode::InvalidArgument, "unknown design: " + name);
}

bool design_is_noisy(Design d) {
    return d == Design::NoisySize || d == Design::NoisyDense ||
           d == Design::NoisySparse;
}

std::string MethodSpec::label() const {
    if (method == Method::AJ || method == Method::CC) {
        return std::string(method_name(method)) + "-" + std::to_string(k);
    }
    return method_name(method);
}

void ExperimentConfig::validate() const {
    require(!grids.empty(), ErrorCode::InvalidArgument, "config: no grids");
    for (int g : grids) {
        require(g >= 1, ErrorCode::InvalidArgument, "config: grid seconds must be >= 1");
    }
    require(!methods.empty(), ErrorCode::InvalidArgument, "config: no methods");
    require(replications >= 1, ErrorCode::InvalidArgument,
            "config: replications must be >= 1");
    require(!levels.empty(), ErrorCode::InvalidArgument, "config: no levels");
    for (double a : levels) {
        require(a > 0.0 && a < 1.0, ErrorCode::InvalidArgument,
                "config: levels must lie strictly inside (0,1)");
    }
    require(!alt_params.empty(), ErrorCode::InvalidArgument, "config: no alt_params");
    heston.validate();
    bootstrap.validate();
    require(days >= 1 && steps_per_day >= 2, ErrorCode::InvalidArgument,
            "config: bad grid spec");
}

namespace {

MethodSpec method_spec_from_json(const json& j) {
    MethodSpec spec;
    spec.method = method_from_name(j.at("method").get<std::string>());
    spec.p = j.value("p", spec.p);
    spec.k = j.value("k", spec.k);
    spec.window = j.value("window", spec.window);
    spec.demean = j.value("demean", spec.demean);
    spec.k_n = j.value("k_n", spec.k_n);
    spec.r_n = j.value("r_n", spec.r_n);
    spec.theta = j.value("theta", spec.theta);
    spec.h_exponent = j.value("h_exponent", spec.h_exponent);
    spec.rn_exponent = j.value("rn_exponent", spec.rn_exponent);
    spec.M_n = j.value("M_n", spec.M_n);
    spec.lambda = j.value("lambda", spec.lambda);
    spec.tsrsv_cK = j.value("cK", spec.tsrsv_cK);
    spec.tsrsv_ch = j.value("ch", spec.tsrsv_ch);
    return spec;
}

json method_spec_to_json(const MethodSpec& spec) {
    json j;
    j["method"] = method_name(spec.method);
    j["p"] = spec.p;
    j["k"] = spec.k;
    j["window"] = spec.window;
    j["demean"] = spec.demean;
    j["k_n"] = spec.k_n;
    j["r_n"] = spec.r_n;
    j["theta"] = spec.theta;
    j["h_exponent"] = spec.h_exponent;
    j["rn_exponent"] = spec.rn_exponent;
    j["M_n"] = spec.M_n;
    j["lambda"] = spec.lambda;
    j["cK"] = spec.tsrsv_cK;
    j["ch"] = spec.tsrsv_ch;
    return j;
}

NoiseSpec noise_from_json(const json& j) {
    const std::string kind = j.value("kind", "none");
    const double q = j.value("q", 0.0);
    if (kind == "none") return NoiseSpec::none();
    if (kind == "gaussian") return NoiseSpec::gaussian(q);
    if (kind == "t8" || kind == "student_t8") return NoiseSpec::student_t8(q);
    raise(ErrorCode::InvalidArgument, "unknown noise kind: " + kind);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        raise(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        cfg.design = design_from_name(j.at("design").get<std::string>());
        cfg.grids = j.value("grids", cfg.grids);
        cfg.alt_params = j.value("alt_params", cfg.alt_params);
        cfg.mark_variance = j.value("mark_variance", cfg.mark_variance);
        for (const auto& m : j.at("methods")) {
            cfg.methods.push_back(method_spec_from_json(m));
        }
        cfg.replications = j.value("replications", cfg.replications);
        cfg.levels = j.value("levels", cfg.levels);
        if (j.contains("heston")) {
            const auto& h = j["heston"];
            cfg.heston.v0 = h.value("v0", cfg.heston.v0);
            cfg.heston.kappa = h.value("kappa", cfg.heston.kappa);
            cfg.heston.beta_bar = h.value("beta_bar", cfg.heston.beta_bar);
            cfg.heston.gamma = h.value("gamma", cfg.heston.gamma);
            cfg.heston.rho = h.value("rho", cfg.heston.rho);
        }
        if (j.contains("noise")) cfg.noise = noise_from_json(j["noise"]);
        cfg.days = j.value("days", design_is_noisy(cfg.design) ? 5 : 1);
        cfg.steps_per_day = j.value("steps_per_day", cfg.steps_per_day);
        if (j.contains("bootstrap")) {
            const auto& b = j["bootstrap"];
            cfg.bootstrap.b1 = b.value("b1", cfg.bootstrap.b1);
            cfg.bootstrap.b2 = b.value("b2", cfg.bootstrap.b2);
            cfg.bootstrap.alpha = b.value("alpha", cfg.bootstrap.alpha);
        }
        cfg.base_seed = j.value("base_seed", cfg.base_seed);
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        raise(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["design"] = design_name(design);
    j["grids"] = grids;
    j["alt_params"] = alt_params;
    j["mark_variance"] = mark_variance;
    json methods_json = json::array();
    for (const auto& m : methods) methods_json.push_back(method_spec_to_json(m));
    j["methods"] = methods_json;
    j["replications"] = replications;
    j["levels"] = levels;
    j["heston"] = {{"v0", heston.v0},
                   {"kappa", heston.kappa},
                   {"beta_bar", heston.beta_bar},
                   {"gamma", heston.gamma},
                   {"rho", heston.rho}};
    const char* noise_kind = noise.kind == NoiseSpec::Kind::None ? "none"
                             : noise.kind == NoiseSpec::Kind::Gaussian ? "gaussian"
                                                                       : "t8";
    j["noise"] = {{"kind", noise_kind}, {"q", noise.q}};
    j["days"] = days;
    j["steps_per_day"] = steps_per_day;
    j["bootstrap"] = {{"b1", bootstrap.b1},
                      {"b2", bootstrap.b2},
                      {"alpha", bootstrap.alpha}};
    j["base_seed"] = base_seed;
    return j.dump(2);
}

namespace {

// Outcome codes per (rep, cell): 0 accept, 1 reject, 2 failed.
constexpr unsigned char kAccept = 0;
constexpr unsigned char kReject = 1;
constexpr unsigned char kFailed = 2;

struct CellIndex {
    std::size_t alt_count, grid_count, method_count, level_count;

    std::size_t size() const {
        return alt_count * grid_count * method_count * level_count;
    }
    std::size_t at(std::size_t a, std::size_t g, std::size_t m, std::size_t l) const {
        return ((a * grid_count + g) * method_count + m) * level_count + l;
    }
};

JumpSpec jump_spec_for(const ExperimentConfig& cfg, double alt) {
    switch (cfg.design) {
        case Design::SizeNull:
        case Design::NoisySize:
            return JumpSpec::none();
        case Design::Dense:
        case Design::NoisyDense:
            return alt > 0.0
                       ? JumpSpec::dense(alt, MarkLaw::gaussian(cfg.mark_variance))
                       : JumpSpec::none();
        case Design::Sparse:
        case Design::NoisySparse:
            return alt > 0.0
                       ? JumpSpec::sparse(alt, MarkLaw::gaussian(cfg.mark_variance))
                       : JumpSpec::none();
    }
    return JumpSpec::none();
}

// Shared per-(replication, grid) evaluations so e.g. the combined test and
// its components reuse one bootstrap run.
struct GridEvaluation {
    const ExperimentConfig* cfg = nullptr;
    const LogPricePath* latent = nullptr;
    const ObservedPath* observed = nullptr;
    std::uint64_t rep_seed = 0;
    int grid_seconds = 0;

    std::map<std::pair<double, int>, double> aj_pvalues;
    std::optional<double> lm_boot_pvalue;
    std::map<std::pair<int, int>, double> pa_pvalues;
    std::optional<DoubleBootstrapResult> la_result;

    double aj_pvalue(const MethodSpec& spec) {
        const auto key = std::make_pair(spec.p, spec.k);
        auto it = aj_pvalues.find(key);
        if (it != aj_pvalues.end()) return it->second;
        AjConfig aj_cfg;
        aj_cfg.p = spec.p;
        aj_cfg.k = spec.k;
        const KernelMoments moments = kernel_moments(aj_cfg);
        const double p = aj_test(*latent, aj_cfg, moments).pvalue;
        aj_pvalues.emplace(key, p);
        return p;
    }

    double lm_pvalue(const MethodSpec& spec) {
        if (lm_boot_pvalue) return *lm_boot_pvalue;
        LmConfig lm_cfg;
        lm_cfg.window = spec.window;
        lm_cfg.demean = spec.demean;
        BootstrapConfig bs = cfg->bootstrap;
        bs.seed = Rng::derive(Rng::derive(rep_seed, "lm-boot"),
                              static_cast<std::uint64_t>(grid_seconds));
        lm_boot_pvalue = lm_bootstrap_pvalue(*latent, lm_cfg, bs);
        return *lm_boot_pvalue;
    }

    double pa_pvalue(const MethodSpec& spec) {
        PaConfig pa_cfg = resolve_pa(spec);
        const auto key = std::make_pair(pa_cfg.k_n, pa_cfg.r_n);
        auto it = pa_pvalues.find(key);
        if (it != pa_pvalues.end()) return it->second;
        const double p = pa_test(*observed, pa_cfg).pvalue;
        pa_pvalues.emplace(key, p);
        return p;
    }

    const DoubleBootstrapResult& la_decision(const MethodSpec& spec) {
        if (!la_result) {
            LaConfig la_cfg = resolve_la(spec);
            BootstrapConfig bs = cfg->bootstrap;
            bs.seed = Rng::derive(Rng::derive(rep_seed, "la-boot"),
                                  static_cast<std::uint64_t>(grid_seconds));
            la_result = double_bootstrap_decision(*observed, la_cfg, bs);
        }
        return *la_result;
    }

    PaConfig resolve_pa(const MethodSpec& spec) const {
        if (spec.k_n > 0 && spec.r_n > 0) {
            return PaConfig::make(static_cast<int>(spec.p), spec.theta, spec.k_n,
                                  spec.r_n, spec.h_exponent);
        }
        return PaConfig::for_grid(static_cast<int>(spec.p), spec.theta,
                                  observed->delta, spec.h_exponent,
                                  spec.rn_exponent);
    }

    LaConfig resolve_la(const MethodSpec& spec) const {
        LaConfig la_cfg;
        la_cfg.M_n = spec.M_n;
        la_cfg.lambda = spec.lambda;
        la_cfg.tsrsv_cK = spec.tsrsv_cK;
        la_cfg.tsrsv_ch = spec.tsrsv_ch;
        return la_cfg;
    }
};

// Per-level rejection decisions for one method on one prepared grid.
void evaluate_method(GridEvaluation& eval, const MethodSpec& spec,
                     const std::vector<double>& levels,
                     unsigned char* out /* level_count entries */) {
    auto fill_from_pvalue = [&](double p) {
        for (std::size_t l = 0; l < levels.size(); ++l) {
            out[l] = p <= levels[l] ? kReject : kAccept;
        }
    };
    switch (spec.method) {
        case Method::AJ:
            fill_from_pvalue(eval.aj_pvalue(spec));
            return;
        case Method::LM:
            fill_from_pvalue(eval.lm_pvalue(spec));
            return;
        case Method::CC: {
            const double ps[2] = {eval.aj_pvalue(spec), eval.lm_pvalue(spec)};
            fill_from_pvalue(cauchy_combine(ps).second);
            return;
        }
        case Method::PA:
            fill_from_pvalue(eval.pa_pvalue(spec));
            return;
        case Method::LA: {
            const auto& result = eval.la_decision(spec);
            for (std::size_t l = 0; l < levels.size(); ++l) {
                out[l] = double_bootstrap_reject_at(result, levels[l]) ? kReject
                                                                       : kAccept;
            }
            return;
        }
        case Method::CCN: {
            const double ps[2] = {eval.pa_pvalue(spec), eval.la_decision(spec).p_star};
            fill_from_pvalue(cauchy_combine(ps).second);
            return;
        }
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    if (const char* env = std::getenv("JUMPLAB_SEED")) {
        cfg.base_seed = std::strtoull(env, nullptr, 10);
    }
    cfg.validate();

    // Warm the kernel-moment cache up front so worker tasks only read it.
    for (const auto& m : cfg.methods) {
        if (m.method == Method::AJ || m.method == Method::CC) {
            AjConfig aj_cfg;
            aj_cfg.p = m.p;
            aj_cfg.k = m.k;
            kernel_moments(aj_cfg);
        }
    }

    const CellIndex index{cfg.alt_params.size(), cfg.grids.size(),
                          cfg.methods.size(), cfg.levels.size()};
    const auto reps = static_cast<std::size_t>(cfg.replications);
    std::vector<std::vector<unsigned char>> outcomes(
        reps, std::vector<unsigned char>(index.size(), kFailed));

    parallel_for(reps, [&](std::size_t rep) {
        const std::uint64_t rep_seed = Rng::derive(cfg.base_seed, rep);
        auto& cells = outcomes[rep];
        for (std::size_t a = 0; a < cfg.alt_params.size(); ++a) {
            SimulationSpec sim;
            sim.heston = cfg.heston;
            sim.jumps = jump_spec_for(cfg, cfg.alt_params[a]);
            sim.noise = cfg.noise;
            sim.days = cfg.days;
            sim.steps_per_day = cfg.steps_per_day;
            sim.seed = rep_seed;
            const SimulatedDay day = simulate_day(sim);

            for (std::size_t g = 0; g < cfg.grids.size(); ++g) {
                LogPricePath latent;
                ObservedPath observed;
                try {
                    latent = aggregate_last_tick(day.latent, cfg.grids[g]);
                    observed = aggregate_last_tick(day.observed, cfg.grids[g]);
                } catch (const Error&) {
                    continue;  // cells stay failed
                }
                GridEvaluation eval;
                eval.cfg = &cfg;
                eval.latent = &latent;
                eval.observed = &observed;
                eval.rep_seed = rep_seed;
                eval.grid_seconds = cfg.grids[g];
                for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                    unsigned char* out = &cells[index.at(a, g, m, 0)];
                    try {
                        evaluate_method(eval, cfg.methods[m], cfg.levels, out);
                    } catch (const Error&) {
                        for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
                            out[l] = kFailed;
                        }
                    }
                }
            }
        }
    });

    ExperimentResult result;
    for (std::size_t a = 0; a < cfg.alt_params.size(); ++a) {
        for (std::size_t g = 0; g < cfg.grids.size(); ++g) {
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                for (std::size_t l = 0; l < cfg.levels.size(); ++l) {
                    std::size_t rejects = 0;
                    std::size_t valid = 0;
                    for (std::size_t rep = 0; rep < reps; ++rep) {
                        const unsigned char v = outcomes[rep][index.at(a, g, m, l)];
                        if (v == kFailed) continue;
                        ++valid;
                        rejects += v == kReject ? 1 : 0;
                    }
                    ExperimentRow row;
                    row.design = design_name(cfg.design);
                    row.grid_seconds = cfg.grids[g];
                    row.method = cfg.methods[m].label();
                    row.alt_param = cfg.alt_params[a];
                    row.level = cfg.levels[l];
                    row.replications = static_cast<int>(valid);
                    row.failed = static_cast<int>(reps - valid);
                    const double freq =
                        valid == 0 ? 0.0
                                   : static_cast<double>(rejects) /
                                         static_cast<double>(valid);
                    row.rejection_frequency = freq;
                    row.mc_std_error =
                        valid == 0 ? 0.0
                                   : std::sqrt(freq * (1.0 - freq) /
                                               static_cast<double>(valid));
                    result.rows.push_back(std::move(row));
                }
            }
        }
    }
    return result;
}

void write_result_csv(const ExperimentResult& result, const std::string& file) {
    std::ofstream out(file);
    require(out.good(), ErrorCode::IoError, "write_result_csv: cannot open " + file);
    out << "design,grid_seconds,method,alt_param,level,rejection_frequency,"
           "replications,failed,mc_std_error\n";
    char line[256];
    for (const auto& r : result.rows) {
        std::snprintf(line, sizeof(line), "%s,%d,%s,%.10g,%.10g,%.10g,%d,%d,%.10g\n",
                      r.design.c_str(), r.grid_seconds, r.method.c_str(), r.alt_param,
                      r.level, r.rejection_frequency, r.replications, r.failed,
                      r.mc_std_error);
        out << line;
    }
    require(out.good(), ErrorCode::IoError, "write_result_csv: write failed");
}

void write_sidecar_json(const ExperimentConfig& cfg, const std::string& file) {
    json j;
    j["config"] = json::parse(cfg.to_json());
    j["version"] = version();
    j["workers"] = worker_count();
    std::ofstream out(file);
    require(out.good(), ErrorCode::IoError, "write_sidecar_json: cannot open " + file);
    out << j.dump(2) << "\n";
    require(out.good(), ErrorCode::IoError, "write_sidecar_json: write failed");
}

namespace {

// Seconds-of-day from an ISO-8601 timestamp, a bare clock time, or epoch
// seconds. Epoch values are interpreted in UTC.
double parse_seconds_of_day(const std::string& token) {
    std::string clock = token;
    const auto sep = token.find_first_of("T ");
    if (sep != std::string::npos) {
        clock = token.substr(sep + 1);
    } else if (token.find(':') == std::string::npos) {
        char* end = nullptr;
        const double epoch = std::strtod(token.c_str(), &end);
        require(end != token.c_str(), ErrorCode::ParseError,
                "ingest: unparseable timestamp '" + token + "'");
        return std::fmod(epoch, 86400.0);
    }
    int hh = 0, mm = 0;
    double ss = 0.0;
    if (std::sscanf(clock.c_str(), "%d:%d:%lf", &hh, &mm, &ss) != 3) {
        raise(ErrorCode::ParseError, "ingest: unparseable clock time '" + token + "'");
    }
    return hh * 3600.0 + mm * 60.0 + ss;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
            field.pop_back();
        }
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        out.push_back(field.substr(start));
    }
    return out;
}

}  // namespace

IngestedDay ingest_day_csv(const std::string& file, const std::string& session_start,
                           const std::string& session_end) {
    std::ifstream in(file);
    require(in.good(), ErrorCode::ParseError, "ingest: cannot open " + file);

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError,
            "ingest: empty file " + file);
    const auto header = split_csv_line(line);
    std::ptrdiff_t ts_col = -1;
    std::ptrdiff_t px_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::string name = header[c];
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (name == "timestamp") ts_col = static_cast<std::ptrdiff_t>(c);
        if (name == "price") px_col = static_cast<std::ptrdiff_t>(c);
    }
    require(ts_col >= 0 && px_col >= 0, ErrorCode::ParseError,
            "ingest: header must contain timestamp and price columns");

    const double start_s = parse_seconds_of_day(session_start);
    const double end_s = parse_seconds_of_day(session_end);
    require(end_s > start_s, ErrorCode::InvalidArgument,
            "ingest: session end must follow session start");

    IngestedDay day;
    std::vector<std::pair<double, double>> ticks;  // (seconds-of-day, log price)
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++day.rows_total;
        const auto fields = split_csv_line(line);
        require(fields.size() > static_cast<std::size_t>(std::max(ts_col, px_col)),
                ErrorCode::ParseError, "ingest: short row in " + file);
        const double t = parse_seconds_of_day(fields[static_cast<std::size_t>(ts_col)]);
        if (t < start_s || t > end_s) continue;
        char* end = nullptr;
        const std::string& px_text = fields[static_cast<std::size_t>(px_col)];
        const double price = std::strtod(px_text.c_str(), &end);
        require(end != px_text.c_str() && std::isfinite(price), ErrorCode::ParseError,
                "ingest: unparseable price '" + px_text + "'");
        require(price > 0.0, ErrorCode::ParseError,
                "ingest: nonpositive price " + px_text);
        // last tick wins on duplicate timestamps
        if (!ticks.empty() && ticks.back().first == t) {
            ticks.back().second = std::log(price);
        } else {
            ticks.emplace_back(t, std::log(price));
        }
    }
    day.rows_in_session = ticks.size();
    require(ticks.size() >= 3, ErrorCode::InsufficientData,
            "ingest: fewer than 3 in-session ticks");
    std::stable_sort(ticks.begin(), ticks.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    // Modal spacing of consecutive ticks defines the regular grid.
    std::map<long long, std::size_t> spacing_counts;
    for (std::size_t i = 1; i < ticks.size(); ++i) {
        const double d = ticks[i].first - ticks[i - 1].first;
        if (d <= 0.0) continue;
        spacing_counts[static_cast<long long>(std::llround(d * 1e6))] += 1;
    }
    require(!spacing_counts.empty(), ErrorCode::ParseError,
            "ingest: no positive tick spacings");
    long long modal_micros = 0;
    std::size_t modal_count = 0;
    for (const auto& [micros, count] : spacing_counts) {
        if (count > modal_count) {
            modal_count = count;
            modal_micros = micros;
        }
    }
    const double spacing = static_cast<double>(modal_micros) / 1e6;
    day.spacing_seconds = spacing;

    const double t0 = ticks.front().first;
    const double t_last = ticks.back().first;
    const auto steps = static_cast<std::size_t>(std::llround((t_last - t0) / spacing));
    require(steps >= 2, ErrorCode::InsufficientData, "ingest: grid too short");

    // Forward fill onto the regular grid.
    std::vector<double> values(steps + 1);
    std::size_t cursor = 0;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double target = t0 + static_cast<double>(i) * spacing;
        while (cursor + 1 < ticks.size() &&
               ticks[cursor + 1].first <= target + 1e-9) {
            ++cursor;
        }
        values[i] = ticks[cursor].second;
        if (ticks[cursor].first < target - 1e-9) ++day.filled_gaps;
    }

    double total_variation = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        total_variation += std::fabs(values[i] - values[i - 1]);
    }
    require(total_variation > 0.0, ErrorCode::FlatDay,
            "ingest: session path is entirely flat");

    const double delta = 1.0 / static_cast<double>(steps);
    day.path = make_path(std::move(values), delta, 1.0);
    return day;
}

std::vector<std::size_t> bh_select(const std::vector<double>& pvalues, double q) {
    require(!pvalues.empty(), ErrorCode::InvalidArgument, "bh_select: empty input");
    require(q > 0.0 && q < 1.0, ErrorCode::InvalidArgument,
            "bh_select: q must lie strictly inside (0,1)");
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pvalues[a] < pvalues[b];
    });
    double cutoff = -1.0;
    for (std::size_t r = m; r >= 1; --r) {
        const double p = pvalues[order[r - 1]];
        if (p <= static_cast<double>(r) * q / static_cast<double>(m)) {
            cutoff = p;
            break;
        }
    }
    std::vector<std::size_t> selected;
    if (cutoff < 0.0) return selected;
    for (std::size_t i = 0; i < m; ++i) {
        if (pvalues[i] <= cutoff) selected.push_back(i);
    }
    return selected;
}

}  // namespace jumplab
