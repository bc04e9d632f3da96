// jumplab command line: simulate paths, test them for jumps, reproduce
// Monte Carlo tables, ingest intraday CSV data, and select jump days.
//
// Links the shared C API only.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jumplab.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(jl_status status) {
    std::cerr << "error (" << status << "): " << jl_last_error() << "\n";
    std::exit(1);
}

void check(jl_status status) {
    if (status != JL_OK) fail(status);
}

std::string take_string(char* owned) {
    std::string out = owned ? owned : "";
    jl_string_free(owned);
    return out;
}

std::string read_file(const std::string& file) {
    std::ifstream in(file);
    if (!in.good()) {
        std::cerr << "error: cannot open " << file << "\n";
        std::exit(1);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct PathHandle {
    jl_path* ptr = nullptr;
    ~PathHandle() { jl_path_free(ptr); }
};

json test_options_from_flags(const std::string& method, int k, double p, int window,
                             double level, int b1, int b2, std::uint64_t seed,
                             bool asymptotic, int k_n, int r_n, int m_n,
                             double theta, double lambda) {
    json options;
    options["method"] = method;
    options["k"] = k;
    options["p"] = p;
    if (window > 0) options["window"] = window;
    options["level"] = level;
    if (asymptotic) {
        options["bootstrap"] = false;
    } else {
        options["bootstrap"] = {{"b1", b1}, {"b2", b2}};
    }
    options["seed"] = seed;
    if (k_n > 0) options["k_n"] = k_n;
    if (r_n > 0) options["r_n"] = r_n;
    if (m_n > 0) options["M_n"] = m_n;
    options["theta"] = theta;
    options["lambda"] = lambda;
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jumplab: jump tests for high-frequency price paths"};
    app.set_version_flag("--version", std::string(jl_version()));
    app.require_subcommand(1);

    // ---- simulate -----------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic day");
    std::string sim_spec_file;
    std::string sim_out = "day.csv";
    std::uint64_t sim_seed = 1;
    int sim_days = 1;
    int sim_steps = 23400;
    std::string sim_jumps = "none";
    double sim_intensity = 0.0;
    double sim_mark_var = 0.05;
    std::string sim_noise = "none";
    double sim_q = 0.0;
    bool sim_print_jumps = false;
    sim_cmd->add_option("--spec", sim_spec_file, "JSON spec file (overrides flags)");
    sim_cmd->add_option("--out", sim_out, "output CSV file");
    sim_cmd->add_option("--seed", sim_seed, "random seed");
    sim_cmd->add_option("--days", sim_days, "trading days");
    sim_cmd->add_option("--steps-per-day", sim_steps, "grid points per day");
    sim_cmd->add_option("--jumps", sim_jumps, "none|dense|sparse");
    sim_cmd->add_option("--intensity", sim_intensity, "theta (dense) or lambda (sparse)");
    sim_cmd->add_option("--mark-variance", sim_mark_var, "Gaussian mark variance");
    sim_cmd->add_option("--noise", sim_noise, "none|gaussian|t8");
    sim_cmd->add_option("--q", sim_q, "noise scale");
    sim_cmd->add_flag("--print-jumps", sim_print_jumps, "print jump records JSON");

    // ---- test -----------------------------------------------------------
    auto* test_cmd = app.add_subcommand("test", "test one path for jumps");
    std::string test_input;
    std::string test_method = "cc";
    int test_k = 2;
    double test_p = 4.0;
    int test_window = 0;
    double test_level = 0.05;
    int test_b1 = 199;
    int test_b2 = 99;
    std::uint64_t test_seed = 0;
    bool test_asymptotic = false;
    int test_kn = 0, test_rn = 0, test_mn = 0;
    double test_theta = 1.0, test_lambda = 1.0;
    std::string test_session_start = "09:30:00";
    std::string test_session_end = "16:00:00";
    test_cmd->add_option("--input", test_input, "CSV file (timestamp,price)")
        ->required();
    test_cmd->add_option("--method", test_method, "aj|lm|cc|pa|la|ccn");
    test_cmd->add_option("--k", test_k, "coarse block size");
    test_cmd->add_option("--p", test_p, "power");
    test_cmd->add_option("--window", test_window, "max-test window (0 = auto)");
    test_cmd->add_option("--level", test_level, "nominal level");
    test_cmd->add_option("--b1", test_b1, "bootstrap resamples");
    test_cmd->add_option("--b2", test_b2, "inner bootstrap resamples");
    test_cmd->add_option("--seed", test_seed, "bootstrap seed");
    test_cmd->add_flag("--asymptotic", test_asymptotic,
                       "skip bootstrap calibration of max tests");
    test_cmd->add_option("--kn", test_kn, "pre-averaging window");
    test_cmd->add_option("--rn", test_rn, "self-normalizer block length");
    test_cmd->add_option("--Mn", test_mn, "local-average window");
    test_cmd->add_option("--theta", test_theta, "pre-averaging bandwidth target");
    test_cmd->add_option("--lambda", test_lambda, "local-average bandwidth target");
    test_cmd->add_option("--session-start", test_session_start, "session open");
    test_cmd->add_option("--session-end", test_session_end, "session close");

    // ---- experiment -----------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "config-driven Monte Carlo table");
    std::string exp_config;
    std::string exp_out = "results.csv";
    std::string exp_sidecar;
    long long exp_reps = -1;
    long long exp_seed = -1;
    exp_cmd->add_option("--config", exp_config, "experiment JSON manifest")->required();
    exp_cmd->add_option("--out", exp_out, "output CSV");
    exp_cmd->add_option("--sidecar", exp_sidecar,
                        "sidecar JSON (default: <out>.json)");
    exp_cmd->add_option("--replications", exp_reps, "override replication count");
    exp_cmd->add_option("--seed", exp_seed, "override base seed");

    // ---- ingest ----------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "intraday CSVs to per-day reports");
    std::string ingest_input;
    std::string ingest_out_dir = ".";
    std::string ingest_methods = "pa,la,ccn";
    std::string ingest_session_start = "09:30:00";
    std::string ingest_session_end = "16:00:00";
    double ingest_level = 0.05;
    int ingest_b1 = 199, ingest_b2 = 99;
    std::uint64_t ingest_seed = 0;
    bool ingest_asymptotic = false;
    ingest_cmd->add_option("--input", ingest_input, "CSV file or directory")
        ->required();
    ingest_cmd->add_option("--out", ingest_out_dir, "report output directory");
    ingest_cmd->add_option("--methods", ingest_methods, "comma-separated methods");
    ingest_cmd->add_option("--session-start", ingest_session_start, "session open");
    ingest_cmd->add_option("--session-end", ingest_session_end, "session close");
    ingest_cmd->add_option("--level", ingest_level, "nominal level");
    ingest_cmd->add_option("--b1", ingest_b1, "bootstrap resamples");
    ingest_cmd->add_option("--b2", ingest_b2, "inner bootstrap resamples");
    ingest_cmd->add_option("--seed", ingest_seed, "bootstrap seed");
    ingest_cmd->add_flag("--asymptotic", ingest_asymptotic,
                         "skip bootstrap calibration of max tests");

    // ---- select -----------------------------------------------------------
    auto* select_cmd = app.add_subcommand("select", "BH selection over reports");
    std::string select_dir;
    std::string select_method = "la";
    double select_q = 0.2;
    select_cmd->add_option("--reports", select_dir, "directory of report JSONs")
        ->required();
    select_cmd->add_option("--method", select_method, "method whose p-values to use");
    select_cmd->add_option("--q", select_q, "false-discovery rate");

    CLI11_PARSE(app, argc, argv);

    if (*sim_cmd) {
        json spec;
        if (!sim_spec_file.empty()) {
            spec = json::parse(read_file(sim_spec_file));
        } else {
            spec["seed"] = sim_seed;
            spec["days"] = sim_days;
            spec["steps_per_day"] = sim_steps;
            if (sim_jumps != "none") {
                spec["jumps"] = {{"kind", sim_jumps},
                                 {"intensity", sim_intensity},
                                 {"mark_variance", sim_mark_var}};
            }
            if (sim_noise != "none") {
                spec["noise"] = {{"kind", sim_noise}, {"q", sim_q}};
            }
        }
        const std::string spec_text = spec.dump();
        check(jl_simulate_to_csv(spec_text.c_str(), sim_out.c_str()));
        if (sim_print_jumps) {
            char* jumps = nullptr;
            check(jl_simulate_day(spec_text.c_str(), nullptr, nullptr, &jumps));
            std::cout << take_string(jumps) << "\n";
        }
        std::cerr << "wrote " << sim_out << "\n";
        return 0;
    }

    if (*test_cmd) {
        PathHandle path;
        char* meta = nullptr;
        check(jl_path_from_csv(test_input.c_str(), test_session_start.c_str(),
                               test_session_end.c_str(), &path.ptr, &meta));
        const json options = test_options_from_flags(
            test_method, test_k, test_p, test_window, test_level, test_b1, test_b2,
            test_seed, test_asymptotic, test_kn, test_rn, test_mn, test_theta,
            test_lambda);
        char* report_text = nullptr;
        check(jl_test_path(path.ptr, options.dump().c_str(), &report_text));
        json report = json::parse(take_string(report_text));
        report["input"] = test_input;
        report["ingest"] = json::parse(take_string(meta));
        std::cout << report.dump(2) << "\n";
        return 0;
    }

    if (*exp_cmd) {
        json config = json::parse(read_file(exp_config));
        if (exp_reps > 0) config["replications"] = exp_reps;
        if (exp_seed >= 0) config["base_seed"] = exp_seed;
        const std::string sidecar =
            exp_sidecar.empty() ? exp_out + ".json" : exp_sidecar;
        char* summary = nullptr;
        check(jl_experiment_run(config.dump().c_str(), exp_out.c_str(),
                                sidecar.c_str(), &summary));
        const json rows = json::parse(take_string(summary));
        std::cerr << "wrote " << exp_out << " (" << rows["rows"].size()
                  << " rows) and " << sidecar << "\n";
        return 0;
    }

    if (*ingest_cmd) {
        std::vector<fs::path> files;
        if (fs::is_directory(ingest_input)) {
            for (const auto& entry : fs::directory_iterator(ingest_input)) {
                if (entry.path().extension() == ".csv") files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
        } else {
            files.emplace_back(ingest_input);
        }
        fs::create_directories(ingest_out_dir);

        std::vector<std::string> methods;
        {
            std::istringstream ss(ingest_methods);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) methods.push_back(item);
            }
        }

        int flagged_flat = 0;
        for (const auto& file : files) {
            PathHandle path;
            char* meta = nullptr;
            const jl_status status =
                jl_path_from_csv(file.string().c_str(), ingest_session_start.c_str(),
                                 ingest_session_end.c_str(), &path.ptr, &meta);
            if (status == JL_ERR_FLAT_DAY) {
                ++flagged_flat;
                std::cerr << "flat day skipped: " << file.string() << "\n";
                continue;
            }
            check(status);

            json day_report;
            day_report["input"] = file.string();
            day_report["ingest"] = json::parse(take_string(meta));
            for (const auto& method : methods) {
                const json options = test_options_from_flags(
                    method, 2, 4.0, 0, ingest_level, ingest_b1, ingest_b2,
                    ingest_seed, ingest_asymptotic, 0, 0, 0, 1.0, 1.0);
                char* report_text = nullptr;
                check(jl_test_path(path.ptr, options.dump().c_str(), &report_text));
                day_report["tests"][method] = json::parse(take_string(report_text));
            }
            const fs::path out_file =
                fs::path(ingest_out_dir) / (file.stem().string() + ".report.json");
            std::ofstream out(out_file);
            out << day_report.dump(2) << "\n";
            std::cerr << "wrote " << out_file.string() << "\n";
        }
        if (flagged_flat > 0) {
            std::cerr << flagged_flat << " flat day(s) skipped\n";
        }
        return 0;
    }

    if (*select_cmd) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(select_dir)) {
            if (entry.path().string().ends_with(".report.json")) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        std::vector<double> pvalues;
        std::vector<std::string> names;
        for (const auto& file : files) {
            const json report = json::parse(read_file(file.string()));
            if (!report.contains("tests") || !report["tests"].contains(select_method)) {
                continue;
            }
            pvalues.push_back(report["tests"][select_method]["pvalue"].get<double>());
            names.push_back(file.string());
        }
        if (pvalues.empty()) {
            std::cerr << "no reports with method " << select_method << " found\n";
            return 1;
        }
        std::vector<int> selected(pvalues.size(), 0);
        check(jl_bh_select(pvalues.data(), pvalues.size(), select_q, selected.data()));
        json out;
        out["method"] = select_method;
        out["q"] = select_q;
        out["tested"] = pvalues.size();
        json chosen = json::array();
        for (std::size_t i = 0; i < pvalues.size(); ++i) {
            if (selected[i]) {
                chosen.push_back({{"report", names[i]}, {"pvalue", pvalues[i]}});
            }
        }
        out["selected"] = chosen;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    return 0;
}
