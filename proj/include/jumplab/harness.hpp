#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumplab/calibrate.hpp"
#include "jumplab/path.hpp"
#include "jumplab/simulate.hpp"

namespace jumplab {

enum class Design { SizeNull, Dense, Sparse, NoisySize, NoisyDense, NoisySparse };

const char* design_name(Design d);
Design design_from_name(const std::string& name);
bool design_is_noisy(Design d);

/// One table method: base identifier plus tuning knobs. Unset integers (0)
/// fall back to the per-grid defaults at run time.
struct MethodSpec {
    Method method = Method::AJ;
    // ratio tests
    double p = 4.0;
    int k = 2;
    // max tests
    int window = 0;
    bool demean = true;
    // pre-averaged ratio
    int k_n = 0;
    int r_n = 0;
    double theta = 1.0;
    double h_exponent = 2.0;
    double rn_exponent = 0.85;
    // local-average max
    int M_n = 0;
    double lambda = 1.0;
    double tsrsv_cK = 1.0;
    double tsrsv_ch = 1.0;

    std::string label() const;
};

/// Full experiment recipe (usually parsed from a JSON manifest).
struct ExperimentConfig {
    Design design = Design::SizeNull;
    std::vector<int> grids = {5};          // sampling intervals in seconds
    std::vector<double> alt_params = {0};  // theta or lambda sweep; 0 for size
    double mark_variance = 0.05;           // Gaussian mark variance
    std::vector<MethodSpec> methods;
    int replications = 100;
    std::vector<double> levels = {0.05};
    HestonParams heston;
    NoiseSpec noise;
    int days = 1;
    int steps_per_day = 23'400;
    BootstrapConfig bootstrap;
    std::uint64_t base_seed = 0;

    void validate() const;
    static ExperimentConfig from_json(const std::string& text);
    std::string to_json() const;
};

struct ExperimentRow {
    std::string design;
    int grid_seconds = 0;
    std::string method;
    double alt_param = 0.0;
    double level = 0.0;
    double rejection_frequency = 0.0;
    int replications = 0;  // valid replications for this cell
    int failed = 0;        // excluded replications
    double mc_std_error = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
};

/// Runs the Monte Carlo table. Deterministic per base_seed and independent
/// of the worker count (per-replication substreams, counting reductions).
/// JUMPLAB_SEED, when set, overrides base_seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_result_csv(const ExperimentResult& result, const std::string& file);
void write_sidecar_json(const ExperimentConfig& cfg, const std::string& file);

/// Intraday CSV ingestion: session filtering, log transform, forward fill
/// onto the regular grid implied by the modal spacing.
struct IngestedDay {
    LogPricePath path;        // horizon normalized to 1
    std::size_t rows_total = 0;
    std::size_t rows_in_session = 0;
    std::size_t filled_gaps = 0;
    double spacing_seconds = 0.0;
};

/// session_start/session_end are clock times like "09:30:00" / "16:00:00".
/// Throws ParseError for malformed input and FlatDay when the session has
/// zero total variation.
IngestedDay ingest_day_csv(const std::string& file, const std::string& session_start,
                           const std::string& session_end);

/// Benjamini-Hochberg step-up selection at false-discovery rate q.
/// Returns the selected indices in ascending order (empty when none pass).
std::vector<std::size_t> bh_select(const std::vector<double>& pvalues, double q);

/// Library version string.
const char* version();

}  // namespace jumplab
