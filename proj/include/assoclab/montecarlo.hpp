// Replicated experiment runner: independent (X, Y) draws across replicates,
// association statistics per replicate, empirical summaries against the
// theoretical predictions, and the Kolmogorov-Smirnov machinery.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "assoclab/gaussian.hpp"
#include "assoclab/graphs.hpp"
#include "assoclab/ising.hpp"
#include "assoclab/stats.hpp"
#include "assoclab/theory.hpp"

namespace assoclab {

inline constexpr uint64_t kStreamNoise = 0x657073696cULL;  // OLS error stream

struct IsingModelDesc {
    GraphFamily family;
    double beta = 0.0;
    SamplerPlan plan;
};

struct GaussianModelDesc {
    CovarianceModel covariance;
};

struct ModelDesc {
    enum class Kind { Ising, Gaussian };
    Kind kind = Kind::Ising;
    IsingModelDesc ising;
    GaussianModelDesc gaussian;

    static ModelDesc make_ising(GraphFamily family, double beta, SamplerPlan plan = {});
    static ModelDesc make_gaussian(CovarianceModel cov);
};

struct ExperimentConfig {
    std::string name = "experiment";
    ModelDesc model_x, model_y;
    GaussianModelDesc noise;  // OLS error model
    bool want_t = true;
    bool want_rho = true;
    bool want_ols = false;
    int n = 0;
    int replicates = 0;
    uint64_t master_seed = 1;
    double nominal_alpha = 0.05;
    double ols_beta_true = 0.0;
    int threads = 0;  // 0 = hardware concurrency
    // profile functions behind the OLS eigen specs, for the condition report
    std::optional<OlsProfile> ols_f, ols_g;
    // debug: retain raw spin draws so the CLI can dump them (one byte per spin)
    bool keep_spins = false;
    std::string note;  // free-form annotation echoed into the report
};

struct ReplicateRow {
    double t_n = 0.0, scaled_t = 0.0, rho_n = 0.0, scaled_rho = 0.0;
    double beta_hat = 0.0, naive_var = 0.0, ci_low = 0.0, ci_high = 0.0;
    bool covered = false, reject_zero = false;
    bool degenerate = false;
};

struct StatSummary {
    std::string label;  // "scaled_t", "scaled_rho", "spike_scaled_t", "rho_raw"
    int count = 0;
    double mean = 0.0, var = 0.0, sd = 0.0;
    std::optional<double> type1_rate;       // vs the i.i.d. N(0,1) reference
    std::optional<LimitPrediction> prediction;
    std::optional<double> ks_distance, ks_pvalue;
    std::optional<double> frac_abs_above;   // |value| > 0.8, Rademacher check
};

struct OlsSummary {
    double coverage = 0.0;
    double reject_rate = 0.0;
    double mean_beta_hat = 0.0;
    double mean_naive_var_scaled = 0.0;  // n * naive_var averaged
    double var_beta_scaled = 0.0;        // n * empirical Var(beta_hat)
    std::optional<OlsConditionReport> condition;
};

struct McReport {
    std::string name;
    int n = 0, replicates = 0;
    uint64_t master_seed = 0;
    double nominal_alpha = 0.05;
    double ols_beta_true = 0.0;
    int degenerate_count = 0;
    bool two_well_x = false, two_well_y = false;
    std::string note;
    std::vector<StatSummary> stats;
    std::optional<OlsSummary> ols;
    std::vector<ReplicateRow> rows;  // not part of the JSON; feeds the CSV
    // filled only under keep_spins, indexed by replicate
    std::vector<std::vector<int8_t>> spins_x, spins_y;

    std::string to_json() const;  // deterministic for a fixed config
    const StatSummary* find(const std::string& label) const;
};

McReport run_experiment(const ExperimentConfig& config);

void write_replicates_csv(const McReport& report, const std::string& path);

// --- Kolmogorov-Smirnov -----------------------------------------------------

using CdfFn = std::function<double(double)>;

// One-sample KS; asymptotic p-value from the Kolmogorov series.
std::pair<double, double> ks_test(std::vector<double> samples, const CdfFn& cdf);

double kolmogorov_pvalue(size_t n_samples, double distance);

CdfFn normal_cdf_law(double variance);

// CDF of A*B with A standard normal, B the square root of a chi-square(1);
// evaluated by integrating the conditional normal CDF over B.
double normal_times_chi_cdf(double t);

// --- sweeps ------------------------------------------------------------------

struct TrendPoint {
    double beta = 0.0;
    double sd = 0.0;
    double sd_bootstrap_se = 0.0;
    double var = 0.0;
};

struct TrendReport {
    std::vector<TrendPoint> points;
    double spearman = 0.0;  // rank correlation of sd with beta
    std::vector<McReport> reports;
};

// Runs the base config once per grid point with common master seeds,
// varying beta of X (and of Y unless vary_y is false).
TrendReport monotonicity_sweep(const ExperimentConfig& base,
                               const std::vector<double>& beta_grid,
                               bool vary_y = true,
                               bool use_correlation = true);

// --- OLS scenario ---------------------------------------------------------------

struct OlsScenario {
    std::string name;
    CovarianceModel sigma_x;
    CovarianceModel sigma_eps;
    std::optional<OlsProfile> f, g;
    int n = 200;
    int replicates = 500;
    uint64_t master_seed = 1;
    double beta_true = 0.0;
    double alpha = 0.05;
    int threads = 0;
};

McReport ols_coverage_experiment(const OlsScenario& scenario);

// Eigen-spec builders used by the Gaussian experiments.
EigenSpec correlation_variance_spec(int n, double sigma2);  // sqrt(n) rho -> N(0, sigma2)
EigenSpec spike_spec(int n, double exponent = 2.5);         // top eig n^exponent, rest 1
EigenSpec profile_spec(int n, const OlsProfile& profile, uint64_t basis_seed = 0,
                       BasisKind basis = BasisKind::CenteringAligned);

}  // namespace assoclab
