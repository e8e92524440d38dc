#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "crackle/regimes.hpp"

namespace crackle {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TGrid {
  double lo = 0.0;
  double hi = 1.0;
  int points = 64;
};

struct ExperimentConfig {
  std::string preset_name;  // informational, may be empty
  RegimeSpec regime;        // model + radius rule + k
  TGrid t_grid;
  std::vector<long> n_values;
  int trials = 50;
  std::uint64_t mc_budget = 200000;   // MC samples per limit-series term
  std::uint64_t inner_budget = 1024;  // union-volume points per sample
  int series_m = 5;                   // series truncation for total limits
  long j_cap = 2;
  int truncation_m = 0;  // 0 = full Betti curve; else component-size cutoff
  std::uint64_t seed = 1;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

// Named example configurations (parameter ranges pre-validated):
//   ex31-i, ex31-ii  — heavy tail, sparse regime (scaler rho_n)
//   ex31-iii         — heavy tail, weak core (scaler R^d, limit at lambda = C/c)
//   ex32-i           — stretched-exponential tail, sparse (scaler eta_n)
//   ex32-ii          — stretched-exponential tail, weak core (scaler a(R) R^{d-1})
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Deterministic per-cell cloud seed (independent of execution order).
std::uint64_t cell_seed(std::uint64_t master, std::size_t n_index, int trial);

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<double> grid;
  std::string scaler_name;
  std::string scaler_formula;
  std::string limit_name;
  std::vector<double> radius;   // per n
  std::vector<double> nf;       // per n
  std::vector<double> scaler;   // per n
  std::vector<std::vector<std::vector<long>>> beta;  // [n][trial][t]
  std::vector<std::vector<double>> mean_scaled;      // [n][t]
  std::vector<std::vector<double>> se_scaled;        // [n][t]
  std::vector<double> limit_mean;  // [t]
  std::vector<double> limit_se;    // [t]
  double limit_tail_bound = 0.0;
  std::vector<double> sup_distance;  // per n
  long sandwich_skips = 0;
};

ConvergenceReport run_convergence(const ExperimentConfig& cfg, int threads = 1);

std::string report_to_json(const ConvergenceReport& rep);
ConvergenceReport report_from_json(const std::string& text);

// Long-format CSV: one row per (n, trial, t); config and per-cell seeds in
// '#' comment lines.
std::string report_to_csv(const ConvergenceReport& rep);
// Companion per-(n, t) aggregate table.
std::string summary_to_csv(const ConvergenceReport& rep);

// (n, R_n, nf(R_n), scaler) audit table.
std::string regime_table_csv(const RegimeSpec& spec,
                             const std::vector<long>& n_values);

// format: "csv" writes `path` plus `path`.summary.csv; "json" writes `path`.
void emit(const ConvergenceReport& rep, const std::string& format,
          const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Stable float formatting shared by every CSV writer (%.17g round-trips).
std::string format_double(double v);

}  // namespace crackle
