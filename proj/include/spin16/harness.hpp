#pragma once

/**
 * @file harness.hpp
 * @brief Parallel prime scans, density reports, verify suites, oscillation
 *        tables and export.
 *
 * Outputs depend only on the configuration: records are merged in prime
 * order, JSON keys are sorted, and no timestamps are written, so any worker
 * count yields the same bytes.
 */

#include <filesystem>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spin16/invariants.hpp"
#include "spin16/spin.hpp"

namespace spin16 {

/// Invalid scan configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  i64 x_max = 100'000;
  int workers = 1;
  i64 checkpoint_base = 1000;       // checkpoints at base * 2^k, plus x_max
  bool spin_average = true;         // beta route 3
  i64 spin_full_below = 100'000;    // route 3 on every split-complete p below this
  i64 spin_stride = 10;             // ... and on every stride-th one above
  i64 classnum_audit_stride = 64;   // enumeration audit on p = 1 mod 8 with ((p-1)/8) % stride == 0; 0 = off
  std::optional<std::filesystem::path> cache;
};

/// Exact ratio num/den.
struct Ratio {
  i64 num = 0;
  i64 den = 1;
  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
};

struct SuiteTally {
  i64 checked = 0;
  i64 failed = 0;
};

struct DensityReport {
  i64 x_max = 0;
  i64 pi_x = 0;
  std::map<int, i64> e_counts;            // keyed by E in {-2, -1, 2}
  i64 split_complete = 0;
  std::map<std::string, i64> cell_counts; // "++", "+-", "-+", "--"
  i64 rank16 = 0;                         // 16 | h+(2p)
  i64 hasse_q1 = 0;
  i64 sum_alpha = 0, sum_beta = 0, sum_alpha_beta = 0;
  i64 kw_converse_checked = 0, kw_converse_failures = 0;
  std::map<std::string, SuiteTally> suites;
  std::string csv_fnv1a;

  /// E-density over odd primes (denominator pi_x - 1).
  Ratio delta(int e) const;
  Ratio delta_hasse() const;
  Ratio rank16_density() const;
};

struct ScanResult {
  std::vector<PrimeRecord> records;
  DensityReport report;
};

/// Checkpoints base * 2^k <= x_max, then x_max itself.
std::vector<i64> checkpoints(i64 x_max, i64 base = 1000);

/// Full scan. With a cache path, rows already present are reused, a torn
/// trailing row is discarded and the missing rows are appended in prime order.
ScanResult scan(const ScanConfig& cfg);

/// Tallies are a function of the CSV-visible fields and the config alone, so a
/// resumed scan reports exactly what an uninterrupted one would.
DensityReport density_report(const ScanConfig& cfg, const std::vector<PrimeRecord>& records);

/// Whether beta route 3 / the class-number audit runs on p under cfg.
bool samples_spin_average(const ScanConfig& cfg, i64 p);
bool samples_classnum_audit(const ScanConfig& cfg, i64 p);

std::string export_csv(const std::vector<PrimeRecord>& records);
nlohmann::json report_json(const DensityReport& r);

enum class ExportFormat { csv, json };
/// Writes the record CSV or the density JSON to path; I/O failures carry the path.
void export_files(const ScanResult& result, ExportFormat format, const std::filesystem::path& path);

struct VerifyReport {
  std::string suite;
  i64 x_max = 0;
  i64 checked = 0;
  bool passed = true;
  std::optional<i64> counterexample;
  std::string identity;
  std::string detail;
};

/// suite in {lw, kw, spin, classnum, split}. For classnum x_max bounds |D|.
VerifyReport verify(const std::string& suite, i64 x_max);
nlohmann::json verify_json(const VerifyReport& r);

struct OscillationRow {
  PartialSumRow sums;
  double spin_abs;         // |S(X)|
  double spin_normalized;  // |S(X)| / prime ideals counted
  double alpha_normalized, beta_normalized, alpha_beta_normalized;  // |sum| / split-complete count
};

struct OscillationReport {
  int chi_index = 0;
  int psi_index = 0;
  i64 x_max = 0;
  std::vector<OscillationRow> rows;
  std::map<std::string, std::optional<double>> slopes;  // descriptive least-squares log-log slopes
};

OscillationReport oscillation(int chi_index, int psi_index, const ScanResult& scanned, i64 checkpoint_base = 1000);
std::string oscillation_csv(const OscillationReport& r);
nlohmann::json oscillation_json(const OscillationReport& r);

/// Least-squares slope of log|y| against log x over points with y != 0.
std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace spin16
