// spin16 command-line front end.
//
//   spin16 scan        --xmax N [--workers W] [--cache F] [--format csv|json] [--out F]
//   spin16 export      --xmax N --format csv|json --out F [--workers W] [--cache F]
//   spin16 verify      --suite lw|kw|spin|classnum|split --xmax N
//   spin16 oscillation --chi I --psi J --xmax N [--workers W] [--cache F] [--format csv|json]
//   spin16 record      --p P
//
// Exit status: 0 everything passed, 1 identity violation, 2 configuration or I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spin16/errors.hpp"
#include "spin16/harness.hpp"
#include "spin16/record_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfig = 2;

struct Options {
  long long xmax = 100'000;
  int workers = 1;
  std::string cache;
  std::string format = "json";
  std::string out;
  std::string suite;
  int chi = 0;
  int psi = 0;
  long long p = 0;
};

spin16::ScanConfig scan_config(const Options& o) {
  spin16::ScanConfig cfg;
  cfg.x_max = o.xmax;
  cfg.workers = o.workers;
  if (!o.cache.empty()) cfg.cache = o.cache;
  return cfg;
}

spin16::ExportFormat parse_format(const std::string& f) {
  if (f == "csv") return spin16::ExportFormat::csv;
  if (f == "json") return spin16::ExportFormat::json;
  throw spin16::ConfigError("unknown format '" + f + "' (expected csv or json)");
}

int run_scan(const Options& o) {
  const auto format = parse_format(o.format);
  const spin16::ScanResult result = spin16::scan(scan_config(o));
  if (!o.out.empty()) {
    spin16::export_files(result, format, o.out);
  } else if (format == spin16::ExportFormat::csv) {
    std::cout << spin16::export_csv(result.records);
  } else {
    std::cout << spin16::report_json(result.report).dump(2) << '\n';
  }
  return kOk;
}

int run_export(const Options& o) {
  if (o.out.empty()) throw spin16::ConfigError("export needs --out");
  const auto format = parse_format(o.format);
  spin16::export_files(spin16::scan(scan_config(o)), format, o.out);
  return kOk;
}

int run_verify(const Options& o) {
  const spin16::VerifyReport rep = spin16::verify(o.suite, o.xmax);
  std::cout << spin16::verify_json(rep).dump(2) << '\n';
  return rep.passed ? kOk : kViolation;
}

int run_oscillation(const Options& o) {
  const auto format = parse_format(o.format);
  const spin16::ScanResult result = spin16::scan(scan_config(o));
  const auto rep = spin16::oscillation(o.chi, o.psi, result);
  if (format == spin16::ExportFormat::csv) std::cout << spin16::oscillation_csv(rep);
  else std::cout << spin16::oscillation_json(rep).dump(2) << '\n';
  return kOk;
}

int run_record(const Options& o) {
  if (o.p < 2 || o.p > spin16::kMaxBound) throw spin16::ConfigError("--p must be a prime in [2, 1e8]");
  if (!spin16::is_prime(static_cast<spin16::u64>(o.p))) throw spin16::ConfigError(std::to_string(o.p) + " is not prime");
  const spin16::FactorTable table(std::max<long long>(2 * o.p, 16));
  spin16::RecordOptions opts;
  opts.spin_average = true;
  opts.classnum_audit = true;
  opts.pell_witness = true;
  std::cout << spin16::record_json(spin16::build_record(o.p, table, opts)).dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic invariants of Q(sqrt 2p) and spin symbols over Z[sqrt 2]"};
  app.require_subcommand(1);
  Options o;

  auto add_scan_flags = [&o](CLI::App* sub) {
    sub->add_option("--xmax", o.xmax, "upper bound for primes")->capture_default_str();
    sub->add_option("--workers", o.workers, "worker threads")->capture_default_str();
    sub->add_option("--cache", o.cache, "CSV cache to resume from and append to");
  };

  auto* scan = app.add_subcommand("scan", "scan all primes up to --xmax and print the density report");
  add_scan_flags(scan);
  scan->add_option("--format", o.format, "csv (records) or json (density report)")->capture_default_str();
  scan->add_option("--out", o.out, "write to this file instead of stdout");

  auto* exp = app.add_subcommand("export", "scan and write records (csv) or the density report (json)");
  add_scan_flags(exp);
  exp->add_option("--format", o.format, "csv or json")->capture_default_str();
  exp->add_option("--out", o.out, "target path")->required();

  auto* ver = app.add_subcommand("verify", "run one identity suite");
  ver->add_option("--suite", o.suite, "lw, kw, spin, classnum or split")->required();
  ver->add_option("--xmax", o.xmax, "prime bound (|D| bound for classnum)")->capture_default_str();

  auto* osc = app.add_subcommand("oscillation", "partial sums at checkpoints 1000*2^k");
  add_scan_flags(osc);
  osc->add_option("--chi", o.chi, "character mod 8, index 0..3")->capture_default_str();
  osc->add_option("--psi", o.psi, "character mod 16, index 0..7")->capture_default_str();
  osc->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* rec = app.add_subcommand("record", "full dossier for one prime");
  rec->add_option("--p", o.p, "the prime")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*scan) return run_scan(o);
    if (*exp) return run_export(o);
    if (*ver) return run_verify(o);
    if (*osc) return run_oscillation(o);
    return run_record(o);
  } catch (const spin16::IdentityViolation& e) {
    std::cerr << "spin16: " << e.what() << '\n';
    std::cout << nlohmann::json{{"status", "fail"}, {"counterexample", e.prime()}, {"identity", e.identity()}}.dump()
              << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    // ConfigError, IoError, CapacityError and DomainError all mean the run was misconfigured.
    std::cerr << "spin16: " << e.what() << '\n';
    return kConfig;
  }
}
