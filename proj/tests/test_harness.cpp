#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "spin16/errors.hpp"
#include "spin16/harness.hpp"
#include "spin16/record_io.hpp"

using namespace spin16;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("spin16-test-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScanConfig config(i64 x, int workers = 1) {
  ScanConfig c;
  c.x_max = x;
  c.workers = workers;
  return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("checkpoints") {
  CHECK(checkpoints(1000) == std::vector<i64>{1000});
  CHECK(checkpoints(5000) == std::vector<i64>{1000, 2000, 4000, 5000});
  CHECK(checkpoints(500) == std::vector<i64>{500});
  CHECK(checkpoints(4000, 1000).back() == 4000);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(scan(config(1)), ConfigError);
  CHECK_THROWS_AS(scan(config(kMaxBound + 1)), ConfigError);
  CHECK_THROWS_AS(scan(config(1000, 0)), ConfigError);
  CHECK_THROWS_AS(verify("nope", 1000), ConfigError);
  CHECK_THROWS_AS(verify("lw", 1), ConfigError);
  const ScanResult r = scan(config(100));
  CHECK_THROWS_AS(oscillation(4, 0, r), ConfigError);
  CHECK_THROWS_AS(oscillation(0, 8, r), ConfigError);
}

TEST_CASE("scan to 10^3") {
  const ScanResult r = scan(config(1000));
  CHECK(r.report.pi_x == 168);
  CHECK(r.records.size() == 168);
  i64 e_total = 0;
  for (const auto& [e, n] : r.report.e_counts) e_total += n;
  CHECK(e_total == 167);
  CHECK(r.report.delta_hasse().num == r.report.delta(-1).num);

  const std::string csv = export_csv(r.records);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 169);
  CHECK(csv.rfind(std::string(csv_header()) + "\n", 0) == 0);
}

TEST_CASE("CSV round trip") {
  const ScanResult r = scan(config(20'000));
  for (const auto& rec : r.records) {
    const std::string row = to_csv_row(rec);
    const auto back = parse_csv_row(row);
    REQUIRE(back);
    CAPTURE(row);
    REQUIRE(to_csv_row(*back) == row);
    REQUIRE(back->p == rec.p);
    REQUIRE(back->split_complete == rec.split_complete);
    REQUIRE(back->alpha == rec.alpha);
    REQUIRE(back->h_plus_2p == rec.h_plus_2p);
  }
  CHECK_FALSE(parse_csv_row("3,0,,,1,1"));
  CHECK_FALSE(parse_csv_row("x,0,,,,,,,,,,,,,,,,"));
  CHECK_FALSE(parse_csv_row("3,2,,,,,,,,,,,,,,,,"));
  CHECK_FALSE(parse_csv_row("3,0,,,1,1,,,,,,,2,-2x,,,2,"));
}

TEST_CASE("JSON counts re-sum to CSV tallies") {
  const ScanResult r = scan(config(50'000));
  const auto j = report_json(r.report);
  i64 split = 0, rank16 = 0, e_m1 = 0, e_p2 = 0, e_m2 = 0, sa = 0, sb = 0;
  std::map<std::string, i64> cells;
  std::istringstream csv(export_csv(r.records));
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    const auto rec = parse_csv_row(line);
    REQUIRE(rec);
    if (rec->p == 2) continue;
    split += rec->split_complete;
    rank16 += *rec->h_plus_2p % 16 == 0;
    e_m1 += rec->e == -1;
    e_p2 += rec->e == 2;
    e_m2 += rec->e == -2;
    if (rec->cell) {
      ++cells[rec->cell->str()];
      sa += *rec->alpha;
      sb += *rec->beta;
    }
  }
  CHECK(j["counts"]["split_complete"] == split);
  CHECK(j["counts"]["rank16"] == rank16);
  CHECK(j["counts"]["E_minus1"] == e_m1);
  CHECK(j["counts"]["E_plus2"] == e_p2);
  CHECK(j["counts"]["E_minus2"] == e_m2);
  CHECK(e_m1 + e_p2 + e_m2 == r.report.pi_x - 1);
  for (const auto& [cell, n] : cells) CHECK(j["counts"]["cells"][cell] == n);
  CHECK(j["sums"]["alpha"] == sa);
  CHECK(j["sums"]["beta"] == sb);
  CHECK(j["ratios"]["delta_sum"]["num"] == j["ratios"]["delta_sum"]["den"]);
  CHECK(j["ratios"]["delta_H"]["num"] == j["ratios"]["delta_E_minus1"]["num"]);
  CHECK(j["suite_verdicts"]["kw"]["checked"] == split);
  CHECK(j["suite_verdicts"]["kw"]["status"] == "pass");
  CHECK(j["kw_converse"]["checked"] == split);
}

TEST_CASE("worker-count independence") {
  TempDir dir;
  std::string csv_ref, json_ref;
  for (int w : {1, 4, 16}) {
    const ScanResult r = scan(config(10'000, w));
    const fs::path c = dir.path / ("w" + std::to_string(w) + ".csv");
    const fs::path j = dir.path / ("w" + std::to_string(w) + ".json");
    export_files(r, ExportFormat::csv, c);
    export_files(r, ExportFormat::json, j);
    if (w == 1) {
      csv_ref = slurp(c);
      json_ref = slurp(j);
    } else {
      CAPTURE(w);
      CHECK(slurp(c) == csv_ref);
      CHECK(slurp(j) == json_ref);
    }
  }
  CHECK_FALSE(csv_ref.empty());
}

TEST_CASE("resume from cache equals an uninterrupted scan") {
  TempDir dir;
  const fs::path cache = dir.path / "cache.csv";
  const ScanResult fresh = scan(config(30'000, 2));
  const std::string want = export_csv(fresh.records);

  // A partial scan, then a torn trailing row as if the process died mid-write.
  ScanConfig partial = config(12'345, 3);
  partial.cache = cache;
  scan(partial);
  CHECK(slurp(cache) == export_csv(scan(config(12'345)).records));
  {
    std::ofstream out(cache, std::ios::binary | std::ios::app);
    out << "12347,0,,,3";
  }

  ScanConfig full = config(30'000, 4);
  full.cache = cache;
  const ScanResult resumed = scan(full);
  CHECK(export_csv(resumed.records) == want);
  CHECK(slurp(cache) == want);
  CHECK(report_json(resumed.report).dump() == report_json(fresh.report).dump());

  // Fully cached: nothing recomputed, file unchanged.
  const ScanResult again = scan(full);
  CHECK(export_csv(again.records) == want);
  CHECK(slurp(cache) == want);

  // A smaller scan reads a prefix and leaves the larger cache intact.
  ScanConfig smaller = config(1000);
  smaller.cache = cache;
  CHECK(scan(smaller).records.size() == 168);
  CHECK(slurp(cache) == want);
}

TEST_CASE("a corrupted cache row is dropped and recomputed") {
  TempDir dir;
  const fs::path cache = dir.path / "cache.csv";
  const std::string want = export_csv(scan(config(5000)).records);
  std::string bad = want;
  const auto pos = bad.find("\n1009,");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos + 1, 4, "1011");
  {
    std::ofstream out(cache, std::ios::binary);
    out << bad;
  }
  ScanConfig c = config(5000);
  c.cache = cache;
  CHECK(export_csv(scan(c).records) == want);
  CHECK(slurp(cache) == want);
}

TEST_CASE("cache with a foreign header is refused") {
  TempDir dir;
  const fs::path cache = dir.path / "cache.csv";
  {
    std::ofstream out(cache);
    out << "something,else\n";
  }
  ScanConfig c = config(1000);
  c.cache = cache;
  CHECK_THROWS_AS(scan(c), ConfigError);
}

TEST_CASE("export reports the failing path") {
  const ScanResult r = scan(config(100));
  try {
    export_files(r, ExportFormat::csv, "/nonexistent-dir/out.csv");
    FAIL("expected an I/O error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
  }
}

TEST_CASE("verify suites") {
  for (const char* suite : {"split", "lw", "kw", "spin"}) {
    const VerifyReport v = verify(suite, 20'000);
    CAPTURE(suite);
    CHECK(v.passed);
    CHECK(v.checked > 0);
    CHECK_FALSE(v.counterexample);
    const auto j = verify_json(v);
    CHECK(j["status"] == "pass");
    CHECK(j["counterexample"].is_null());
  }
  const VerifyReport c = verify("classnum", 2000);
  CHECK(c.passed);
  CHECK(c.checked > 500);
}

TEST_CASE("oscillation") {
  const ScanResult tiny = scan(config(2));
  const auto empty = oscillation(0, 0, tiny);
  REQUIRE(empty.rows.size() == 1);
  CHECK(empty.rows[0].sums.spin_sum_doubled == Gauss{});
  CHECK(empty.rows[0].sums.sum_beta == 0);
  CHECK(empty.rows[0].sums.split_complete == 0);

  const ScanResult r = scan(config(64'000));
  const auto rep = oscillation(1, 2, r);
  REQUIRE(rep.rows.size() == 7);
  const auto& last = rep.rows.back().sums;
  CHECK(last.x == 64'000);
  CHECK(last.split_complete == r.report.split_complete);
  CHECK(last.sum_alpha == r.report.sum_alpha);
  CHECK(last.sum_beta == r.report.sum_beta);
  CHECK(last.sum_alpha_beta == r.report.sum_alpha_beta);
  for (const auto& row : rep.rows) CHECK(row.spin_abs <= 2.0 * static_cast<double>(row.sums.prime_ideals));
  CHECK(oscillation_csv(rep) == oscillation_csv(oscillation(1, 2, r)));
  const auto j = oscillation_json(rep);
  CHECK(j["rows"].size() == 7);
  CHECK(j["loglog_slopes"].contains("beta"));
}

TEST_CASE("loglog slope") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {10.0, 100.0, 1000.0}) pts.emplace_back(x, 3 * x * x);
  const auto s = loglog_slope(pts);
  REQUIRE(s);
  CHECK(*s == doctest::Approx(2.0));
  CHECK_FALSE(loglog_slope({{10.0, 1.0}}));
  CHECK_FALSE(loglog_slope({{10.0, 0.0}, {100.0, 0.0}}));
}

}  // TEST_SUITE
