#include "spin16/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "spin16/errors.hpp"
#include "spin16/record_io.hpp"

namespace spin16 {

namespace {

constexpr std::size_t kChunk = 512;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void validate(const ScanConfig& cfg) {
  if (cfg.x_max < 2) throw ConfigError("x_max must be at least 2");
  if (cfg.x_max > kMaxBound)
    throw ConfigError("x_max " + std::to_string(cfg.x_max) + " exceeds capacity " + std::to_string(kMaxBound));
  if (cfg.workers < 1 || cfg.workers > 256) throw ConfigError("workers must be in [1, 256]");
  if (cfg.checkpoint_base < 1) throw ConfigError("checkpoint spacing must be positive");
  if (cfg.spin_stride < 1) throw ConfigError("spin stride must be positive");
  if (cfg.classnum_audit_stride < 0) throw ConfigError("class-number audit stride must be >= 0");
}

// Append-only CSV cache. Rows already on disk are trusted: they were only ever
// written after every identity on them passed.
class Cache {
 public:
  Cache(const std::filesystem::path& path, const PrimeList& primes) : path_(path) {
    std::error_code ec;
    const bool exists = std::filesystem::exists(path, ec);
    std::string content;
    if (exists) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot read cache " + path.string());
      std::ostringstream ss;
      ss << in.rdbuf();
      content = ss.str();
    }

    std::size_t valid_end = 0;
    if (!content.empty()) {
      const std::size_t nl = content.find('\n');
      if (nl == std::string::npos) {
        valid_end = 0;  // torn header
      } else {
        if (std::string_view(content).substr(0, nl) != csv_header())
          throw ConfigError("cache " + path.string() + " has an unexpected header");
        valid_end = nl + 1;
        std::size_t pos = valid_end;
        std::size_t idx = 0;
        while (pos < content.size() && idx < primes.size()) {
          const std::size_t end = content.find('\n', pos);
          if (end == std::string::npos) break;  // torn trailing row
          auto rec = parse_csv_row(std::string_view(content).substr(pos, end - pos));
          if (!rec || rec->p != primes[idx]) break;
          rows_.push_back(std::move(*rec));
          ++idx;
          pos = valid_end = end + 1;
        }
        // Rows past x_max from a larger earlier scan stay on disk untouched.
        if (idx == primes.size()) valid_end = content.size();
      }
    }
    if (exists && valid_end < content.size()) {
      std::filesystem::resize_file(path, valid_end, ec);
      if (ec) throw IoError("cannot truncate cache " + path.string() + ": " + ec.message());
    }

    file_ = std::fopen(path.string().c_str(), "ab");
    if (!file_) throw IoError("cannot open cache " + path.string() + ": " + std::strerror(errno));
    if (valid_end == 0) {
      write(std::string(csv_header()) + "\n");
      sync();
    }
  }

  Cache(const Cache&) = delete;
  Cache& operator=(const Cache&) = delete;
  ~Cache() {
    if (file_) std::fclose(file_);
  }

  std::vector<PrimeRecord>& cached_rows() { return rows_; }

  void append(const PrimeRecord& rec) { write(to_csv_row(rec) + "\n"); }

  void sync() {
    if (std::fflush(file_) != 0 || ::fsync(fileno(file_)) != 0)
      throw IoError("cannot sync cache " + path_.string() + ": " + std::strerror(errno));
  }

 private:
  void write(const std::string& s) {
    if (std::fwrite(s.data(), 1, s.size(), file_) != s.size())
      throw IoError("cannot write cache " + path_.string() + ": " + std::strerror(errno));
  }

  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::vector<PrimeRecord> rows_;
};

struct Failure {
  i64 p;
  std::exception_ptr error;
};

}  // namespace

Ratio DensityReport::delta(int e) const {
  const auto it = e_counts.find(e);
  return {it == e_counts.end() ? 0 : it->second, pi_x - 1};
}
Ratio DensityReport::delta_hasse() const { return {hasse_q1, pi_x - 1}; }
Ratio DensityReport::rank16_density() const { return {rank16, pi_x - 1}; }

std::vector<i64> checkpoints(i64 x_max, i64 base) {
  std::vector<i64> out;
  for (i64 x = base; x <= x_max; x *= 2) {
    out.push_back(x);
    if (x > std::numeric_limits<i64>::max() / 2) break;
  }
  if (out.empty() || out.back() != x_max) out.push_back(x_max);
  return out;
}

bool samples_spin_average(const ScanConfig& cfg, i64 p) {
  return cfg.spin_average && (p < cfg.spin_full_below || ((p - 1) / 16) % cfg.spin_stride == 0);
}

bool samples_classnum_audit(const ScanConfig& cfg, i64 p) {
  return cfg.classnum_audit_stride > 0 && p % 8 == 1 && ((p - 1) / 8) % cfg.classnum_audit_stride == 0;
}

ScanResult scan(const ScanConfig& cfg) {
  validate(cfg);
  const PrimeList primes = sieve_primes(cfg.x_max);
  const FactorTable table(std::max<i64>(2 * cfg.x_max, 16));
  const std::vector<i64> cps = checkpoints(cfg.x_max, cfg.checkpoint_base);

  std::optional<Cache> cache;
  std::vector<PrimeRecord> records;
  records.reserve(primes.size());
  if (cfg.cache) {
    cache.emplace(*cfg.cache, primes);
    records = std::move(cache->cached_rows());
  }

  const std::size_t first = records.size();
  const std::size_t todo = primes.size() - first;
  const std::size_t n_chunks = (todo + kChunk - 1) / kChunk;

  struct Slot {
    std::vector<PrimeRecord> out;
    bool done = false;
  };
  std::vector<Slot> slots(n_chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failed_chunk{std::numeric_limits<std::size_t>::max()};
  std::optional<Failure> failure;
  std::mutex mu;
  std::condition_variable ready;

  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n_chunks) return;
      std::vector<PrimeRecord> out;
      if (k < failed_chunk.load()) {
        const std::size_t lo = first + k * kChunk;
        const std::size_t hi = std::min(primes.size(), lo + kChunk);
        out.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
          const i64 p = primes[i];
          try {
            if (!is_prime(static_cast<u64>(p)))
              throw IdentityViolation(p, "sieve.miller_rabin", "sieve output fails Miller-Rabin");
            RecordOptions opts;
            opts.spin_average = samples_spin_average(cfg, p);
            opts.classnum_audit = samples_classnum_audit(cfg, p);
            out.push_back(build_record(p, table, opts));
          } catch (...) {
            std::lock_guard lock(mu);
            if (!failure || p < failure->p) failure = Failure{p, std::current_exception()};
            std::size_t cur = failed_chunk.load();
            while (k < cur && !failed_chunk.compare_exchange_weak(cur, k)) {
            }
            break;
          }
        }
      }
      {
        std::lock_guard lock(mu);
        slots[k].out = std::move(out);
        slots[k].done = true;
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), std::max<std::size_t>(n_chunks, 1));
  for (std::size_t t = 0; t < n_threads && n_chunks > 0; ++t) pool.emplace_back(work);

  // Coordinator: merge chunks in prime order and own the cache append point.
  std::size_t cp_index = 0;
  std::exception_ptr io_error;
  while (cp_index < cps.size() && !records.empty() && records.back().p >= cps[cp_index]) ++cp_index;
  for (std::size_t k = 0; k < n_chunks; ++k) {
    std::vector<PrimeRecord> out;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return slots[k].done; });
      if (k >= failed_chunk.load()) break;
      out = std::move(slots[k].out);
    }
    try {
      for (auto& rec : out) {
        if (cache) cache->append(rec);
        records.push_back(std::move(rec));
      }
      bool crossed = false;
      while (cp_index < cps.size() && records.back().p >= cps[cp_index]) {
        ++cp_index;
        crossed = true;
      }
      if (cache && crossed) cache->sync();
    } catch (...) {
      io_error = std::current_exception();
      std::size_t cur = failed_chunk.load();
      while (0 < cur && !failed_chunk.compare_exchange_weak(cur, 0)) {
      }
      break;
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure->error);
  if (io_error) std::rethrow_exception(io_error);
  if (cache) cache->sync();

  ScanResult result;
  result.report = density_report(cfg, records);
  result.records = std::move(records);
  return result;
}

DensityReport density_report(const ScanConfig& cfg, const std::vector<PrimeRecord>& records) {
  DensityReport r;
  r.x_max = cfg.x_max;
  r.pi_x = static_cast<i64>(records.size());
  r.e_counts = {{-2, 0}, {-1, 0}, {2, 0}};
  r.cell_counts = {{"++", 0}, {"+-", 0}, {"-+", 0}, {"--", 0}};
  for (const char* name : {"alpha", "beta", "classnum", "first_factor", "genus", "kw", "lw", "pell", "spin", "split"})
    r.suites[name] = {};

  for (const PrimeRecord& rec : records) {
    if (rec.p == 2) continue;
    ++r.e_counts[*rec.e];
    if (*rec.hasse_q == 1) ++r.hasse_q1;
    if (*rec.h_plus_2p % 16 == 0) ++r.rank16;
    ++r.suites["pell"].checked;
    ++r.suites["genus"].checked;
    if (rec.p % 8 != 1) continue;

    ++r.suites["split"].checked;
    if (samples_classnum_audit(cfg, rec.p)) ++r.suites["classnum"].checked;
    if (*rec.h_neg_p % 8 == 0 && *rec.h_neg_2p % 8 == 0) ++r.suites["lw"].checked;
    if (!rec.split_complete) continue;

    ++r.split_complete;
    ++r.cell_counts[rec.cell->str()];
    r.sum_alpha += *rec.alpha;
    r.sum_beta += *rec.beta;
    r.sum_alpha_beta += *rec.alpha * *rec.beta;
    ++r.suites["alpha"].checked;
    ++r.suites["beta"].checked;
    ++r.suites["first_factor"].checked;
    ++r.suites["kw"].checked;
    if (samples_spin_average(cfg, rec.p)) ++r.suites["spin"].checked;

    // Converse direction of the cell predictions: does (h+ mod 16, E) pin the cell?
    ++r.kw_converse_checked;
    const bool rank16 = *rec.h_plus_2p % 16 == 0;
    CellLabel implied{1, 1};
    if (!rank16) implied = *rec.e == -2 ? CellLabel{1, -1} : (*rec.e == 2 ? CellLabel{-1, 1} : CellLabel{-1, -1});
    if (!(implied == *rec.cell)) ++r.kw_converse_failures;
  }
  r.csv_fnv1a = fnv1a_hex(export_csv(records));
  return r;
}

std::string export_csv(const std::vector<PrimeRecord>& records) {
  std::string out(csv_header());
  out += '\n';
  for (const auto& rec : records) {
    out += to_csv_row(rec);
    out += '\n';
  }
  return out;
}

nlohmann::json report_json(const DensityReport& r) {
  using nlohmann::json;
  auto ratio = [](const Ratio& q) { return json{{"num", q.num}, {"den", q.den}, {"value", q.value()}}; };

  json counts;
  counts["E_minus1"] = r.e_counts.at(-1);
  counts["E_plus2"] = r.e_counts.at(2);
  counts["E_minus2"] = r.e_counts.at(-2);
  counts["split_complete"] = r.split_complete;
  counts["cells"] = r.cell_counts;
  counts["rank16"] = r.rank16;
  counts["hasse_Q1"] = r.hasse_q1;

  json ratios;
  ratios["delta_E_minus1"] = ratio(r.delta(-1));
  ratios["delta_E_plus2"] = ratio(r.delta(2));
  ratios["delta_E_minus2"] = ratio(r.delta(-2));
  ratios["delta_sum"] = ratio({r.delta(-1).num + r.delta(2).num + r.delta(-2).num, r.pi_x - 1});
  ratios["delta_H"] = ratio(r.delta_hasse());
  ratios["rank16"] = ratio(r.rank16_density());

  json suites = json::object();
  for (const auto& [name, t] : r.suites)
    suites[name] = json{{"checked", t.checked}, {"status", t.failed == 0 ? "pass" : "fail"}};

  json j;
  j["x_max"] = r.x_max;
  j["pi_x"] = r.pi_x;
  j["counts"] = counts;
  j["ratios"] = ratios;
  j["sums"] = json{{"alpha", r.sum_alpha}, {"beta", r.sum_beta}, {"alpha_beta", r.sum_alpha_beta}};
  j["suite_verdicts"] = suites;
  j["kw_converse"] = json{{"checked", r.kw_converse_checked},
                          {"failures", r.kw_converse_failures},
                          {"held", r.kw_converse_failures == 0}};
  j["checksums"] = json{{"csv_fnv1a64", r.csv_fnv1a}};
  return j;
}

void export_files(const ScanResult& result, ExportFormat format, const std::filesystem::path& path) {
  const std::string bytes =
      format == ExportFormat::csv ? export_csv(result.records) : report_json(result.report).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

// ---------------------------------------------------------------------------
// verify

namespace {

template <class Body>
void run_checked(VerifyReport& rep, Body&& body) {
  try {
    body();
  } catch (const IdentityViolation& e) {
    rep.passed = false;
    rep.counterexample = e.prime();
    rep.identity = e.identity();
    rep.detail = e.what();
  }
}

void verify_classnum(VerifyReport& rep) {
  run_checked(rep, [&] {
    for (i64 d = -3; d >= -rep.x_max; --d) {
      if (!is_fundamental_discriminant(d)) continue;
      ++rep.checked;
      const i64 h_enum = class_number_enum(d).h;
      const i64 h_sum = class_number_charsum(d).h;
      if (h_enum != h_sum)
        throw IdentityViolation(d, "classnum.dual_method",
                                "enumeration " + std::to_string(h_enum) + " vs character sum " + std::to_string(h_sum));
    }
  });
}

void verify_split(VerifyReport& rep, const PrimeList& primes) {
  run_checked(rep, [&] {
    for (const i64 p : primes) {
      if (p % 8 != 1) continue;
      ++rep.checked;
      const bool power = is_split_complete(p);
      const bool congruences = z2_conditions(p);
      const ImaginaryPair h = imaginary_class_numbers(p);
      const bool classes = h.neg_p.h % 8 == 0 && h.neg_2p.h % 8 == 0;
      if (power != congruences || power != classes)
        throw IdentityViolation(p, "split.three_way",
                                "power " + std::to_string(power) + ", congruences " + std::to_string(congruences) +
                                    ", class numbers " + std::to_string(classes));
    }
  });
}

void verify_lw(VerifyReport& rep, const PrimeList& primes) {
  run_checked(rep, [&] {
    for (const i64 p : primes) {
      if (p % 8 != 1) continue;
      const SplitInputs in = gather_split_inputs(p);
      if (in.h_neg_p % 8 != 0 || in.h_neg_2p % 8 != 0) continue;
      ++rep.checked;
      lw_identity_suite(in);
    }
  });
}

void verify_kw(VerifyReport& rep, const PrimeList& primes) {
  const FactorTable table(std::max<i64>(2 * rep.x_max, 16));
  run_checked(rep, [&] {
    for (const i64 p : primes) {
      if (p % 8 != 1 || !is_split_complete(p)) continue;
      ++rep.checked;
      const SplitInputs in = gather_split_inputs(p);
      const int alpha = alpha_two_routes(in).value;
      const int beta = beta_three_routes(in, false).value;
      kw_classify(p, CellLabel{alpha, beta}, narrow_class_number(p, table).h, pell_invariant(p).e);
    }
  });
}

void verify_spin(VerifyReport& rep, const PrimeList& primes) {
  run_checked(rep, [&] {
    for (const i64 p : primes) {
      if (p % 8 != 1 && p % 8 != 7) continue;
      ++rep.checked;
      int expected = 0;
      if (p % 8 == 1 && is_split_complete(p)) {
        const SplitInputs in = gather_split_inputs(p);
        expected = beta_three_routes(in, false).class_number;
      }
      for (const IdealRep& ideal : prime_ideals_above(p)) {
        const int got = recover_beta(ideal);
        if (got != expected)
          throw IdentityViolation(p, "spin.recover_beta",
                                  "character average " + std::to_string(got) + ", expected " + std::to_string(expected));
      }
    }
  });
}

}  // namespace

VerifyReport verify(const std::string& suite, i64 x_max) {
  if (x_max < 2 || x_max > kMaxBound) throw ConfigError("x_max must be in [2, " + std::to_string(kMaxBound) + "]");
  VerifyReport rep;
  rep.suite = suite;
  rep.x_max = x_max;
  if (suite == "classnum") {
    verify_classnum(rep);
    return rep;
  }
  const PrimeList primes = sieve_primes(x_max);
  if (suite == "split") verify_split(rep, primes);
  else if (suite == "lw") verify_lw(rep, primes);
  else if (suite == "kw") verify_kw(rep, primes);
  else if (suite == "spin") verify_spin(rep, primes);
  else throw ConfigError("unknown suite '" + suite + "' (expected lw, kw, spin, classnum or split)");
  return rep;
}

nlohmann::json verify_json(const VerifyReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["x_max"] = r.x_max;
  j["checked"] = r.checked;
  j["status"] = r.passed ? "pass" : "fail";
  j["counterexample"] = r.counterexample ? nlohmann::json(*r.counterexample) : nlohmann::json(nullptr);
  if (!r.passed) {
    j["identity"] = r.identity;
    j["detail"] = r.detail;
  }
  return j;
}

// ---------------------------------------------------------------------------
// oscillation

std::optional<double> loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y == 0) continue;
    const double lx = std::log(x), ly = std::log(std::abs(y));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || std::abs(denom) < 1e-12) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

OscillationReport oscillation(int chi_index, int psi_index, const ScanResult& scanned, i64 checkpoint_base) {
  if (chi_index < 0 || chi_index >= 4) throw ConfigError("chi index must be in [0, 3]");
  if (psi_index < 0 || psi_index >= 8) throw ConfigError("psi index must be in [0, 7]");

  OscillationReport rep;
  rep.chi_index = chi_index;
  rep.psi_index = psi_index;
  rep.x_max = scanned.report.x_max;

  const PrimeList primes = sieve_primes(rep.x_max);
  std::vector<SignedPrime> signed_primes;
  for (const auto& rec : scanned.records)
    if (rec.split_complete) signed_primes.push_back({rec.p, *rec.alpha, *rec.beta});
  const std::vector<i64> cps = checkpoints(rep.x_max, checkpoint_base);
  const auto rows = partial_sums(primes, cps, characters_mod8()[static_cast<std::size_t>(chi_index)],
                                 characters_mod16()[static_cast<std::size_t>(psi_index)], signed_primes);

  std::vector<std::pair<double, double>> spin_pts, alpha_pts, beta_pts, ab_pts;
  for (const PartialSumRow& row : rows) {
    OscillationRow o{};
    o.sums = row;
    o.spin_abs = std::hypot(static_cast<double>(row.spin_sum_doubled.re), static_cast<double>(row.spin_sum_doubled.im)) / 2;
    o.spin_normalized = row.prime_ideals ? o.spin_abs / static_cast<double>(row.prime_ideals) : 0.0;
    const double n = static_cast<double>(row.split_complete);
    o.alpha_normalized = row.split_complete ? std::abs(static_cast<double>(row.sum_alpha)) / n : 0.0;
    o.beta_normalized = row.split_complete ? std::abs(static_cast<double>(row.sum_beta)) / n : 0.0;
    o.alpha_beta_normalized = row.split_complete ? std::abs(static_cast<double>(row.sum_alpha_beta)) / n : 0.0;
    rep.rows.push_back(o);

    const double x = static_cast<double>(row.x);
    spin_pts.emplace_back(x, o.spin_abs);
    alpha_pts.emplace_back(x, static_cast<double>(row.sum_alpha));
    beta_pts.emplace_back(x, static_cast<double>(row.sum_beta));
    ab_pts.emplace_back(x, static_cast<double>(row.sum_alpha_beta));
  }
  rep.slopes["spin"] = loglog_slope(spin_pts);
  rep.slopes["alpha"] = loglog_slope(alpha_pts);
  rep.slopes["beta"] = loglog_slope(beta_pts);
  rep.slopes["alpha_beta"] = loglog_slope(ab_pts);
  return rep;
}

std::string oscillation_csv(const OscillationReport& r) {
  std::ostringstream out;
  out << "X,prime_ideals,S_re2,S_im2,abs_S,abs_S_over_count,split_complete,sum_alpha,sum_beta,sum_alpha_beta\n";
  char buf[64];
  for (const auto& row : r.rows) {
    const auto& s = row.sums;
    out << s.x << ',' << s.prime_ideals << ',' << s.spin_sum_doubled.re << ',' << s.spin_sum_doubled.im << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.8f", row.spin_abs, row.spin_normalized);
    out << buf << ',' << s.split_complete << ',' << s.sum_alpha << ',' << s.sum_beta << ',' << s.sum_alpha_beta << '\n';
  }
  return out.str();
}

nlohmann::json oscillation_json(const OscillationReport& r) {
  using nlohmann::json;
  json rows = json::array();
  for (const auto& row : r.rows) {
    const auto& s = row.sums;
    rows.push_back(json{{"X", s.x},
                        {"prime_ideals", s.prime_ideals},
                        {"S_doubled", json{{"re", s.spin_sum_doubled.re}, {"im", s.spin_sum_doubled.im}}},
                        {"abs_S", row.spin_abs},
                        {"abs_S_over_count", row.spin_normalized},
                        {"split_complete", s.split_complete},
                        {"sum_alpha", s.sum_alpha},
                        {"sum_beta", s.sum_beta},
                        {"sum_alpha_beta", s.sum_alpha_beta},
                        {"alpha_over_count", row.alpha_normalized},
                        {"beta_over_count", row.beta_normalized},
                        {"alpha_beta_over_count", row.alpha_beta_normalized}});
  }
  json slopes = json::object();
  for (const auto& [name, s] : r.slopes) slopes[name] = s ? json(*s) : json(nullptr);
  return json{{"chi", characters_mod8()[static_cast<std::size_t>(r.chi_index)].label()},
              {"psi", characters_mod16()[static_cast<std::size_t>(r.psi_index)].label()},
              {"x_max", r.x_max},
              {"rows", rows},
              {"loglog_slopes", slopes},
              {"note", "slopes are descriptive; power savings this small are not resolvable at this range"}};
}

}  // namespace spin16
