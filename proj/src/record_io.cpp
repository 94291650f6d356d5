#include "spin16/record_io.hpp"

#include <charconv>
#include <vector>

namespace spin16 {

namespace {

constexpr std::string_view kHeader =
    "p,split,a,b,c,d,u,v,g,h,h_neg_p,h_neg_2p,h_plus_2p,E,alpha,beta,hasse_Q,cell";
constexpr std::size_t kColumns = 18;

template <class T>
void put(std::string& out, const std::optional<T>& x) {
  out += ',';
  if (x) out += std::to_string(*x);
}

std::optional<i64> field(std::string_view s, bool& ok) {
  if (s.empty()) return std::nullopt;
  i64 v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) ok = false;
  return v;
}

std::optional<int> small_field(std::string_view s, bool& ok) {
  const auto v = field(s, ok);
  if (!v) return std::nullopt;
  return static_cast<int>(*v);
}

}  // namespace

std::string_view csv_header() { return kHeader; }

std::string to_csv_row(const PrimeRecord& r) {
  std::string out = std::to_string(r.p);
  out += r.split_complete ? ",1" : ",0";
  put(out, r.ab ? std::optional<i64>(r.ab->a) : std::nullopt);
  put(out, r.ab ? std::optional<i64>(r.ab->b) : std::nullopt);
  put(out, r.cd ? std::optional<i64>(r.cd->c) : std::nullopt);
  put(out, r.cd ? std::optional<i64>(r.cd->d) : std::nullopt);
  put(out, r.uv ? std::optional<i64>(r.uv->u) : std::nullopt);
  put(out, r.uv ? std::optional<i64>(r.uv->v) : std::nullopt);
  put(out, r.gh ? std::optional<i64>(r.gh->g) : std::nullopt);
  put(out, r.gh ? std::optional<i64>(r.gh->h) : std::nullopt);
  put(out, r.h_neg_p);
  put(out, r.h_neg_2p);
  put(out, r.h_plus_2p);
  put(out, r.e);
  put(out, r.alpha);
  put(out, r.beta);
  put(out, r.hasse_q);
  out += ',';
  if (r.cell) out += r.cell->str();
  return out;
}

std::optional<PrimeRecord> parse_csv_row(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cols.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (cols.size() != kColumns) return std::nullopt;

  bool ok = true;
  PrimeRecord r;
  const auto p = field(cols[0], ok);
  if (!p) return std::nullopt;
  r.p = *p;
  if (cols[1] != "0" && cols[1] != "1") return std::nullopt;
  r.split_complete = cols[1] == "1";

  const auto a = field(cols[2], ok), b = field(cols[3], ok);
  if (a && b) r.ab = GaussRep{*a, *b};
  const auto c = field(cols[4], ok), d = field(cols[5], ok);
  if (c && d) r.cd = TwoRep{*c, *d};
  const auto u = field(cols[6], ok), v = field(cols[7], ok);
  if (u && v) r.uv = PellRep{*u, *v};
  const auto g = field(cols[8], ok), h = field(cols[9], ok);
  if (g && h) r.gh = GHPair{*g, *h};
  r.h_neg_p = field(cols[10], ok);
  r.h_neg_2p = field(cols[11], ok);
  r.h_plus_2p = field(cols[12], ok);
  r.e = small_field(cols[13], ok);
  r.alpha = small_field(cols[14], ok);
  r.beta = small_field(cols[15], ok);
  r.hasse_q = small_field(cols[16], ok);
  const std::string_view cell = cols[17];
  if (!cell.empty()) {
    if (cell.size() != 2) return std::nullopt;
    r.cell = CellLabel{cell[0] == '+' ? 1 : -1, cell[1] == '+' ? 1 : -1};
  }
  if (!ok) return std::nullopt;
  return r;
}

nlohmann::json record_json(const PrimeRecord& r) {
  using nlohmann::json;
  json j;
  j["p"] = r.p;
  j["split_complete"] = r.split_complete;
  auto opt = [](const auto& x) -> json { return x ? json(*x) : json(nullptr); };
  j["gauss_rep"] = r.ab ? json{{"a", r.ab->a}, {"b", r.ab->b}} : json(nullptr);
  j["two_rep"] = r.cd ? json{{"c", r.cd->c}, {"d", r.cd->d}} : json(nullptr);
  j["pell_rep"] = r.uv ? json{{"u", r.uv->u}, {"v", r.uv->v}} : json(nullptr);
  j["gh"] = r.gh ? json{{"g", r.gh->g}, {"h", r.gh->h}} : json(nullptr);
  j["h_neg_p"] = opt(r.h_neg_p);
  j["h_neg_2p"] = opt(r.h_neg_2p);
  j["h_plus_2p"] = opt(r.h_plus_2p);
  j["E"] = opt(r.e);
  j["alpha"] = opt(r.alpha);
  j["beta"] = opt(r.beta);
  j["hasse_Q"] = opt(r.hasse_q);
  j["cell"] = r.cell ? json(r.cell->str()) : json(nullptr);
  if (r.witness) j["pell_witness"] = json{{"x", r.witness->x.get_str()}, {"y", r.witness->y.get_str()}};
  json verdicts = json::object();
  for (const auto& [name, ok] : r.verdicts) verdicts[name] = ok ? "pass" : "fail";
  j["verdicts"] = verdicts;
  return j;
}

}  // namespace spin16
