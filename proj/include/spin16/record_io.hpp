#pragma once

// CSV and JSON encodings of PrimeRecord.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spin16/invariants.hpp"

namespace spin16 {

/// p,split,a,b,c,d,u,v,g,h,h_neg_p,h_neg_2p,h_plus_2p,E,alpha,beta,hasse_Q,cell
std::string_view csv_header();

/// One data row without the trailing newline; undefined fields are empty.
std::string to_csv_row(const PrimeRecord& rec);

/// Inverse of to_csv_row. Verdicts and witnesses are not part of the CSV.
/// Returns nullopt on a malformed row.
std::optional<PrimeRecord> parse_csv_row(std::string_view line);

/// Single-prime dossier with verdicts and (if present) the Pell witness.
nlohmann::json record_json(const PrimeRecord& rec);

}  // namespace spin16
