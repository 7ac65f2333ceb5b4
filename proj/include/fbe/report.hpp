#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fbe/bounds.hpp"
#include "fbe/rip.hpp"
#include "fbe/similarity.hpp"

namespace fbe {

// Shortest decimal text that round-trips to the same double ('.' separator).
std::string format_number(double value);

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t>;

// Flat result table, rendered as CSV (header row) or newline-delimited JSON
// (one object per row).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::string to_csv() const;
  std::string to_ndjson() const;
  std::string render(bool json) const { return json ? to_ndjson() : to_csv(); }
};

// {"params": {...}, "mean_delta": ..., "zero_fraction": ..., "cdf": [[t, p], ...],
//  "histogram": [[lo, hi, count], ...]} on a single line.
std::string rip_json_record(const RipEstimate& estimate, std::size_t histogram_bins);
Table rip_summary_table(const std::vector<RipEstimate>& estimates);

// Columns: delta, exact, stirling, theorem1.
Table bound_curve_table(const std::vector<BoundPoint>& curve);

// Columns: theta, mean_h, var_h, predicted_mean, predicted_var.
Table charikar_table(const std::vector<HammingStats>& stats);

}  // namespace fbe
