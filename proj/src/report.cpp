#include "fbe/report.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "fbe/errors.hpp"

namespace fbe {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ConfigError("row width does not match the table header");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string Table::to_ndjson() const {
  std::ostringstream out;
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = cell_json(row[i]);
    out << obj.dump() << '\n';
  }
  return out.str();
}

std::string rip_json_record(const RipEstimate& estimate, std::size_t histogram_bins) {
  const auto& p = estimate.params;
  nlohmann::ordered_json rec;
  rec["params"] = {{"kind", matrix_kind_name(p.kind)},
                   {"n", p.n},
                   {"m", p.m},
                   {"k", p.k},
                   {"values", value_model_name(p.value_model)},
                   {"trials", p.trials},
                   {"seed", p.rng_seed}};
  rec["mean_delta"] = estimate.mean_delta;
  rec["zero_fraction"] = estimate.zero_fraction();
  auto cdf = nlohmann::ordered_json::array();
  for (const auto& [t, prob] : estimate.cdf_grid()) cdf.push_back({t, prob});
  rec["cdf"] = std::move(cdf);
  auto hist = nlohmann::ordered_json::array();
  for (const auto& b : rip_histogram(estimate, histogram_bins)) hist.push_back({b.lo, b.hi, b.count});
  rec["histogram"] = std::move(hist);
  return rec.dump();
}

Table rip_summary_table(const std::vector<RipEstimate>& estimates) {
  Table t;
  t.columns = {"kind", "n", "m", "k", "values", "trials", "seed", "mean_delta", "zero_fraction"};
  for (const auto& e : estimates) {
    const auto& p = e.params;
    t.add_row({std::string(matrix_kind_name(p.kind)), std::uint64_t{p.n}, std::uint64_t{p.m},
               std::uint64_t{p.k}, std::string(value_model_name(p.value_model)), std::uint64_t{p.trials},
               std::uint64_t{p.rng_seed}, e.mean_delta, e.zero_fraction()});
  }
  return t;
}

Table bound_curve_table(const std::vector<BoundPoint>& curve) {
  Table t;
  t.columns = {"delta", "exact", "stirling", "theorem1"};
  for (const auto& p : curve) t.add_row({p.delta, p.exact.value, p.stirling, p.theorem1});
  return t;
}

Table charikar_table(const std::vector<HammingStats>& stats) {
  Table t;
  t.columns = {"theta", "mean_h", "var_h", "predicted_mean", "predicted_var"};
  for (const auto& s : stats) t.add_row({s.theta, s.mean_h, s.var_h, s.predicted_mean, s.predicted_var});
  return t;
}

}  // namespace fbe
