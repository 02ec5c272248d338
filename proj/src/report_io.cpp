#include <cmath>
#include <ostream>

#include <json.hpp>

#include "tlab/limsup.hpp"

namespace tlab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_report_csv(std::ostream& os, const ExperimentReport& r) {
  const auto old = os.precision(17);
  os << "experiment,parameters,measured,tolerance,pass\n";
  for (const auto& row : r.rows)
    os << csv_field(r.name) << ',' << csv_field(row.parameters) << ',' << row.measured << ',' << row.tolerance << ','
       << (row.pass ? "true" : "false") << '\n';
  os.precision(old);
}

void write_report_json(std::ostream& os, const ExperimentReport& r) {
  using nlohmann::ordered_json;
  auto number = [](double v) -> ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  ordered_json doc;
  doc["name"] = r.name;
  doc["note"] = r.note;
  doc["metadata"] = {{"seed", r.seed}, {"symbol", r.symbol}, {"ranks", r.ranks}};
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"parameters", row.parameters},
                    {"measured", number(row.measured)},
                    {"tolerance", number(row.tolerance)},
                    {"pass", row.pass}});
  doc["rows"] = std::move(rows);
  doc["all_pass"] = r.all_pass();
  os << doc.dump(2) << '\n';
}

}  // namespace tlab
