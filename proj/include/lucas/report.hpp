#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "lucas/sums.hpp"

namespace lucas {

// Reports are JSON-lines (one object per line, fixed key order) or a CSV
// mirror with identical columns. Numbers are rendered by the same JSON
// serializer in both formats, so a record is byte-for-byte reproducible
// regardless of format or thread count. Non-finite doubles become null
// (empty CSV cell).
using Record = nlohmann::ordered_json;

enum class ReportFormat { json, csv };

inline Record json_num(double v) {
  return std::isfinite(v) ? Record(v) : Record(nullptr);
}

// The shared column set for summation experiments; experiment-specific
// records add their own trailing fields.
inline Record sum_record(const std::string& experiment, const SumReport& r,
                         std::optional<u64> k_or_lambda, std::optional<double> y,
                         i64 runtime_ms) {
  Record rec;
  rec["experiment"] = experiment;
  rec["a1"] = r.params.a1;
  rec["a2"] = r.params.a2;
  rec["x"] = r.x;
  rec["k_or_lambda"] = k_or_lambda ? Record(*k_or_lambda) : Record(nullptr);
  rec["epsilon"] = r.epsilon;
  rec["value"] = json_num(r.value);
  rec["exact"] = r.exact ? Record(r.exact->get_str()) : Record(nullptr);
  rec["bound"] = json_num(r.bound);
  rec["ratio"] = json_num(r.ratio);
  rec["horizon"] = r.horizon ? Record(r.horizon) : Record(nullptr);
  rec["y"] = y ? json_num(*y) : Record(nullptr);
  rec["runtime_ms"] = runtime_ms;
  return rec;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_cell(const Record& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ';';
      out += e.dump();
    }
    return csv_escape(out);
  }
  return v.dump();
}

}  // namespace detail

class RecordWriter {
 public:
  RecordWriter(std::ostream& os, ReportFormat format)
      : os_(os), format_(format) {}

  void write(const Record& rec) {
    if (format_ == ReportFormat::json) {
      os_ << rec.dump() << '\n';
      return;
    }
    if (!header_written_) {
      bool first = true;
      for (const auto& item : rec.items()) {
        if (!first) os_ << ',';
        os_ << detail::csv_escape(item.key());
        first = false;
      }
      os_ << '\n';
      header_written_ = true;
    }
    bool first = true;
    for (const auto& item : rec.items()) {
      if (!first) os_ << ',';
      os_ << detail::csv_cell(item.value());
      first = false;
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  ReportFormat format_;
  bool header_written_ = false;
};

}  // namespace lucas
