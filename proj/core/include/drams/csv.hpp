#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace drams {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Comma-joined doubles in format_double form.
std::string format_list(const std::vector<double>& values);

/// Minimal CSV row builder. Fields are written as given; callers only pass
/// identifiers and numbers, which never need quoting.
class CsvRow {
 public:
  CsvRow& add(std::string_view field);
  CsvRow& add(double v);
  CsvRow& add(std::int64_t v);
  CsvRow& add(int v) { return add(static_cast<std::int64_t>(v)); }
  CsvRow& add(std::size_t v) { return add(static_cast<std::int64_t>(v)); }
  CsvRow& add_empty() { return add(std::string_view{}); }

  const std::string& str() const noexcept { return line_; }

 private:
  std::string line_;
  bool first_ = true;
};

void write_csv_header(std::ostream& out, std::initializer_list<std::string_view> columns);

inline std::ostream& operator<<(std::ostream& out, const CsvRow& row) { return out << row.str() << '\n'; }

}  // namespace drams
