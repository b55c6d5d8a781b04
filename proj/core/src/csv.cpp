#include "drams/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace drams {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

CsvRow& CsvRow::add(std::string_view field) {
  if (!first_) line_ += ',';
  first_ = false;
  line_ += field;
  return *this;
}

CsvRow& CsvRow::add(double v) { return add(std::string_view(format_double(v))); }

CsvRow& CsvRow::add(std::int64_t v) { return add(std::string_view(std::to_string(v))); }

void write_csv_header(std::ostream& out, std::initializer_list<std::string_view> columns) {
  CsvRow row;
  for (const auto c : columns) row.add(c);
  out << row;
}

}  // namespace drams
