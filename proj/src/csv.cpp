#include "enzq/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace enzq {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0 as well
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (const auto& c : columns) cell(c);
  end_row();
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (row_started_) os_ << ',';
  os_ << text;
  row_started_ = true;
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  row_started_ = false;
}

}  // namespace enzq
