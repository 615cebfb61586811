#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace enzq {

// 17 significant digits, '.' decimal separator, locale independent.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& columns);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  std::ostream& os_;
  bool row_started_ = false;
};

}  // namespace enzq
