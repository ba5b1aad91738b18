#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace lindnet::app {

/// Locale-independent rendering of a double: '.' decimal separator, up to
/// 17 significant digits (round-trip exact).
std::string format_real(double value);

/// CSV with ',' separators and LF line endings, written in binary mode so
/// the bytes are platform-independent.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

}  // namespace lindnet::app
