#include "app/csvio.hpp"

#include <charconv>
#include <stdexcept>

#include "app/config.hpp"

namespace lindnet::app {

std::string format_real(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), value,
                               std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw IoError(path_ + ": row width " + std::to_string(cells.size()) +
                  " does not match header width " + std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw IoError(path_ + ": write failed");
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError(path_ + ": close failed");
}

}  // namespace lindnet::app
