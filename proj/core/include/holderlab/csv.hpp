#pragma once

// CSV conventions: ',' delimiter, '.' decimal point, LF line endings, reals
// printed with 17 significant digits. The first line is a '#' metadata
// comment carrying the timestamp; everything after it is deterministic.

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace holderlab::io {

/// "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_real(double value);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
            std::string_view metadata);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(unsigned long long value);
  CsvWriter& cell(std::size_t value) { return cell(static_cast<unsigned long long>(value)); }
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(bool value);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(const char* text) { return cell(std::string_view(text)); }
  void end_row();
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// One value per line under a single header naming the column (e.g. "a").
/// Blank lines and lines starting with '#' are skipped.
std::vector<double> read_column(const std::filesystem::path& path, std::string_view expected_header);

/// Data rows of a CSV written by CsvWriter (metadata comments removed).
std::vector<std::string> data_lines(const std::filesystem::path& path);

}  // namespace holderlab::io
