#include "holderlab/csv.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "holderlab/errors.hpp"

namespace holderlab::io {
namespace {

bool needs_quotes(std::string_view text) {
  return text.find_first_of(",\"\n\r") != std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header,
                     std::string_view metadata)
    : path_(path), columns_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  out_ << "# " << metadata << " generated=" << utc_timestamp() << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) { return cell(std::string_view(format_real(value))); }

CsvWriter& CsvWriter::cell(long long value) { return cell(std::string_view(std::to_string(value))); }

CsvWriter& CsvWriter::cell(unsigned long long value) {
  return cell(std::string_view(std::to_string(value)));
}

CsvWriter& CsvWriter::cell(bool value) { return cell(std::string_view(value ? "true" : "false")); }

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (filled_ == columns_) throw Error("CSV row in " + path_.string() + " has too many cells");
  if (filled_) out_ << ',';
  if (needs_quotes(text)) {
    out_ << '"';
    for (char c : text) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  } else {
    out_ << text;
  }
  ++filled_;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw Error("CSV row in " + path_.string() + " has " + std::to_string(filled_) + " cells, expected " +
                std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw Error("write to " + path_.string() + " failed");
  out_.close();
}

std::vector<double> read_column(const std::filesystem::path& path, std::string_view expected_header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!header_seen) {
      if (s != expected_header) {
        throw ValidationError(path.string() + ": expected header '" + std::string(expected_header) +
                              "', found '" + std::string(s) + "'");
      }
      header_seen = true;
      continue;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": '" + std::string(s) +
                            "' is not a number");
    }
    values.push_back(v);
  }
  if (!header_seen) throw ValidationError(path.string() + " is empty");
  return values;
}

std::vector<std::string> data_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace holderlab::io
