#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xlex::csv {

// RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF records.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws MalformedRow on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  // Line number on which the most recently returned record started (1-based).
  std::size_t line() const { return record_line_; }

  void set_source(std::string source) { source_ = std::move(source); }

 private:
  std::istream& in_;
  std::string source_ = "<stream>";
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

void write_row(std::ostream& out, std::span<const std::string> fields);
void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);

// Twelve significant digits, shortest form (printf %.12g).
std::string format_real(double value);

std::optional<double> parse_real(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

// Opens `path` for reading or throws FileNotFound.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace xlex::csv
