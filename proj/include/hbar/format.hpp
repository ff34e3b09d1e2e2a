#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hbar {

// Shortest decimal string that round-trips to the same double; a positive
// precision caps the significant digits instead (general format).
inline std::string format_double(double v, int precision = 0) {
  char buf[64];
  std::to_chars_result r =
      precision > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision)
                    : std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, r.ptr);
}

// Write a file atomically: temp file in the same directory, then rename.
inline void atomic_write_file(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("short write: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("rename failed for " + path.string() + ": " + ec.message());
  }
}

// Minimal CSV assembly with a schema-version header comment, LF endings.
class CsvBuilder {
 public:
  CsvBuilder(std::string_view schema, const std::vector<std::string>& columns, int precision = 0)
      : precision_(precision) {
    out_ += "# schema: ";
    out_ += schema;
    out_ += '\n';
    append_row_strings(columns);
  }

  void add_row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      line += format_double(values[i], precision_);
    }
    line += '\n';
    out_ += line;
  }

  const std::string& str() const { return out_; }

 private:
  void append_row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::string out_;
  int precision_;
};

// FNV-1a 64-bit, used for the config provenance hash.
inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

}  // namespace hbar
