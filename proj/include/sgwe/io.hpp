#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgwe/field.hpp"

namespace sgwe {

/// Writes `stem.json` (header: L, N, frame, arity, complex, layout) and
/// `stem.bin` (little-endian float64, component-major then row-major; real
/// and imaginary parts interleaved when complex).
void write_field(const Field2& f, const std::filesystem::path& stem);
Field2 read_field(const std::filesystem::path& stem);

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& bytes);
/// Hex FNV-1a hash of the compact JSON dump.
std::string config_hash(const nlohmann::json& j);

/// Shortest text that round-trips a double exactly.
std::string format_double(double v);

/// Comma-separated table with a fixed header; numbers are printed with
/// format_double so reruns compare byte for byte.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& operator<<(double v);
    Row& operator<<(long long v);
    Row& operator<<(int v) { return *this << static_cast<long long>(v); }
    Row& operator<<(const std::string& v);
    Row& operator<<(const char* v) { return *this << std::string(v); }
    ~Row() noexcept(false);

   private:
    void cell(const std::string& text);
    CsvWriter& w_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  const std::filesystem::path& path() const { return path_; }

 private:
  void emit(const std::vector<std::string>& cells);
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Creates the directory if needed; IoError when that fails.
void ensure_directory(const std::filesystem::path& dir);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace sgwe
