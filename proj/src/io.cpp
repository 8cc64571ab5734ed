#include "sgwe/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "sgwe/error.hpp"

namespace sgwe {

namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes little-endian");

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  return std::filesystem::path(stem.string() + ext);
}

}  // namespace

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_field(const Field2& f, const std::filesystem::path& stem) {
  const bool complex = f.max_imag() > 0.0;
  const nlohmann::json header = {{"L", f.grid().half_width()},
                                 {"N", f.grid().size()},
                                 {"frame", to_string(f.frame())},
                                 {"arity", f.components()},
                                 {"complex", complex},
                                 {"layout", "component-major, row-major (alpha, beta), float64 LE"}};
  write_json(with_ext(stem, ".json"), header);
  std::ofstream out(with_ext(stem, ".bin"), std::ios::binary);
  if (!out) throw IoError("cannot write " + with_ext(stem, ".bin").string());
  for (int c = 0; c < f.components(); ++c)
    for (const cplx& v : f.plane(c)) {
      const double re = v.real(), im = v.imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      if (complex) out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  if (!out) throw IoError("write failed for " + with_ext(stem, ".bin").string());
}

Field2 read_field(const std::filesystem::path& stem) {
  const auto h = read_json(with_ext(stem, ".json"));
  Field2 f(Grid2(h.at("L").get<double>(), h.at("N").get<int>()),
           frame_from_string(h.at("frame").get<std::string>().c_str()),
           h.at("arity").get<int>() == 2 ? Arity::vector2 : Arity::scalar);
  const bool complex = h.at("complex").get<bool>();
  std::ifstream in(with_ext(stem, ".bin"), std::ios::binary);
  if (!in) throw IoError("cannot read " + with_ext(stem, ".bin").string());
  for (int c = 0; c < f.components(); ++c)
    for (cplx& v : f.plane(c)) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof re);
      if (complex) in.read(reinterpret_cast<char*>(&im), sizeof im);
      v = {re, im};
    }
  if (!in) throw IoError("truncated field data in " + with_ext(stem, ".bin").string());
  return f;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const nlohmann::json& j) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw IoError("cannot write " + path.string());
  emit(header);
}

void CsvWriter::emit(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  if (!out_) throw IoError("write failed for " + path_.string());
}

void CsvWriter::Row::cell(const std::string& text) { cells_.push_back(text); }

CsvWriter::Row& CsvWriter::Row::operator<<(double v) {
  cell(format_double(v));
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(long long v) {
  cell(std::to_string(v));
  return *this;
}

CsvWriter::Row& CsvWriter::Row::operator<<(const std::string& v) {
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    cell(q + "\"");
  } else {
    cell(v);
  }
  return *this;
}

CsvWriter::Row::~Row() noexcept(false) { w_.emit(cells_); }

}  // namespace sgwe
