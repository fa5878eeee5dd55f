#pragma once

#include "iono/common.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace iono::harness {

/// Shortest text that reads back to the same double; locale independent.
inline std::string format_number(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

/// Row-at-a-time CSV builder with a fixed header. Cells never contain
/// commas or quotes, so no escaping is done.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    require(!header_.empty(), "CSV header must not be empty");
  }

  class Row {
   public:
    Row& operator<<(double v) { return cell(format_number(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(std::size_t v) { return cell(std::to_string(v)); }
    Row& operator<<(bool v) { return cell(format_bool(v)); }
    Row& operator<<(const std::string& v) { return cell(v); }
    Row& operator<<(const char* v) { return cell(v); }

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    Row& cell(std::string s) {
      require(s.find_first_of(",\"\n") == std::string::npos, "CSV cell contains a delimiter");
      cells_.push_back(std::move(s));
      return *this;
    }
    std::vector<std::string>& cells_;
  };

  Row row() {
    check_last();
    rows_.emplace_back();
    return Row(rows_.back());
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const {
    check_last();
    std::ostringstream out;
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

 private:
  void check_last() const {
    if (!rows_.empty() && rows_.back().size() != header_.size())
      throw DomainError("CSV row has " + std::to_string(rows_.back().size()) + " cells, header has " +
                        std::to_string(header_.size()));
  }
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_text(path, t.str()); }

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

}  // namespace iono::harness
