#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace alber::lab {

using Cell = std::variant<double, std::int64_t, std::string>;

/// RFC 4180 table: CRLF line ends, fields quoted when they contain a comma,
/// quote or line break; doubles with 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

std::string csv_escape(const std::string& field);
std::string sha256_hex(const std::string& bytes);

struct OutputFile {
  std::string name;
  std::string sha256;
  std::size_t bytes;
};

/// Single writer for one run directory; records every file for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::string dir);
  const std::string& path() const { return dir_; }

  void write_text(const std::string& name, const std::string& content);
  void write_csv(const std::string& name, const CsvTable& table);
  void write_json(const std::string& name, const nlohmann::json& doc);

  /// Writes manifest.json (not itself listed).
  void write_manifest(const std::string& subcommand, const nlohmann::json& config,
                      std::uint64_t seed, double wall_seconds, int exit_code) const;

  const std::vector<OutputFile>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<OutputFile> files_;
};

}  // namespace alber::lab
