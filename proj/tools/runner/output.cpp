#include "output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <openssl/evp.h>

#include "alber/errors.hpp"
#include "alber/serialization.hpp"
#include "version.hpp"

namespace alber::lab {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    throw Error("CsvTable: row has " + std::to_string(row.size()) + " fields, header has " +
                std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string render(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return format_double(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return csv_escape(std::get<std::string>(c));
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(header_[i]);
  }
  out += "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += render(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256: digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

OutputDir::OutputDir(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InputError("output: cannot create '" + dir_ + "': " + ec.message());
}

void OutputDir::write_text(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::path(dir_) / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error("output: cannot write '" + path.string() + "'");
  files_.push_back({name, sha256_hex(content), content.size()});
}

void OutputDir::write_csv(const std::string& name, const CsvTable& table) {
  write_text(name, table.str());
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& doc) {
  write_text(name, doc.dump(2) + "\n");
}

void OutputDir::write_manifest(const std::string& subcommand, const nlohmann::json& config,
                               std::uint64_t seed, double wall_seconds, int exit_code) const {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) {
    files.push_back({{"path", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  const nlohmann::json m{{"schema", "alber.manifest/1"},
                         {"subcommand", subcommand},
                         {"tool_version", kToolVersion},
                         {"seed", seed},
                         {"config", config},
                         {"exit_code", exit_code},
                         {"wall_clock_seconds", wall_seconds},
                         {"files", files}};
  const auto path = std::filesystem::path(dir_) / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << "\n";
  if (!out) throw Error("output: cannot write '" + path.string() + "'");
}

}  // namespace alber::lab
