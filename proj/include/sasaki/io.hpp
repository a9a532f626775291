#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "sasaki/grid.hpp"

namespace sasaki {

/// "%.17g"
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// x,value table of a field on the grid.
CsvTable field_table(const Grid& grid, const Field& f);

/// Git blob hash: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_sha1(const std::string& content);

struct Artifact {
  std::string file;  // relative to the output directory
  std::string sha1;
  std::size_t bytes = 0;
};

/// Writes files under one directory and keeps their hashes for the manifest.
class ArtifactWriter {
 public:
  /// Creates the directory; throws ConfigError if it cannot be written.
  explicit ArtifactWriter(std::filesystem::path dir);
  void write(const std::string& name, const std::string& content);
  const std::vector<Artifact>& artifacts() const { return artifacts_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<Artifact> artifacts_;
};

}  // namespace sasaki
