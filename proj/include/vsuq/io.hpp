#pragma once

#include <map>
#include <string>
#include <vector>

#include "vsuq/dvine.hpp"
#include "vsuq/obcs.hpp"

namespace vsuq::io {

/// "%.17g": round-trips every double.
std::string format_double(double x);

/// Reads a whole file; throws DependencyError when it does not exist.
std::string read_file(const std::string& path);
/// Writes bytes verbatim (LF line endings are the caller's).
void write_file(const std::string& path, const std::string& content);

/// Two numeric columns after a header row. Throws ParseError naming the line.
PairedSample parse_paired_csv(const std::string& text);
std::string paired_csv(const PairedSample& data, const std::string& h1 = "x1", const std::string& h2 = "x2");

std::string matrix_csv(const SampleMatrix& m, const std::vector<std::string>& header);
/// Columns of equal length under a header row.
std::string columns_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols);

std::string sha256_hex(const std::string& bytes);

struct ManifestEntry {
  std::string file;
  std::string sha256;
};

/// Writes manifest.json listing every output with its checksum.
void write_manifest(const std::string& dir, const std::string& command, const std::string& config_hash,
                    std::uint64_t seed, const std::vector<std::string>& files);

/// Re-hashes every file listed in dir/manifest.json; returns the mismatching
/// or missing files (empty when intact).
std::vector<std::string> verify_manifest(const std::string& dir);

}  // namespace vsuq::io
