#include "vsuq/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "vsuq/error.hpp"

namespace vsuq::io {

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("line " + std::to_string(line) + ": empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ": '" + t + "' is not a finite number");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DependencyError("missing input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

PairedSample parse_paired_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  PairedSample out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (!header) {
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two comma-separated columns");
    }
    out.x1.push_back(parse_number(line.substr(0, comma), lineno));
    out.x2.push_back(parse_number(line.substr(comma + 1), lineno));
  }
  if (!header) throw ParseError("empty CSV: expected a header row and data");
  if (out.size() < 10) {
    throw ParseError("CSV has " + std::to_string(out.size()) + " data rows; at least 10 are required");
  }
  return out;
}

std::string paired_csv(const PairedSample& data, const std::string& h1, const std::string& h2) {
  return columns_csv({h1, h2}, {data.x1, data.x2});
}

std::string matrix_csv(const SampleMatrix& m, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out += ",";
      out += format_double(m(r, c));
    }
    out += "\n";
  }
  return out;
}

std::string columns_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += "\n";
  const std::size_t rows = cols.empty() ? 0 : cols[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ",";
      out += format_double(cols[c][r]);
    }
    out += "\n";
  }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_manifest(const std::string& dir, const std::string& command, const std::string& config_hash,
                    std::uint64_t seed, const std::vector<std::string>& files) {
  nlohmann::ordered_json j;
  j["tool"] = "vsuq";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config_sha256"] = config_hash;
  j["seed"] = seed;
  j["timings_file"] = "timings.json";
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    list.push_back({{"file", f}, {"sha256", sha256_hex(read_file((std::filesystem::path(dir) / f).string()))}});
  }
  j["outputs"] = list;
  write_file((std::filesystem::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
}

std::vector<std::string> verify_manifest(const std::string& dir) {
  const std::string text = read_file((std::filesystem::path(dir) / "manifest.json").string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  std::vector<std::string> bad;
  for (const auto& entry : j.at("outputs")) {
    const std::string f = entry.at("file").get<std::string>();
    const auto path = std::filesystem::path(dir) / f;
    if (!std::filesystem::exists(path) || sha256_hex(read_file(path.string())) != entry.at("sha256").get<std::string>()) {
      bad.push_back(f);
    }
  }
  return bad;
}

}  // namespace vsuq::io
