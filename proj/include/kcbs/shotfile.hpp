#pragma once

// Versioned flat-file container for shot records: a key=value header
// followed by one record per line. Reading is strict and reports schema
// violations with line numbers. An import-adapter interface decouples the
// analysis pipeline from this particular container.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "kcbs/ngon.hpp"
#include "kcbs/stats.hpp"

namespace kcbs {

inline constexpr int kShotFileVersion = 1;

struct ShotFileHeader {
  int version = kShotFileVersion;
  int n_obs = 5;
  double theta_set = 0.0;
  SequenceMode mode = SequenceMode::Block;
  std::vector<Order> orders;
  long n_per_pair = 0;
  std::uint64_t seed = 0;
  std::string noise;  // descriptor, e.g. "ideal" or "calibrated"
};

struct ShotData {
  ShotFileHeader header;
  std::vector<ShotRecord> records;
};

struct ShotFileError : std::runtime_error {
  ShotFileError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  long line;
};

void write_shotfile(std::ostream& out, const ShotData& data);
void write_shotfile(const std::filesystem::path& path, const ShotData& data);

ShotData read_shotfile(std::istream& in);
ShotData read_shotfile(const std::filesystem::path& path);

/// Adapter interface for foreign raw-data formats. The native container is
/// the one built-in adapter; external dataset schemas can be plugged in
/// without touching the analysis code.
class ShotImportAdapter {
 public:
  virtual ~ShotImportAdapter() = default;
  virtual std::string name() const = 0;
  virtual ShotData import(std::istream& in) const = 0;
};

/// Returns the adapter registered under `name` ("native" is built in),
/// or nullptr.
const ShotImportAdapter* find_import_adapter(const std::string& name);

}  // namespace kcbs
