#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nrd/grid.hpp"
#include "nrd/validation.hpp"

namespace nrd {

// 17 significant digits: round-trips IEEE doubles through text.
std::string format_double(double v, int precision = 17);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t checksum_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
// write to <path>.tmp then rename, so readers never see a partial file
void write_text_file_atomic(const std::string& path, const std::string& content);

std::string snapshot_csv(const Field& u, int precision = 17);
std::string snapshot_filename(double t);

struct ManifestEntry {
    std::string key;
    std::string value;
};

// Reproducibility manifest: resolved config echo, tool version, wall clock,
// validation summaries, and an inventory of emitted files with checksums.
// Plain key: value lines; written atomically at run end.
class Manifest {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add_report(const ValidationReport& report);
    void add_file(const std::string& dir, const std::string& name);
    void write(const std::string& path) const;
    std::string text() const;

private:
    std::vector<ManifestEntry> entries_;
};

std::string tool_version();

} // namespace nrd
