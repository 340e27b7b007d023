#include "nrd/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nrd/errors.hpp"

namespace nrd {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t checksum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << content;
    if (!out) throw io_error("write failed for " + path);
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    write_text_file(tmp, content);
    std::filesystem::rename(tmp, path);
}

std::string snapshot_csv(const Field& u, int precision) {
    std::ostringstream os;
    os << "x,u\n";
    for (long i = 0; i < u.size(); ++i)
        os << format_double(u.grid.node(i), precision) << ',' << format_double(u[i], precision)
           << '\n';
    return os.str();
}

std::string snapshot_filename(double t) {
    std::string s = format_double(t, 12);
    for (char& c : s)
        if (c == '.') c = 'p';
    return "snapshot_" + s + ".csv";
}

void Manifest::add(const std::string& key, const std::string& value) {
    entries_.push_back({key, value});
}

void Manifest::add(const std::string& key, double value) {
    entries_.push_back({key, format_double(value)});
}

void Manifest::add_report(const ValidationReport& report) {
    for (const auto& c : report.checks)
        add("check." + report.subject + "." + c.name,
            std::string(c.passed ? "pass" : "FAIL") + " (" + format_double(c.measured) + ")");
}

void Manifest::add_file(const std::string& dir, const std::string& name) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(checksum_file(dir + "/" + name)));
    add("file." + name, buf);
}

std::string Manifest::text() const {
    std::ostringstream os;
    for (const auto& e : entries_) os << e.key << ": " << e.value << '\n';
    return os.str();
}

void Manifest::write(const std::string& path) const {
    write_text_file_atomic(path, text());
}

std::string tool_version() {
    return "nrdlab 1.0.0";
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << subject << ":";
    for (const auto& c : checks)
        os << ' ' << c.name << '=' << (c.passed ? "pass" : "FAIL");
    return os.str();
}

} // namespace nrd
