#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace specreg::io {

// Shortest round-trip decimal representation (std::to_chars). Locale-free,
// byte-stable across reruns: the determinism contract for CSV artifacts
// rests on this formatting.
std::string format_double(double v);

// Minimal CSV builder: header row, comma separators, '\n' line endings.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header);
    void begin_row();
    void add(double v);
    void add(long long v);
    void add(const std::string& v);
    void end_row();
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
    bool row_open_ = false;
    bool first_field_ = true;
    std::size_t columns_ = 0;
    std::size_t fields_in_row_ = 0;
};

// FNV-1a 64-bit content hash, reported in run manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

} // namespace specreg::io
