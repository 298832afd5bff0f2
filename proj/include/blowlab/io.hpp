#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace blowlab {

/// Shortest-exact decimal for a double (%.17g); identical inputs always
/// serialize identically, which the determinism guarantees rely on.
std::string fmt_double(double v);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool files_identical(const std::string& a, const std::string& b);

/// Plain-text manifest: "<fnv1a64-hex>  <bytes>  <relative name>" per line.
void write_manifest(const std::string& dir, const std::vector<std::string>& names,
                    const std::string& header_note);

/// Flat little-endian double/array container used for the machine-readable
/// run checkpoint. Layout: magic, named scalar table, named array table.
class FlatWriter {
public:
    void scalar(const std::string& name, double v);
    void array(const std::string& name, std::span<const double> v);
    void save(const std::string& path) const;

private:
    std::vector<std::pair<std::string, double>> scalars_;
    std::vector<std::pair<std::string, std::vector<double>>> arrays_;
};

class FlatReader {
public:
    explicit FlatReader(const std::string& path);
    double scalar(const std::string& name) const;
    const std::vector<double>& array(const std::string& name) const;
    bool has_array(const std::string& name) const;

private:
    std::vector<std::pair<std::string, double>> scalars_;
    std::vector<std::pair<std::string, std::vector<double>>> arrays_;
};

} // namespace blowlab
