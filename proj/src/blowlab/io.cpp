#include "blowlab/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace blowlab {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_text_file: cannot open " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_text_file: cannot open " + path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

bool files_identical(const std::string& a, const std::string& b) {
    return read_text_file(a) == read_text_file(b);
}

void write_manifest(const std::string& dir, const std::vector<std::string>& names,
                    const std::string& header_note) {
    std::string out = "# manifest (fnv1a64  bytes  name)";
    if (!header_note.empty())
        out += "  " + header_note;
    out += "\n";
    for (const auto& name : names) {
        const std::string path = dir + "/" + name;
        const std::string data = read_text_file(path);
        const std::uint64_t h =
            fnv1a64({reinterpret_cast<const unsigned char*>(data.data()), data.size()});
        char line[64];
        std::snprintf(line, sizeof(line), "%016llx  %12zu  ", static_cast<unsigned long long>(h),
                      data.size());
        out += line;
        out += name;
        out += "\n";
    }
    write_text_file(dir + "/manifest.txt", out);
}

namespace {

constexpr char kMagic[8] = {'B', 'L', 'W', 'F', 'L', 'A', 'T', '1'};

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_double(std::ofstream& out, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(out, v);
}

double get_double(std::ifstream& in) {
    const std::uint64_t v = get_u64(in);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

void put_string(std::ofstream& out, const std::string& s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& in) {
    const std::uint64_t n = get_u64(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    return s;
}

} // namespace

void FlatWriter::scalar(const std::string& name, double v) {
    scalars_.emplace_back(name, v);
}

void FlatWriter::array(const std::string& name, std::span<const double> v) {
    arrays_.emplace_back(name, std::vector<double>(v.begin(), v.end()));
}

void FlatWriter::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("FlatWriter: cannot open " + path);
    out.write(kMagic, 8);
    put_u64(out, scalars_.size());
    for (const auto& [name, v] : scalars_) {
        put_string(out, name);
        put_double(out, v);
    }
    put_u64(out, arrays_.size());
    for (const auto& [name, v] : arrays_) {
        put_string(out, name);
        put_u64(out, v.size());
        for (double d : v)
            put_double(out, d);
    }
}

FlatReader::FlatReader(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("FlatReader: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("FlatReader: bad magic in " + path);
    const std::uint64_t nscal = get_u64(in);
    for (std::uint64_t i = 0; i < nscal; ++i) {
        std::string name = get_string(in);
        scalars_.emplace_back(std::move(name), get_double(in));
    }
    const std::uint64_t narr = get_u64(in);
    for (std::uint64_t i = 0; i < narr; ++i) {
        std::string name = get_string(in);
        const std::uint64_t n = get_u64(in);
        std::vector<double> v(n);
        for (std::uint64_t j = 0; j < n; ++j)
            v[j] = get_double(in);
        arrays_.emplace_back(std::move(name), std::move(v));
    }
    if (!in)
        throw std::runtime_error("FlatReader: truncated file " + path);
}

double FlatReader::scalar(const std::string& name) const {
    for (const auto& [n, v] : scalars_)
        if (n == name)
            return v;
    throw std::runtime_error("FlatReader: missing scalar " + name);
}

const std::vector<double>& FlatReader::array(const std::string& name) const {
    for (const auto& [n, v] : arrays_)
        if (n == name)
            return v;
    throw std::runtime_error("FlatReader: missing array " + name);
}

bool FlatReader::has_array(const std::string& name) const {
    for (const auto& [n, v] : arrays_)
        if (n == name)
            return true;
    return false;
}

} // namespace blowlab
