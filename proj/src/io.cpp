#include "conewave/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace conewave {

std::string fmt_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 17);
    if (ec != std::errc())
        throw std::runtime_error("fmt_double: to_chars failed");
    return std::string(buf, ptr);
}

std::string fnv1a64_hex(const std::string& data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary); // binary: no platform newline translation
    if (!out_)
        throw std::runtime_error("cannot open for writing: " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::row_doubles(const std::vector<double>& cells)
{
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(fmt_double(x));
    row(s);
}

int CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path.string());
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = cells;
            first = false;
        } else {
            std::vector<double> vals;
            vals.reserve(cells.size());
            for (const auto& c : cells) {
                double v = 0.0;
                auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
                (void)p;
                if (ec != std::errc())
                    throw std::runtime_error("non-numeric CSV cell '" + c + "' in " + path.string());
                vals.push_back(v);
            }
            table.rows.push_back(std::move(vals));
        }
    }
    return table;
}

} // namespace conewave
