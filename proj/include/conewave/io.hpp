#ifndef CONEWAVE_IO_HPP
#define CONEWAVE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace conewave {

// Locale-independent formatting with 17 significant digits; every data file
// goes through this so reruns are byte-identical.
std::string fmt_double(double x);

std::string fnv1a64_hex(const std::string& data);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& cells);
    void row_doubles(const std::vector<double>& cells);

private:
    std::ofstream out_;
};

// Minimal reader for our own CSV files: header line + numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);

} // namespace conewave

#endif
