#include "levmem/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace levmem {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(int v) { return std::to_string(v); }

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path), columns_(1 + std::count(header.begin(), header.end(), ',')) {
    if (!out_) throw std::runtime_error("csv: cannot open '" + path + "'");
    out_ << header << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::runtime_error("csv: row width does not match the header");
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out_ << ',';
        out_ << cells[k];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() = default;

} // namespace levmem
