#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace levmem {

// Deterministic number formatting for CSV and reports: %.17g round-trips
// doubles exactly and is byte-stable across runs.
std::string fmt(double v);
std::string fmt(int v);

// Minimal CSV emitter with a fixed header; rows are pre-formatted cells.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& header);
    void row(const std::vector<std::string>& cells);
    ~CsvWriter();

  private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace levmem
