#pragma once

#include <string>
#include <vector>

namespace voltherm {

/// One named numeric check: a measured value against a pinned threshold.
/// `value` is compared as value <= threshold unless the producer already
/// folded the comparison into `pass` (e.g. two-sided windows).
struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;

    static CheckResult leq(std::string name, double value, double threshold);
    static CheckResult window(std::string name, double value, double lo, double hi);
};

/// Shortest-exact decimal rendering of a double ("%.17g" round-trips every
/// finite value). Used for every numeric cell so repeated runs with identical
/// inputs serialize byte-identically.
std::string format_number(double x);

/// Line-oriented CSV accumulator with a fixed header row. Numeric rows are
/// rendered by format_number; mixed rows take preformatted cells.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);

    const std::string& str() const { return buf_; }
    void save(const std::string& path) const;

  private:
    std::string buf_;
};

/// Write a string to a file, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& body);

/// Read a whole file; throws std::runtime_error when missing.
std::string read_text_file(const std::string& path);

} // namespace voltherm
