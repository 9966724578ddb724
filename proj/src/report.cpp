#include "voltherm/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voltherm {

CheckResult CheckResult::leq(std::string name, double value, double threshold) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.threshold = threshold;
    c.pass = value <= threshold;
    return c;
}

CheckResult CheckResult::window(std::string name, double value, double lo, double hi) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.threshold = hi;
    c.pass = value >= lo && value <= hi;
    return c;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& header) { buf_ = header + "\n"; }

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ", ";
        buf_ += format_number(values[i]);
    }
    buf_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ", ";
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, buf_); }

void write_text_file(const std::string& path, const std::string& body) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace voltherm
