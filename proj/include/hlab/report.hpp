#pragma once

#include <complex>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/util.hpp"

namespace hlab {

// Formats a complex value without commas so it stays a single CSV cell.
inline std::string fmt_c(std::complex<double> z) {
    if (z.imag() == 0.0) return fmt_g(z.real());
    std::string out = fmt_g(z.real());
    out += (z.imag() < 0.0) ? '-' : '+';
    out += fmt_g(std::fabs(z.imag()));
    out += 'i';
    return out;
}

// Minimal CSV emitter. Every table starts with a schema comment so consumers
// can reject files they do not understand; all floating point cells go
// through fmt_g, which keeps repeated runs byte-identical.
class CsvWriter {
  public:
    // Empty path writes to stdout.
    CsvWriter(const std::string& path, const std::string& schema) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
            os_ = &file_;
        } else {
            os_ = &std::cout;
        }
        *os_ << "# schema=" << schema << "\n";
    }

    void comment(const std::string& text) { *os_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& cols) { line(cols); }

    void row(const std::vector<std::string>& cells) { line(cells); }

    static std::string cell(double v) { return fmt_g(v); }
    static std::string cell(std::complex<double> v) { return fmt_c(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "1" : "0"; }

    void flush() { os_->flush(); }

  private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) *os_ << ',';
            *os_ << cells[i];
        }
        *os_ << "\n";
    }

    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

}  // namespace hlab
