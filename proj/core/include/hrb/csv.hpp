#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "hrb/ddouble.hpp"

namespace hrb {

/// 17 significant digits (round-trip exact for double).
inline std::string fmt_double(double x, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

/// Decimal expansion of a double-double to `digits` significant digits.
inline std::string fmt_ddouble(DDouble x, int digits = 32) {
    if (x.hi() == 0.0 && x.lo() == 0.0) return "0";
    if (!std::isfinite(x.hi())) return fmt_double(x.hi());
    std::string out;
    DDouble v = abs(x);
    if (x.hi() < 0.0) out += '-';
    int e10 = static_cast<int>(std::floor(std::log10(v.hi())));
    // scale into [1, 10) with an exact-ish power of ten
    DDouble ten(10.0);
    DDouble scale(1.0);
    for (int i = 0; i < std::abs(e10); ++i) scale *= ten;
    v = (e10 >= 0) ? v / scale : v * scale;
    if (v.hi() >= 10.0) { v /= ten; ++e10; }
    if (v.hi() < 1.0) { v *= ten; --e10; }
    std::string mant;
    for (int i = 0; i < digits; ++i) {
        int d = static_cast<int>(v.hi());
        if (d < 0) d = 0;
        if (d > 9) d = 9;
        mant += static_cast<char>('0' + d);
        v = (v - DDouble(static_cast<double>(d))) * ten;
    }
    out += mant.substr(0, 1) + "." + mant.substr(1);
    out += "e" + std::to_string(e10);
    return out;
}

/// Minimal CSV emitter: '#' comment lines, a mandatory header, '.' decimal.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(const std::string& line) { os_ << "# " << line << "\n"; }

    void header(const std::vector<std::string>& cols) { write_line(cols); }

    void row(const std::vector<std::string>& cells) { write_line(cells); }

private:
    void write_line(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << "\n";
    }

    std::ostream& os_;
};

}  // namespace hrb
