#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace adopt {

// CSV with '.' decimal, ',' separator, 17 significant digits so doubles
// round-trip exactly and reruns are byte-identical.
class CsvWriter {
public:
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += cols[i];
        }
        buf_ += '\n';
    }

    void field(double v) {
        char tmp[40];
        std::snprintf(tmp, sizeof(tmp), "%.17g", v);
        sep();
        buf_ += tmp;
    }

    void field(long v) {
        sep();
        buf_ += std::to_string(v);
    }

    void field(const std::string& v) {
        sep();
        buf_ += v;
    }

    void end_row() {
        buf_ += '\n';
        first_ = true;
    }

    const std::string& str() const { return buf_; }

private:
    void sep() {
        if (!first_) buf_ += ',';
        first_ = false;
    }

    std::string buf_;
    bool first_ = true;
};

}  // namespace adopt
