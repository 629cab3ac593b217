#pragma once

#include <stdexcept>
#include <string>

namespace arboru {

// Thrown by every text-format parser in the library. line/col are 1-based;
// col 0 means "whole line" (e.g. a missing required field).
class parse_error : public std::runtime_error {
public:
    parse_error(std::string msg, int line = 0, int col = 0)
        : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col) {
        if (line <= 0) return msg;
        std::string s = "line " + std::to_string(line);
        if (col > 0) s += ", col " + std::to_string(col);
        s += ": " + msg;
        return s;
    }

    int line_;
    int col_;
};

} // namespace arboru
