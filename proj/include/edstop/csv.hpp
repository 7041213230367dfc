#ifndef EDSTOP_CSV_HPP
#define EDSTOP_CSV_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Just enough CSV to round-trip our own reports: fields containing a
// comma, quote or newline are double-quoted.

namespace edstop {

inline std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::vector<std::string> csv_split(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
        ++i;
    }
    if (quoted) throw std::runtime_error("unterminated quote in CSV line");
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace edstop

#endif
