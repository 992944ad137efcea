#include "purt/month_index.hpp"

#include <cctype>
#include <cstdio>
#include <string>

#include "purt/errors.hpp"

namespace purt {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

MonthIndex MonthIndex::parse(const std::string& text) {
    if (text.size() > 7 && text[7] == '-') {
        throw SchemaError("date '" + text + "' carries a day component; expected \"YYYY-MM\"");
    }
    if (text.size() != 7 || text[4] != '-' || !all_digits(text, 0, 4) || !all_digits(text, 5, 2)) {
        throw SchemaError("date '" + text + "' is not of the form \"YYYY-MM\"");
    }
    const int year = std::stoi(text.substr(0, 4));
    const int month = std::stoi(text.substr(5, 2));
    if (month < 1 || month > 12) {
        throw SchemaError("date '" + text + "' has month outside 01..12");
    }
    return MonthIndex{year, month};
}

std::string MonthIndex::str() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

}  // namespace purt
