#include "rwval/dates.hpp"

#include <cctype>
#include <cstdio>

namespace rwval {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Month Month::parse(std::string_view text) {
    const auto dash = text.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 >= text.size())
        throw InvalidDatum("expected YYYY-MM date, got '" + std::string(text) + "'");
    const std::string_view y = text.substr(0, dash);
    const std::string_view m = text.substr(dash + 1);
    if (!all_digits(y) || !all_digits(m) || m.size() != 2)
        throw InvalidDatum("expected YYYY-MM date, got '" + std::string(text) + "'");
    const int year = std::stoi(std::string(y));
    const int month = std::stoi(std::string(m));
    if (month < 1 || month > 12)
        throw InvalidDatum("month out of range in '" + std::string(text) + "'");
    return Month(year, month);
}

std::string Month::str() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
    return buf;
}

}  // namespace rwval
