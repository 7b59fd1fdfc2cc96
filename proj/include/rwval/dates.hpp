#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "rwval/errors.hpp"

namespace rwval {

/// Calendar month, the time resolution of every series and contract here.
/// Stored as a flat month count so arithmetic and ordering are integral.
class Month {
public:
    Month() = default;

    Month(int year, int month) : idx_(year * 12 + (month - 1)) {
        if (month < 1 || month > 12)
            throw DomainError("Month: month must be in 1..12, got " + std::to_string(month));
    }

    /// Parse "YYYY-MM".
    static Month parse(std::string_view text);

    int year() const { return idx_ >= 0 ? idx_ / 12 : (idx_ - 11) / 12; }
    int month() const { return idx_ - year() * 12 + 1; }

    /// "YYYY-MM"
    std::string str() const;

    friend auto operator<=>(Month, Month) = default;

    Month& operator+=(int months) {
        idx_ += months;
        return *this;
    }
    friend Month operator+(Month m, int months) { return m += months; }
    friend Month operator-(Month m, int months) { return m += -months; }

    /// Whole months from b to a.
    friend int operator-(Month a, Month b) { return a.idx_ - b.idx_; }

private:
    int idx_ = 0;
};

/// Year fraction on the fixed monthly grid: each month counts as exactly 1/12.
inline double years_between(Month from, Month to) { return (to - from) / 12.0; }

/// Closed date range [from, to].
struct MonthRange {
    Month from;
    Month to;

    void validate() const {
        if (to < from)
            throw InvalidWindow("MonthRange: " + from.str() + " > " + to.str());
    }
    int months() const { return to - from; }
};

}  // namespace rwval
