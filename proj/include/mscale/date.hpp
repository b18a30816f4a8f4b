#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mscale {

// Civil calendar date. Comparison is lexicographic (y, m, d).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

// Days since 1970-01-01 (proleptic Gregorian).
std::int64_t toSerialDay(const Date& d);
Date fromSerialDay(std::int64_t days);

// 0 = Monday ... 6 = Sunday.
int weekdayIndex(const Date& d);

bool isValidDate(const Date& d);

// ISO-8601, zero padded.
std::string formatDate(const Date& d);

// Pattern supports %Y (4-digit year), %m, %d (1-2 digits), %b (English month
// abbreviation, case-insensitive); any other pattern character must match the
// input literally. Throws std::invalid_argument on mismatch or invalid date.
Date parseDate(std::string_view text, std::string_view pattern = "%Y-%m-%d");

}  // namespace mscale
