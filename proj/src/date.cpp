#include "mscale/date.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace mscale {

namespace {

constexpr std::array<const char*, 12> kMonthAbbrev = {
    "jan", "feb", "mar", "apr", "may", "jun",
    "jul", "aug", "sep", "oct", "nov", "dec"};

int daysInMonth(int year, int month) {
    static constexpr std::array<int, 12> lens = {31, 28, 31, 30, 31, 30,
                                                 31, 31, 30, 31, 30, 31};
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) return 29;
    return lens[static_cast<std::size_t>(month - 1)];
}

}  // namespace

std::int64_t toSerialDay(const Date& d) {
    // Howard Hinnant's days_from_civil.
    std::int64_t y = d.year;
    y -= d.month <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date fromSerialDay(std::int64_t days) {
    std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                static_cast<int>(d)};
}

int weekdayIndex(const Date& d) {
    std::int64_t s = toSerialDay(d);
    // 1970-01-01 was a Thursday (index 3).
    return static_cast<int>(((s % 7) + 7 + 3) % 7);
}

bool isValidDate(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > daysInMonth(d.year, d.month)) return false;
    return true;
}

std::string formatDate(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

Date parseDate(std::string_view text, std::string_view pattern) {
    std::size_t ti = 0;
    auto fail = [&](const char* why) {
        throw std::invalid_argument("cannot parse date '" + std::string(text) +
                                    "' with pattern '" + std::string(pattern) +
                                    "': " + why);
    };
    auto readInt = [&](std::size_t maxDigits) {
        std::size_t start = ti;
        int v = 0;
        while (ti < text.size() && ti - start < maxDigits &&
               std::isdigit(static_cast<unsigned char>(text[ti]))) {
            v = v * 10 + (text[ti] - '0');
            ++ti;
        }
        if (ti == start) fail("expected digits");
        return v;
    };

    Date out;
    bool haveY = false, haveM = false, haveD = false;
    for (std::size_t pi = 0; pi < pattern.size(); ++pi) {
        char pc = pattern[pi];
        if (pc == '%' && pi + 1 < pattern.size()) {
            char code = pattern[++pi];
            switch (code) {
                case 'Y':
                    out.year = readInt(4);
                    haveY = true;
                    break;
                case 'm':
                    out.month = readInt(2);
                    haveM = true;
                    break;
                case 'd':
                    out.day = readInt(2);
                    haveD = true;
                    break;
                case 'b': {
                    if (ti + 3 > text.size()) fail("expected month name");
                    std::string abbr;
                    for (int k = 0; k < 3; ++k)
                        abbr += static_cast<char>(std::tolower(
                            static_cast<unsigned char>(text[ti + static_cast<std::size_t>(k)])));
                    int m = 0;
                    for (int k = 0; k < 12; ++k)
                        if (abbr == kMonthAbbrev[static_cast<std::size_t>(k)]) m = k + 1;
                    if (m == 0) fail("unknown month name");
                    out.month = m;
                    haveM = true;
                    ti += 3;
                    break;
                }
                default:
                    fail("unsupported pattern code");
            }
        } else {
            if (ti >= text.size() || text[ti] != pc) fail("literal mismatch");
            ++ti;
        }
    }
    if (ti != text.size()) fail("trailing characters");
    if (!haveY || !haveM || !haveD) fail("pattern lacks a date field");
    if (!isValidDate(out)) fail("no such calendar date");
    return out;
}

}  // namespace mscale
