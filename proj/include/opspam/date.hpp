#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "opspam/util.hpp"

namespace opspam {

// Calendar date stored as a count of days since 1970-01-01 (proleptic Gregorian).
// Cheap to compare and subtract, which is all the feature code ever does.
struct Date {
    int serial = 0;

    friend auto operator<=>(const Date&, const Date&) = default;

    Date plus_days(long d) const { return Date{serial + static_cast<int>(d)}; }
};

inline long days_between(Date from, Date to) { return static_cast<long>(to.serial) - from.serial; }

inline std::optional<Date> make_date(int year, int month, int day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{static_cast<int>(sys_days{ymd}.time_since_epoch().count())};
}

struct CalendarParts {
    int year, month, day;
};

inline CalendarParts calendar_parts(Date d) {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{d.serial}}};
    return {static_cast<int>(ymd.year()), static_cast<int>(unsigned(ymd.month())),
            static_cast<int>(unsigned(ymd.day()))};
}

// Accepts MM-DD-YYYY (site export format) and YYYY-MM-DD (ISO). Slashes tolerated
// in the first form since some dumps use them.
inline std::optional<Date> parse_date(std::string_view text) {
    text = trim(text);
    int a = 0, b = 0, c = 0;
    char sep1 = 0, sep2 = 0, tail = 0;
    int got = std::sscanf(std::string(text).c_str(), "%d%c%d%c%d%c", &a, &sep1, &b, &sep2, &c, &tail);
    if (got != 5) return std::nullopt;
    if (sep1 != sep2 || (sep1 != '-' && sep1 != '/')) return std::nullopt;
    if (a < 0 || b < 0 || c < 0) return std::nullopt;
    if (a >= 1000) return make_date(a, b, c);  // YYYY-MM-DD
    return make_date(c, a, b);                 // MM-DD-YYYY
}

inline std::string format_date(Date d) {
    auto p = calendar_parts(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d-%02d-%04d", p.month, p.day, p.year);
    return buf;
}

inline std::string format_date_iso(Date d) {
    auto p = calendar_parts(d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", p.year, p.month, p.day);
    return buf;
}

struct CleanedDate {
    Date date;
    bool was_updated = false;
};

// Review dates sometimes arrive as "Update - 02-10-2015" when the author edited
// the review; strip the marker and remember that it was there.
inline CleanedDate clean_review_date(std::string_view raw) {
    std::string_view s = trim(raw);
    bool updated = false;
    constexpr std::string_view prefix = "Update - ";
    if (s.substr(0, prefix.size()) == prefix) {
        updated = true;
        s = trim(s.substr(prefix.size()));
    }
    auto d = parse_date(s);
    if (!d) throw ValidationError("unparseable date: \"" + std::string(raw) + "\"");
    return {*d, updated};
}

}  // namespace opspam
