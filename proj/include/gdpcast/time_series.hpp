#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/math.hpp"

namespace gdpcast {

/// Calendar position of one observation: (year, period) with period in 1..m.
struct CalendarPoint {
    int year = 0;
    int period = 1;

    bool operator==(const CalendarPoint&) const = default;
};

/**
 * Immutable equally-spaced series with a calendar origin and seasonal period.
 *
 * Element i maps to the calendar point obtained by advancing the origin by i
 * periods; the mapping is exact integer arithmetic, so slicing and differencing
 * keep calendars consistent without any date-library semantics.
 */
class TimeSeries {
public:
    TimeSeries(std::vector<double> values, int origin_year, int origin_period, int period_length)
        : values_(std::move(values)),
          origin_{origin_year, origin_period},
          period_length_(period_length) {
        if (values_.empty()) throw InputError("TimeSeries: values must be non-empty");
        if (!math::all_finite(values_)) throw InputError("TimeSeries: non-finite value");
        if (period_length_ < 1) throw InputError("TimeSeries: period length must be >= 1");
        if (origin_.period < 1 || origin_.period > period_length_)
            throw InputError("TimeSeries: origin period out of 1..m");
    }

    TimeSeries(std::vector<double> values, CalendarPoint origin, int period_length)
        : TimeSeries(std::move(values), origin.year, origin.period, period_length) {}

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    CalendarPoint origin() const { return origin_; }
    int period_length() const { return period_length_; }

    /// Calendar point of element i (i may be >= size(), e.g. for forecasts).
    CalendarPoint calendar_at(std::size_t i) const {
        const long long abs0 = absolute_index(origin_);
        const long long abs = abs0 + static_cast<long long>(i);
        const long long m = period_length_;
        long long year = abs / m;
        long long rem = abs % m;
        if (rem < 0) { rem += m; year -= 1; }
        return {static_cast<int>(year), static_cast<int>(rem) + 1};
    }

    CalendarPoint end_calendar() const { return calendar_at(size() - 1); }

    /// "1996-Q1"-style label of element i.
    std::string label_at(std::size_t i) const {
        const CalendarPoint c = calendar_at(i);
        return std::to_string(c.year) + "-Q" + std::to_string(c.period);
    }

    /// Index of a calendar point; throws InputError if outside the series.
    std::size_t index_of(CalendarPoint c) const {
        if (c.period < 1 || c.period > period_length_)
            throw InputError("TimeSeries::index_of: period out of 1..m");
        const long long offset = absolute_index(c) - absolute_index(origin_);
        if (offset < 0 || offset >= static_cast<long long>(size()))
            throw InputError("TimeSeries::index_of: " + std::to_string(c.year) + "-Q" +
                             std::to_string(c.period) + " outside the series range");
        return static_cast<std::size_t>(offset);
    }

    bool contains(CalendarPoint c) const {
        if (c.period < 1 || c.period > period_length_) return false;
        const long long offset = absolute_index(c) - absolute_index(origin_);
        return offset >= 0 && offset < static_cast<long long>(size());
    }

    /// Contiguous sub-series of `count` elements starting at `first`.
    TimeSeries slice(std::size_t first, std::size_t count) const {
        if (first >= size() || count == 0 || first + count > size())
            throw InputError("TimeSeries::slice: window out of range");
        std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                              values_.begin() + static_cast<std::ptrdiff_t>(first + count));
        return TimeSeries(std::move(v), calendar_at(first), period_length_);
    }

    /// Same calendar, new values (must have identical length).
    TimeSeries with_values(std::vector<double> v) const {
        if (v.size() != size()) throw InputError("TimeSeries::with_values: length mismatch");
        return TimeSeries(std::move(v), origin_, period_length_);
    }

    /// New series whose origin is this one's advanced by `shift` periods.
    TimeSeries advanced(std::size_t shift, std::vector<double> v) const {
        return TimeSeries(std::move(v), calendar_at(shift), period_length_);
    }

    /// Series starting one period past the last element of this one.
    TimeSeries continuation(std::vector<double> v) const {
        return TimeSeries(std::move(v), calendar_at(size()), period_length_);
    }

    bool same_calendar(const TimeSeries& other) const {
        return period_length_ == other.period_length_ && origin_ == other.origin_ &&
               size() == other.size();
    }

private:
    long long absolute_index(CalendarPoint c) const {
        return static_cast<long long>(c.year) * period_length_ + (c.period - 1);
    }

    std::vector<double> values_;
    CalendarPoint origin_;
    int period_length_;
};

/// Overlapping calendar window of two series, as (start_a, start_b, length);
/// length 0 means the calendars do not intersect.
inline std::array<std::size_t, 3> common_window(const TimeSeries& a, const TimeSeries& b) {
    if (a.period_length() != b.period_length())
        throw InputError("common_window: mismatched period lengths");
    const long long m = a.period_length();
    const auto abs_of = [m](CalendarPoint c) {
        return static_cast<long long>(c.year) * m + (c.period - 1);
    };
    const long long a0 = abs_of(a.origin());
    const long long b0 = abs_of(b.origin());
    const long long start = std::max(a0, b0);
    const long long stop = std::min(a0 + static_cast<long long>(a.size()),
                                    b0 + static_cast<long long>(b.size()));
    if (stop <= start) return {0, 0, 0};
    return {static_cast<std::size_t>(start - a0), static_cast<std::size_t>(start - b0),
            static_cast<std::size_t>(stop - start)};
}

} // namespace gdpcast
