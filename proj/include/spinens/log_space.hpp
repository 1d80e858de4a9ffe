#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace spinens {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.5772156649015329;
inline constexpr double log_zero = -std::numeric_limits<double>::infinity();

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }  // 0 ln 0 := 0

// log(e^a + e^b) without overflow; log_zero stands for an exact zero term
inline double log_add(double a, double b) {
    if (a == log_zero) return b;
    if (b == log_zero) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// log(e^a - e^b); requires a >= b
inline double log_sub(double a, double b) {
    if (b == log_zero) return a;
    if (a < b) throw std::domain_error("log_sub: requires a >= b");
    if (a == b) return log_zero;
    return a + std::log1p(-std::exp(b - a));
}

// Nonnegative real carried as its natural logarithm. Exact zero is kept as
// -inf, so sums and products of zeros behave like the real numbers they stand
// for instead of producing NaN.
class LogNumber {
public:
    LogNumber() = default;

    static LogNumber from_log(double log_value) {
        if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity())
            throw std::domain_error("LogNumber: log value must be finite or -inf");
        LogNumber x;
        x.log_ = log_value;
        return x;
    }

    static LogNumber from_value(double value) {
        if (!(value >= 0.0) || !std::isfinite(value))
            throw std::domain_error("LogNumber: value must be finite and nonnegative");
        return from_log(value == 0.0 ? log_zero : std::log(value));
    }

    double log() const { return log_; }
    double value() const { return log_ == log_zero ? 0.0 : std::exp(log_); }
    bool is_zero() const { return log_ == log_zero; }

    friend LogNumber operator+(LogNumber a, LogNumber b) { return from_log(log_add(a.log_, b.log_)); }
    friend LogNumber operator*(LogNumber a, LogNumber b) {
        if (a.is_zero() || b.is_zero()) return LogNumber{};
        return from_log(a.log_ + b.log_);
    }
    friend LogNumber operator/(LogNumber a, LogNumber b) {
        if (b.is_zero()) throw std::domain_error("LogNumber: division by zero");
        if (a.is_zero()) return LogNumber{};
        return from_log(a.log_ - b.log_);
    }
    friend bool operator<(LogNumber a, LogNumber b) { return a.log_ < b.log_; }
    friend bool operator==(LogNumber a, LogNumber b) { return a.log_ == b.log_; }

private:
    double log_ = log_zero;
};

// Fixed-topology pairwise summation: the result depends only on the element
// order, never on chunking, and rounding error grows like O(log n).
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

inline double log_sum_exp(std::span<const double> logs) {
    double hi = log_zero;
    for (double v : logs) hi = v > hi ? v : hi;
    if (hi == log_zero) return log_zero;
    double s = 0.0;
    for (double v : logs) s += v == log_zero ? 0.0 : std::exp(v - hi);
    return hi + std::log(s);
}

// Accumulates a sum whose terms arrive as (log magnitude, sign), keeping the
// positive and negative parts in separate log-space accumulators so terms of
// either sign can be folded in without leaving the log domain.
class SignedLogAccumulator {
public:
    void add(double log_magnitude, int sign) {
        if (log_magnitude == log_zero || sign == 0) return;
        // a term exactly opposite to the other side's running total cancels it
        // outright, so pair-cancelling walks stay exact even when the pair
        // magnitude is far outside double range
        if (sign > 0) {
            if (log_magnitude == neg_) {
                neg_ = log_zero;
                return;
            }
            pos_ = log_add(pos_, log_magnitude);
        } else {
            if (log_magnitude == pos_) {
                pos_ = log_zero;
                return;
            }
            neg_ = log_add(neg_, log_magnitude);
        }
    }

    void add_value(double v) {
        if (v == 0.0) return;
        add(std::log(std::abs(v)), v > 0.0 ? 1 : -1);
    }

    // (log |sum|, sign of sum); sign 0 for an exact cancellation
    std::pair<double, int> log_value() const {
        if (pos_ == neg_) return {log_zero, 0};
        if (pos_ > neg_) return {log_sub(pos_, neg_), 1};
        return {log_sub(neg_, pos_), -1};
    }

    double value() const {
        const auto [lv, sign] = log_value();
        return sign == 0 ? 0.0 : sign * std::exp(lv);
    }

private:
    double pos_ = log_zero;
    double neg_ = log_zero;
};

// ln erfc(y) for any y; beyond the erfc underflow region the standard
// asymptotic series erfc(y) ~ e^{-y^2}/(y sqrt(pi)) (1 - 1/(2y^2) + ...)
// takes over with relative error below 3e-9 at the switch point.
inline double log_erfc(double y) {
    if (y < 20.0) return std::log(std::erfc(y));
    const double y2 = y * y;
    const double series = 1.0 - 0.5 / y2 + 0.75 / (y2 * y2) - 1.875 / (y2 * y2 * y2);
    return -y2 - std::log(y) - 0.5 * std::log(pi) + std::log(series);
}

}  // namespace spinens
