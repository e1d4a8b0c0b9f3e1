#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dimer {

// Signed log-magnitude representation of a real: value = sign * exp(log_abs).
// sign == 0 encodes exact zero (log_abs holds the -inf sentinel).  Partition
// function pieces live here because Z_sectors span far more than the double
// exponent range and one of them can be negative.
struct SignedLog {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog zero() { return {}; }
    static SignedLog one() { return {0.0, +1}; }

    static SignedLog from_value(double v) {
        if (v == 0.0) return zero();
        return {std::log(std::fabs(v)), v > 0.0 ? +1 : -1};
    }
    static SignedLog from_log(double log_abs, int sign = +1) {
        if (sign == 0) return zero();
        return {log_abs, sign > 0 ? +1 : -1};
    }

    bool is_zero() const { return sign == 0; }

    // Safe only when log_abs is within the double exponent range.
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

    SignedLog operator-() const { return {log_abs, -sign}; }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return zero();
        return {log_abs + o.log_abs, sign * o.sign};
    }

    SignedLog operator/(const SignedLog& o) const {
        if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
        if (sign == 0) return zero();
        return {log_abs - o.log_abs, sign * o.sign};
    }

    // Signed log-sum-exp.  Exact cancellation of equal magnitudes yields zero().
    SignedLog operator+(const SignedLog& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const SignedLog& big = (log_abs >= o.log_abs) ? *this : o;
        const SignedLog& sml = (log_abs >= o.log_abs) ? o : *this;
        const double d = sml.log_abs - big.log_abs;  // <= 0
        if (sign == o.sign) return {big.log_abs + std::log1p(std::exp(d)), big.sign};
        const double rem = -std::expm1(d);  // 1 - e^d in [0, 1]
        if (rem == 0.0) return zero();
        return {big.log_abs + std::log(rem), big.sign};
    }

    SignedLog operator-(const SignedLog& o) const { return *this + (-o); }

    SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }
    SignedLog& operator+=(const SignedLog& o) { return *this = *this + o; }
};

inline SignedLog scaled(const SignedLog& x, double factor) {
    return x * SignedLog::from_value(factor);
}

}  // namespace dimer
