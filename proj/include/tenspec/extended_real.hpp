#pragma once

#include <string>

#include "tenspec/errors.hpp"

namespace tenspec {

// real number or -infinity
class ExtendedReal {
public:
    ExtendedReal(double v) : value_(v) {}
    static ExtendedReal neg_infinity() {
        ExtendedReal r(0.0);
        r.neg_inf_ = true;
        return r;
    }

    bool is_neg_infinity() const { return neg_inf_; }
    bool is_finite() const { return !neg_inf_; }
    double value() const {
        if (neg_inf_) throw DomainError("extended real is -infinity");
        return value_;
    }
    double value_or(double fallback) const { return neg_inf_ ? fallback : value_; }

    bool operator<=(double x) const { return neg_inf_ || value_ <= x; }
    std::string str() const { return neg_inf_ ? "-inf" : std::to_string(value_); }

private:
    double value_ = 0.0;
    bool neg_inf_ = false;
};

}  // namespace tenspec
