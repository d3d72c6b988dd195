#pragma once

#include <gmpxx.h>

#include <string>

#include "shifteq/errors.hpp"

namespace shifteq {

// All matrix arithmetic is exact and arbitrary-precision.
using Nat = mpz_class;

inline bool fits_size_t(const Nat& n) { return n >= 0 && n.fits_ulong_p(); }

inline std::size_t to_size_t(const Nat& n) {
    if (!fits_size_t(n))
        throw InvariantViolation("value out of addressable range: " + n.get_str());
    return static_cast<std::size_t>(n.get_ui());
}

// Element of N ∪ {ω}. ω absorbs addition and multiplication by nonzero;
// 0·ω = ω·0 = 0 (cardinal arithmetic for countable cardinals).
class Card {
public:
    Card() : omega_(false), value_(0) {}
    Card(const Nat& v) : omega_(false), value_(v) {
        if (v < 0) throw InvariantViolation("negative cardinal");
    }
    Card(long v) : Card(Nat(v)) {}

    static Card omega() {
        Card c;
        c.omega_ = true;
        return c;
    }

    bool is_omega() const { return omega_; }
    bool is_zero() const { return !omega_ && value_ == 0; }
    const Nat& finite_value() const {
        if (omega_) throw InvariantViolation("ω has no finite value");
        return value_;
    }

    friend Card operator+(const Card& a, const Card& b) {
        if (a.omega_ || b.omega_) return omega();
        return Card(a.value_ + b.value_);
    }
    friend Card operator*(const Card& a, const Card& b) {
        if (a.is_zero() || b.is_zero()) return Card(Nat(0));
        if (a.omega_ || b.omega_) return omega();
        return Card(a.value_ * b.value_);
    }
    Card& operator+=(const Card& b) { return *this = *this + b; }

    friend bool operator==(const Card& a, const Card& b) {
        if (a.omega_ != b.omega_) return false;
        return a.omega_ || a.value_ == b.value_;
    }
    friend bool operator!=(const Card& a, const Card& b) { return !(a == b); }

    std::string str() const { return omega_ ? "w" : value_.get_str(); }

private:
    bool omega_;
    Nat value_;
};

// Lag of a (strong) shift equivalence; always at least one.
struct Lag {
    int m;
    explicit Lag(int lag) : m(lag) {
        if (lag < 1) throw BadLevel("lag must be >= 1, got " + std::to_string(lag));
    }
};

}  // namespace shifteq
