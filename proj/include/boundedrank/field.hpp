#pragma once

#include <array>
#include <cstdint>
#include <ostream>

#include "boundedrank/errors.hpp"

namespace boundedrank {

using Digit = std::uint8_t;

/// A small prime field GF(p), p in {2, 3, 5, 7}.
///
/// Arithmetic works on raw digits in [0, p). The multiplicative inverse is a
/// table lookup; everything else is a reduction of a small integer.
class Field {
public:
    static constexpr int kMaxOrder = 7;

    explicit Field(int order);

    int order() const noexcept { return p_; }

    Digit add(Digit a, Digit b) const noexcept {
        int s = a + b;
        return static_cast<Digit>(s >= p_ ? s - p_ : s);
    }
    Digit sub(Digit a, Digit b) const noexcept {
        int s = a - b;
        return static_cast<Digit>(s < 0 ? s + p_ : s);
    }
    Digit neg(Digit a) const noexcept { return static_cast<Digit>(a == 0 ? 0 : p_ - a); }
    Digit mul(Digit a, Digit b) const noexcept { return static_cast<Digit>((a * b) % p_); }
    /// Inverse of a nonzero digit. inv(0) returns 0.
    Digit inv(Digit a) const noexcept { return inv_[a]; }
    /// Reduce an arbitrary integer into [0, p).
    Digit reduce(long long v) const noexcept {
        long long r = v % p_;
        return static_cast<Digit>(r < 0 ? r + p_ : r);
    }

    friend bool operator==(const Field& a, const Field& b) noexcept { return a.p_ == b.p_; }

private:
    int p_;
    std::array<Digit, kMaxOrder> inv_{};
};

/// An element of a Field, carrying its order for checked arithmetic.
class FieldElem {
public:
    FieldElem(Field field, long long value) : field_(field), value_(field.reduce(value)) {}

    Digit value() const noexcept { return value_; }
    const Field& field() const noexcept { return field_; }

    FieldElem inverse() const;

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a) { return {a.field_, a.field_.neg(a.value_)}; }
    friend bool operator==(const FieldElem& a, const FieldElem& b) noexcept {
        return a.field_ == b.field_ && a.value_ == b.value_;
    }
    friend std::ostream& operator<<(std::ostream& os, const FieldElem& e) {
        return os << static_cast<int>(e.value_);
    }

private:
    Field field_;
    Digit value_;
};

}  // namespace boundedrank
