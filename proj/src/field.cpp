#include "boundedrank/field.hpp"

#include <string>

namespace boundedrank {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

Field::Field(int order) : p_(order) {
    if (!is_prime(order))
        throw UnsupportedField("prime fields only (got order " + std::to_string(order) + ")");
    if (order > kMaxOrder)
        throw UnsupportedField("field order " + std::to_string(order) +
                               " unsupported (supported: 2, 3, 5, 7)");
    for (int a = 1; a < p_; ++a)
        for (int b = 1; b < p_; ++b)
            if ((a * b) % p_ == 1) inv_[a] = static_cast<Digit>(b);
}

FieldElem FieldElem::inverse() const {
    if (value_ == 0) throw Error("zero has no inverse");
    return {field_, field_.inv(value_)};
}

namespace {
void check_same(const FieldElem& a, const FieldElem& b) {
    if (!(a.field() == b.field())) throw DimensionMismatch("field elements over different fields");
}
}  // namespace

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_.add(a.value_, b.value_)};
}
FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_.sub(a.value_, b.value_)};
}
FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    check_same(a, b);
    return {a.field_, a.field_.mul(a.value_, b.value_)};
}

}  // namespace boundedrank
