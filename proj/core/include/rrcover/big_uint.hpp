#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rrcover {

// Arbitrary-precision unsigned integer, just enough for counting vertices:
// addition, multiplication, comparison and decimal formatting.
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t value);  // NOLINT: implicit by design

    bool is_zero() const { return limbs_.empty(); }

    bool fits_u64() const { return limbs_.size() <= 2; }
    std::uint64_t to_u64() const;  // throws std::overflow_error when !fits_u64()

    std::string to_string() const;

    BigUint& operator+=(const BigUint& rhs);
    friend BigUint operator+(BigUint lhs, const BigUint& rhs) { return lhs += rhs; }
    friend BigUint operator*(const BigUint& lhs, const BigUint& rhs);

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }
    friend bool operator<(const BigUint& a, const BigUint& b);
    friend bool operator<=(const BigUint& a, const BigUint& b) { return !(b < a); }
    friend bool operator>(const BigUint& a, const BigUint& b) { return b < a; }
    friend bool operator>=(const BigUint& a, const BigUint& b) { return !(a < b); }

private:
    // Base 2^32 limbs, least significant first, no trailing zero limbs.
    std::vector<std::uint32_t> limbs_;

    void trim();
};

}  // namespace rrcover
