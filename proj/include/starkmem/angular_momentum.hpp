#pragma once

// Wigner 3j/6j symbols over half-integer arguments and the hyperfine
// reduced dipole element built from them.

#include <cstdlib>
#include <stdexcept>

namespace starkmem {

/// A non-negative or signed half-integer stored as twice its value, so
/// selection rules are integer comparisons.
class HalfInteger {
public:
    constexpr HalfInteger() = default;
    constexpr HalfInteger(int value) : twice_(2 * value) {}

    static constexpr HalfInteger from_twice(int twice)
    {
        HalfInteger h;
        h.twice_ = twice;
        return h;
    }
    static constexpr HalfInteger half(int numerator) { return from_twice(numerator); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    constexpr HalfInteger operator-() const { return from_twice(-twice_); }
    friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b)
    {
        return from_twice(a.twice_ + b.twice_);
    }
    friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b)
    {
        return from_twice(a.twice_ - b.twice_);
    }
    friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
    friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

private:
    int twice_ = 0;
};

/// Largest argument sum supported by the factorial table.
inline constexpr int kMaxFactorialArgument = 170;

/// True when (a, b, c) satisfy the triangle rule with integer perimeter.
bool triangle(HalfInteger a, HalfInteger b, HalfInteger c);

double wigner3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger m1, HalfInteger m2, HalfInteger m3);

double wigner6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger j4, HalfInteger j5, HalfInteger j6);

/// <J I F || d || J' I F'> in units of the fine-structure element <J||d||J'>:
///   (-1)^(F'+J+1+I) sqrt((2F'+1)(2J+1)) {J J' 1; F' F I}.
/// Pairs that violate the dipole selection rules give 0.
double reduced_dipole(HalfInteger f, HalfInteger f_prime, HalfInteger j, HalfInteger j_prime,
                      HalfInteger nuclear_spin, double d_jj = 1.0);

}  // namespace starkmem
