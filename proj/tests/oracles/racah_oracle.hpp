#pragma once

// Wigner 3j/6j symbols evaluated with exact rational arithmetic. Only the
// final square root is taken in floating point, so the result is
// independent of the library's long double factorial table.
//
// Arguments are passed as twice their value.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <deque>

namespace oracle {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using Float = boost::multiprecision::cpp_bin_float_50;

inline const cpp_int& factorial(int n)
{
    // deque: references handed out stay valid while the table grows
    static std::deque<cpp_int> table{1};
    if (n < 0) std::abort();
    while (static_cast<int>(table.size()) <= n) table.push_back(table.back() * table.size());
    return table[n];
}

// n given as twice an integer-valued expression
inline const cpp_int& fact_twice(int twice_n)
{
    if (twice_n % 2 != 0 || twice_n < 0) std::abort();
    return factorial(twice_n / 2);
}

inline bool triad(int a, int b, int c)
{
    return a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= std::abs(a - b);
}

inline cpp_rational delta(int a, int b, int c)
{
    return cpp_rational(fact_twice(a + b - c) * fact_twice(a - b + c) * fact_twice(-a + b + c),
                        fact_twice(a + b + c + 2));
}

// sign(sum) * sqrt(sum^2 * radicand)
inline double signed_root(const cpp_rational& sum, const cpp_rational& radicand)
{
    if (sum == 0) return 0.0;
    const cpp_rational sq = sum * sum * radicand;
    const Float v = boost::multiprecision::sqrt(Float(boost::multiprecision::numerator(sq)) /
                                                Float(boost::multiprecision::denominator(sq)));
    const double d = static_cast<double>(v);
    return sum < 0 ? -d : d;
}

inline double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3)
{
    if (m1 + m2 + m3 != 0 || !triad(j1, j2, j3)) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
    if ((j1 + m1) % 2 || (j2 + m2) % 2 || (j3 + m3) % 2) return 0.0;

    const cpp_rational radicand = delta(j1, j2, j3) * fact_twice(j1 + m1) * fact_twice(j1 - m1) *
                                  fact_twice(j2 + m2) * fact_twice(j2 - m2) * fact_twice(j3 + m3) *
                                  fact_twice(j3 - m3);
    cpp_rational sum = 0;
    for (int k = 0;; k += 2) {
        const int d[6] = {k, j3 - j2 + k + m1, j3 - j1 + k - m2, j1 + j2 - j3 - k, j1 - k - m1, j2 - k + m2};
        if (d[3] < 0 || d[4] < 0 || d[5] < 0) break;
        if (d[1] < 0 || d[2] < 0) continue;
        cpp_int den = 1;
        for (int x : d) den *= fact_twice(x);
        sum += cpp_rational((k / 2) % 2 ? -1 : 1, den);
    }
    const int phase = (j1 - j2 - m3) / 2;
    if (phase % 2 != 0) sum = -sum;
    return signed_root(sum, radicand);
}

inline double wigner6j(int j1, int j2, int j3, int j4, int j5, int j6)
{
    if (!triad(j1, j2, j3) || !triad(j1, j5, j6) || !triad(j4, j2, j6) || !triad(j4, j5, j3)) return 0.0;
    const cpp_rational radicand = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
    const int a[4] = {j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3};
    const int b[3] = {j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4};
    int lo = a[0], hi = b[0];
    for (int x : a) lo = std::max(lo, x);
    for (int x : b) hi = std::min(hi, x);
    cpp_rational sum = 0;
    for (int t = lo; t <= hi; t += 2) {
        cpp_int den = 1;
        for (int x : a) den *= fact_twice(t - x);
        for (int x : b) den *= fact_twice(x - t);
        sum += cpp_rational((t / 2) % 2 ? -fact_twice(t + 2) : fact_twice(t + 2), den);
    }
    return signed_root(sum, radicand);
}

}  // namespace oracle
