#include "starkmem/angular_momentum.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

namespace starkmem {

namespace {

using Real = long double;

const std::array<Real, kMaxFactorialArgument + 1>& factorial_table()
{
    static const auto table = [] {
        std::array<Real, kMaxFactorialArgument + 1> t{};
        t[0] = 1.0L;
        for (int n = 1; n <= kMaxFactorialArgument; ++n) t[n] = t[n - 1] * n;
        return t;
    }();
    return table;
}

// Factorial of a half-integer quantity given as twice its (integer) value.
Real fact2(int twice)
{
    assert(twice % 2 == 0 && twice >= 0);
    const int n = twice / 2;
    if (n > kMaxFactorialArgument) {
        throw std::out_of_range("angular momentum argument exceeds factorial table");
    }
    return factorial_table()[n];
}

Real triangle_coefficient(int a, int b, int c)
{
    return fact2(a + b - c) * fact2(a - b + c) * fact2(-a + b + c) / fact2(a + b + c + 2);
}

int parity_sign(int twice_exponent)
{
    // (-1)^(twice/2); the exponent is integral whenever this is called.
    return ((twice_exponent / 2) % 2 == 0) ? 1 : -1;
}

}  // namespace

bool triangle(HalfInteger a, HalfInteger b, HalfInteger c)
{
    const int ta = a.twice(), tb = b.twice(), tc = c.twice();
    if (ta < 0 || tb < 0 || tc < 0) return false;
    if ((ta + tb + tc) % 2 != 0) return false;
    return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double wigner3j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger m1, HalfInteger m2, HalfInteger m3)
{
    const int a = j1.twice(), b = j2.twice(), c = j3.twice();
    const int ma = m1.twice(), mb = m2.twice(), mc = m3.twice();
    if (ma + mb + mc != 0) return 0.0;
    if (!triangle(j1, j2, j3)) return 0.0;
    if (std::abs(ma) > a || std::abs(mb) > b || std::abs(mc) > c) return 0.0;
    if ((a + ma) % 2 != 0 || (b + mb) % 2 != 0 || (c + mc) % 2 != 0) return 0.0;

    // Racah's single-sum form; every bracket below is twice an integer.
    const int kmin2 = std::max({0, b - c - ma, a - c + mb});
    const int kmax2 = std::min({a + b - c, a - ma, b + mb});
    Real sum = 0.0L;
    for (int k2 = kmin2; k2 <= kmax2; k2 += 2) {
        const Real denom = fact2(k2) * fact2(c - b + k2 + ma) * fact2(c - a + k2 - mb) *
                           fact2(a + b - c - k2) * fact2(a - k2 - ma) * fact2(b - k2 + mb);
        sum += parity_sign(k2) / denom;
    }
    const Real norm = std::sqrt(triangle_coefficient(a, b, c) * fact2(a + ma) * fact2(a - ma) *
                                fact2(b + mb) * fact2(b - mb) * fact2(c + mc) * fact2(c - mc));
    return static_cast<double>(parity_sign(a - b - mc) * norm * sum);
}

double wigner6j(HalfInteger j1, HalfInteger j2, HalfInteger j3,
                HalfInteger j4, HalfInteger j5, HalfInteger j6)
{
    if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
        !triangle(j4, j5, j3)) {
        return 0.0;
    }
    const int a = j1.twice(), b = j2.twice(), c = j3.twice();
    const int d = j4.twice(), e = j5.twice(), f = j6.twice();

    const int s1 = a + b + c, s2 = a + e + f, s3 = d + b + f, s4 = d + e + c;
    const int p1 = a + b + d + e, p2 = b + c + e + f, p3 = c + a + f + d;
    const int tmin = std::max({s1, s2, s3, s4});
    const int tmax = std::min({p1, p2, p3});

    Real sum = 0.0L;
    for (int t = tmin; t <= tmax; t += 2) {
        const Real denom = fact2(t - s1) * fact2(t - s2) * fact2(t - s3) * fact2(t - s4) *
                           fact2(p1 - t) * fact2(p2 - t) * fact2(p3 - t);
        sum += parity_sign(t) * fact2(t + 2) / denom;
    }
    const Real norm = std::sqrt(triangle_coefficient(a, b, c) * triangle_coefficient(a, e, f) *
                                triangle_coefficient(d, b, f) * triangle_coefficient(d, e, c));
    return static_cast<double>(norm * sum);
}

double reduced_dipole(HalfInteger f, HalfInteger f_prime, HalfInteger j, HalfInteger j_prime,
                      HalfInteger nuclear_spin, double d_jj)
{
    const HalfInteger one{1};
    if (!triangle(f, f_prime, one)) return 0.0;
    const double sixj = wigner6j(j, j_prime, one, f_prime, f, nuclear_spin);
    const int phase = parity_sign(f_prime.twice() + j.twice() + 2 + nuclear_spin.twice());
    return d_jj * phase * std::sqrt((f_prime.twice() + 1.0) * (j.twice() + 1.0)) * sixj;
}

}  // namespace starkmem
