#include "oracles/racah_oracle.hpp"
#include "starkmem/angular_momentum.hpp"

#include <doctest.h>

#include <cmath>

using namespace starkmem;

namespace {

HalfInteger tw(int twice) { return HalfInteger::from_twice(twice); }

double w3(int a, int b, int c, int ma, int mb, int mc)
{
    return wigner3j(tw(a), tw(b), tw(c), tw(ma), tw(mb), tw(mc));
}

double w6(int a, int b, int c, int d, int e, int f)
{
    return wigner6j(tw(a), tw(b), tw(c), tw(d), tw(e), tw(f));
}

}  // namespace

TEST_CASE("half-integer arithmetic")
{
    const auto a = HalfInteger::half(5);
    CHECK(a.twice() == 5);
    CHECK(a.value() == doctest::Approx(2.5));
    CHECK_FALSE(a.is_integer());
    CHECK((a + HalfInteger::half(1)) == HalfInteger{3});
    CHECK((a - HalfInteger{1}).twice() == 3);
    CHECK((-a).twice() == -5);
    CHECK(HalfInteger{2} < a);
}

TEST_CASE("triangle rule")
{
    CHECK(triangle(HalfInteger{1}, HalfInteger{1}, HalfInteger{2}));
    CHECK(triangle(HalfInteger::half(1), HalfInteger::half(5), HalfInteger{3}));
    CHECK_FALSE(triangle(HalfInteger{1}, HalfInteger{1}, HalfInteger{3}));
    CHECK_FALSE(triangle(HalfInteger::half(1), HalfInteger{1}, HalfInteger{1}));
}

TEST_CASE("textbook values")
{
    CHECK(w3(2, 2, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w3(1, 1, 2, 1, 1, -2) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(w6(2, 2, 2, 2, 2, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(w3(2, 2, 2, 0, 0, 0) == 0.0);  // odd J with all m = 0
    CHECK(w3(2, 2, 2, 2, 0, 0) == 0.0);  // m sum
    CHECK(w6(2, 2, 6, 2, 2, 2) == 0.0);  // triangle
}

TEST_CASE("3j symmetries")
{
    for (int a = 0; a <= 6; ++a) {
        for (int b = 0; b <= 6; ++b) {
            for (int c = std::abs(a - b); c <= a + b; c += 2) {
                for (int ma = -a; ma <= a; ma += 2) {
                    for (int mb = -b; mb <= b; mb += 2) {
                        const int mc = -ma - mb;
                        if (std::abs(mc) > c) continue;
                        const double v = w3(a, b, c, ma, mb, mc);
                        const double parity = ((a + b + c) / 2) % 2 ? -1.0 : 1.0;
                        CHECK(w3(b, c, a, mb, mc, ma) == doctest::Approx(v).epsilon(1e-13));
                        CHECK(w3(b, a, c, mb, ma, mc) == doctest::Approx(parity * v).epsilon(1e-13));
                        CHECK(w3(a, b, c, -ma, -mb, -mc) == doctest::Approx(parity * v).epsilon(1e-13));
                    }
                }
            }
        }
    }
}

TEST_CASE("6j column and row symmetries")
{
    const double v = w6(5, 5, 2, 3, 3, 4);
    CHECK(v != 0.0);
    CHECK(w6(5, 2, 5, 3, 4, 3) == doctest::Approx(v).epsilon(1e-14));
    CHECK(w6(2, 5, 5, 4, 3, 3) == doctest::Approx(v).epsilon(1e-14));
    CHECK(w6(3, 3, 2, 5, 5, 4) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("6j orthogonality for small arguments")
{
    // sum_x (2x+1)(2p+1) {a b x; c d p}{a b x; c d q} = delta_pq
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; d <= 4; ++d)
                    for (int p = 0; p <= 8; ++p)
                        for (int q = 0; q <= 8; ++q) {
                            if (!oracle::triad(a, d, p) || !oracle::triad(c, b, p)) continue;
                            if (!oracle::triad(a, d, q) || !oracle::triad(c, b, q)) continue;
                            double sum = 0.0;
                            for (int x = 0; x <= 8; ++x) sum += (x + 1) * (p + 1) * w6(a, b, x, c, d, p) * w6(a, b, x, c, d, q);
                            CHECK(sum == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                        }
}

TEST_CASE("agreement with the exact rational oracle")
{
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; d <= 4; ++d)
                    for (int e = 0; e <= 4; ++e)
                        for (int f = 0; f <= 4; ++f) {
                            CHECK(w6(a, b, c, d, e, f) ==
                                  doctest::Approx(oracle::wigner6j(a, b, c, d, e, f)).epsilon(1e-12).scale(1.0));
                        }
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int ma = -a; ma <= a; ma += 2)
                    for (int mb = -b; mb <= b; mb += 2) {
                        const int mc = -ma - mb;
                        CHECK(w3(a, b, c, ma, mb, mc) ==
                              doctest::Approx(oracle::wigner3j(a, b, c, ma, mb, mc)).epsilon(1e-12).scale(1.0));
                    }
}

TEST_CASE("hyperfine reduced elements obey the line-strength sum rule")
{
    const auto j = HalfInteger::half(1), i = HalfInteger::half(5);
    for (int f : {2, 3}) {
        double sum = 0.0;
        for (int fp : {2, 3}) {
            const double r = reduced_dipole(HalfInteger{f}, HalfInteger{fp}, j, j, i);
            sum += r * r;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(reduced_dipole(HalfInteger{2}, HalfInteger{4}, j, j, i) == 0.0);
    const double d = 3.7;
    CHECK(reduced_dipole(HalfInteger{2}, HalfInteger{3}, j, j, i, d) ==
          doctest::Approx(d * reduced_dipole(HalfInteger{2}, HalfInteger{3}, j, j, i)));
}

TEST_CASE("large arguments stay finite")
{
    const double v = w6(40, 40, 40, 40, 40, 40);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(oracle::wigner6j(40, 40, 40, 40, 40, 40)).epsilon(1e-10));
}
