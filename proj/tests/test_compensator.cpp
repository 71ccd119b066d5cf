#include "starkmem/compensator.hpp"
#include "starkmem/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace starkmem;

namespace {

const AtomSystem& atom()
{
    static const AtomSystem a = load_rb85();
    return a;
}

BeamConfig tmpl()
{
    BeamConfig b;
    b.detuning = units::ghz_to_rad_per_us(25.6);
    return b;
}

double f1() { return field_per_intensity(atom(), tmpl()); }

}  // namespace

TEST_CASE("intensity polynomial extrema")
{
    IntensityPolynomial p{1.0, -2.0, 1.0};  // (z-1)^2
    CHECK(p.min_on(-1, 2) == doctest::Approx(0.0));
    CHECK(p.max_on(-1, 2) == doctest::Approx(4.0));
    CHECK(p.min_on(2, 3) == doctest::Approx(1.0));
    CHECK(IntensityPolynomial{}.is_zero());
}

TEST_CASE("bias cancellation")
{
    for (double b0 : {5.8, -3.0, 12.0}) {
        const auto plan = solve_bias(atom(), b0, tmpl());
        CHECK(plan.intensity.c0 == doctest::Approx(std::abs(b0 / f1())).epsilon(1e-14));
        CHECK(plan.intensity.c1 == 0.0);
        CHECK(std::abs(plan.beam.polarization) == 1.0);
        CHECK(std::abs(plan.residual_after.b0) < 1e-12);
        CHECK(plan_field(atom(), plan).b0 == doctest::Approx(-b0).epsilon(1e-13));
    }
    CHECK(solve_bias(atom(), 1e-9, tmpl()).is_zero());
    CHECK_THROWS_AS(solve_bias(atom(), 500.0, tmpl()), FieldOutOfRange);
    CompensatorOptions low;
    low.intensity_cap = 1.0;
    CHECK_THROWS_AS(solve_bias(atom(), 5.0, tmpl(), low), FieldOutOfRange);
}

TEST_CASE("profile cancellation")
{
    const Support support;
    SUBCASE("gradient and curvature with enough bias")
    {
        // The offset that keeps I(z) >= 0 is exactly what this b0 needs.
        const FieldProfile r{-20.0, 3.0, 2.0, {}};
        const auto plan = solve_profile(atom(), r, tmpl(), support);
        CHECK(std::abs(plan.residual_after.b1) < 1e-12);
        CHECK(std::abs(plan.residual_after.b2) < 1e-12);
        CHECK(plan.residual_after.b0 == 0.0);
        CHECK(plan.intensity.min_on(support.z_min, support.z_max) >= -1e-12);
    }
    SUBCASE("gradient only leaves a reported bias")
    {
        const FieldProfile r{0.0, 4.0, 0.0, {}};
        const auto plan = solve_profile(atom(), r, tmpl(), support);
        CHECK(std::abs(plan.residual_after.b1) < 1e-12);
        CHECK(plan.intensity.min_on(support.z_min, support.z_max) == doctest::Approx(0.0).scale(1.0));
        const auto realized = compose(r, plan_field(atom(), plan));
        CHECK(plan.residual_after.b0 == doctest::Approx(realized.b0));
        CHECK(plan.residual_after.b0 != 0.0);
        // a second uniform beam removes the leftover
        const auto second = solve_bias(atom(), plan.residual_after.b0, tmpl());
        CHECK(std::abs(compose(plan.residual_after, plan_field(atom(), second)).b0) < 1e-12);
    }
    SUBCASE("bias only reduces to solve_bias")
    {
        const auto plan = solve_profile(atom(), FieldProfile::bias(5.8), tmpl(), support);
        CHECK(plan.intensity.c0 == doctest::Approx(solve_bias(atom(), 5.8, tmpl()).intensity.c0));
    }
    SUBCASE("cap too low")
    {
        CompensatorOptions low;
        low.intensity_cap = 0.5;
        CHECK_THROWS_AS(solve_profile(atom(), FieldProfile{0.0, 10.0, 10.0, {}}, tmpl(), support, low),
                        NonPhysicalProfile);
    }
}

TEST_CASE("predicted lifetime after compensation")
{
    const auto e = EnsembleConfig::eit(atom(), {}, Envelope::gaussian(100));
    const FieldProfile r{-15.0, 2.0, -1.5, {}};
    auto plan = solve_profile(atom(), r, tmpl(), Support{});
    REQUIRE(plan.residual_after.b0 == 0.0);
    predict(atom(), plan, e, r);
    REQUIRE(plan.predicted_lifetime);
    CHECK(*plan.predicted_lifetime == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("optimizer")
{
    const auto e = EnsembleConfig::raman(1, {}, Envelope::gaussian(100));
    OptimizerOptions o;
    o.budget = 120;
    o.restarts = 2;

    SUBCASE("zero residual stays uncompensated")
    {
        OptimizerTrace trace;
        const auto plan = optimize_lifetime(atom(), e, FieldProfile{}, tmpl(), Support{}, o, {}, &trace);
        CHECK(plan.is_zero());
        CHECK(*plan.predicted_lifetime == doctest::Approx(100.0).epsilon(1e-9));
    }
    SUBCASE("beyond-quadratic residual")
    {
        // cubic component that no quadratic profile can cancel
        SampledProfile cubic;
        for (int i = 0; i <= 100; ++i) {
            const double z = -5.0 + 0.1 * i;
            cubic.z.push_back(z);
            cubic.value.push_back(1.5 * z * z * z);
        }
        const FieldProfile r{0.0, 3.0, 2.0, cubic};
        OptimizerTrace trace;
        const auto plan = optimize_lifetime(atom(), e, r, tmpl(), Support{}, o, {}, &trace);
        REQUIRE(plan.predicted_lifetime);
        CHECK(trace.best_lifetime.size() <= static_cast<std::size_t>(o.budget));
        for (std::size_t i = 1; i < trace.best_lifetime.size(); ++i) CHECK(trace.best_lifetime[i] >= trace.best_lifetime[i - 1]);

        const double before = find_lifetime(atom(), e, r);
        FieldProfile poly = r;
        poly.residual = {};
        auto seed = solve_profile(atom(), poly, tmpl(), Support{});
        const double seeded = find_lifetime(atom(), e, compose(r, plan_field(atom(), seed)));
        CHECK(*plan.predicted_lifetime >= before);
        CHECK(*plan.predicted_lifetime >= seeded);
        CHECK(plan.intensity.min_on(-1.25, 1.25) >= -1e-12);
        CHECK(*plan.predicted_lifetime == doctest::Approx(find_lifetime(atom(), e, plan.residual_after)).epsilon(1e-9));

        const auto again = optimize_lifetime(atom(), e, r, tmpl(), Support{}, o);
        CHECK(again.intensity.c1 == plan.intensity.c1);
    }
    SUBCASE("budget floor")
    {
        o.budget = 10;
        CHECK_THROWS_AS(optimize_lifetime(atom(), e, FieldProfile{}, tmpl(), Support{}, o), DomainError);
    }
}

TEST_CASE("temporal schedule")
{
    FieldTimeSeries series;
    const double offsets[] = {-3.4, 0.0, 1.7, 3.4, -1.7, 0.9};
    for (int c = 0; c < 6; ++c) series.append(c, FieldProfile::bias(offsets[c]));

    const auto plan = schedule_temporal(atom(), series, 5, tmpl());
    REQUIRE(plan.temporal_schedule.size() == 6);
    CHECK(plan.worst_case_residual == doctest::Approx(0.85));
    std::set<double> levels;
    for (const auto& s : plan.temporal_schedule) {
        CHECK(std::abs(s.residual) <= plan.worst_case_residual + 1e-12);
        CHECK(s.intensity >= 0.0);
        CHECK(s.field == doctest::Approx(s.polarization * f1() * s.intensity));
        levels.insert(std::round(s.field * 1e9));
    }
    CHECK(levels.size() <= 5);
    CHECK(schedule_fields(plan).size() == 6);
    CHECK(plan.temporal_schedule[1].intensity == doctest::Approx(0.0).scale(1.0));

    // With as many levels as distinct values the schedule is exact.
    FieldTimeSeries grid;
    for (int c = 0; c < 13; ++c) grid.append(c, FieldProfile::bias(-3.0 + 0.5 * c));
    const auto exact = schedule_temporal(atom(), grid, 13, tmpl());
    for (const auto& s : exact.temporal_schedule) CHECK(std::abs(s.residual) < 1e-12);

    FieldTimeSeries flat;
    flat.append(0, FieldProfile::bias(2.0));
    flat.append(1, FieldProfile::bias(2.0));
    const auto one = schedule_temporal(atom(), flat, 1, tmpl());
    CHECK(std::abs(one.temporal_schedule[0].residual) < 1e-12);

    CHECK_THROWS_AS(schedule_temporal(atom(), series, 0, tmpl()), DomainError);
    CompensatorOptions low;
    low.intensity_cap = 0.1;
    CHECK_THROWS_AS(schedule_temporal(atom(), series, 5, tmpl(), low), FieldOutOfRange);
}
