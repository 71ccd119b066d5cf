#include "oracles/racah_oracle.hpp"
#include "starkmem/errors.hpp"
#include "starkmem/stark.hpp"

#include <doctest.h>

#include <cmath>

using namespace starkmem;

namespace {

BeamConfig reference_beam(double intensity = 3.0, double q = 1.0)
{
    BeamConfig b;
    b.detuning = units::ghz_to_rad_per_us(25.6);
    b.intensity = intensity;
    b.polarization = q;
    return b;
}

// Second-order shift of |F, m> in a pure sigma_q beam propagating along the
// quantization axis, summed state by state over |F', m'> with Clebsch-Gordan
// weights and both the rotating and counter-rotating terms. rad/us.
double state_sum_shift(const AtomSystem& atom, int f, int m, const BeamConfig& beam)
{
    const auto& k = atom.constants();
    const double e0_sq = k.intensity_to_field_sq(beam.intensity) * 1e4;  // (V/m)^2
    const double w = beam.optical_frequency(atom) * 1e6;
    const double d = atom.catalog().reduced_dipole_si;
    const int q = static_cast<int>(beam.polarization);
    double energy = 0.0;  // J
    for (const auto& e : atom.excited_manifolds()) {
        if (!atom.catalog().contains(f, e.f)) continue;
        const auto& line = atom.catalog().at(f, e.f);
        const double wr = line.omega * 1e6;
        const double strength = line.reduced_element * line.reduced_element * d * d * (2 * f + 1);
        const double up = oracle::wigner3j(2 * e.f, 2, 2 * f, 2 * (m + q), -2 * q, -2 * m);
        const double down = oracle::wigner3j(2 * e.f, 2, 2 * f, 2 * (m - q), 2 * q, -2 * m);
        energy -= e0_sq / 4.0 * strength *
                  (up * up / (k.hbar * (wr - w)) + down * down / (k.hbar * (wr + w)));
    }
    return energy / k.hbar * 1e-6;
}

}  // namespace

TEST_CASE("polarization helpers and validation")
{
    CHECK(waveplate_to_q(M_PI / 4) == doctest::Approx(1.0));
    CHECK(waveplate_to_q(-M_PI / 4) == doctest::Approx(-1.0));
    CHECK(waveplate_to_q(0.0) == 0.0);

    auto b = reference_beam();
    CHECK_NOTHROW(b.validate());
    b.intensity = -1.0;
    CHECK_THROWS_AS(b.validate(), DomainError);
    b = reference_beam();
    b.polarization = 1.5;
    CHECK_THROWS_AS(b.validate(), DomainError);
    b = reference_beam();
    b.zeta_dot_b_sq = 2.0;
    CHECK_THROWS_AS(b.validate(), DomainError);
}

TEST_CASE("full shift agrees with a state-by-state perturbation sum")
{
    // The m_F/(2F) vector convention carries half of the perturbative odd
    // part; the kernels differ only by omega/omega_r, hence the 1e-3.
    const auto atom = load_rb85();
    for (double det_ghz : {-40.0, -5.0, 3.0, 25.6, 200.0}) {
        for (int q : {-1, 1}) {
            auto beam = reference_beam(2.0, q);
            beam.detuning = units::ghz_to_rad_per_us(det_ghz);
            for (int f : {2, 3}) {
                for (int m = 0; m <= f; ++m) {
                    const double plus = state_sum_shift(atom, f, m, beam), minus = state_sum_shift(atom, f, -m, beam);
                    const auto s = stark_shift(atom, f, m, beam);
                    CHECK(s.scalar + s.tensor == doctest::Approx(0.5 * (plus + minus)).epsilon(1e-9));
                    CHECK(2.0 * s.vector == doctest::Approx(0.5 * (plus - minus)).epsilon(1e-3).scale(1e-12));
                }
            }
        }
    }
}

TEST_CASE("F=2 polarizabilities at 25.6 GHz")
{
    const auto atom = load_rb85();
    const auto a = polarizabilities(atom, 2, reference_beam().optical_frequency(atom));
    CHECK(a.scalar == doctest::Approx(-0.1904).epsilon(0.02));
    CHECK(a.vector == doctest::Approx(-0.1276).epsilon(0.02));
}

TEST_CASE("shift symmetries are exact")
{
    const auto atom = load_rb85();
    const auto plus = reference_beam(3.0, 1.0), minus = reference_beam(3.0, -1.0), lin = reference_beam(3.0, 0.0);
    for (int f : {2, 3}) {
        const double scalar0 = stark_shift(atom, f, 0, plus).scalar;
        for (int m = -f; m <= f; ++m) {
            const auto s = stark_shift(atom, f, m, plus);
            CHECK(s.scalar == scalar0);
            CHECK(stark_shift(atom, f, m, lin).vector == 0.0);
            CHECK(stark_shift(atom, f, m, minus).vector == -s.vector);
            CHECK(stark_shift(atom, f, -m, plus).vector == -s.vector);
            CHECK(stark_shift(atom, f, -m, plus).tensor == s.tensor);
        }
        CHECK(stark_shift(atom, f, 0, plus).vector == 0.0);
    }
}

TEST_CASE("zero intensity and linearity")
{
    const auto atom = load_rb85();
    const auto zero = stark_shift(atom, 2, 1, reference_beam(0.0));
    CHECK(zero.total() == 0.0);
    const auto one = stark_shift(atom, 3, 2, reference_beam(1.0));
    const auto five = stark_shift(atom, 3, 2, reference_beam(5.0));
    CHECK(five.scalar == doctest::Approx(5.0 * one.scalar).epsilon(1e-13));
    CHECK(five.vector == doctest::Approx(5.0 * one.vector).epsilon(1e-13));
    CHECK(five.tensor == doctest::Approx(5.0 * one.tensor).epsilon(1e-13));
}

TEST_CASE("near resonance is rejected")
{
    const auto atom = load_rb85();
    auto b = reference_beam();
    b.detuning = 0.0;
    CHECK_THROWS_AS(stark_shift(atom, 2, 0, b), NearResonance);
    b.detuning = -atom.hyperfine_splitting();  // F=3 -> F'=3
    CHECK_THROWS_AS(stark_shift(atom, 3, 0, b), NearResonance);
    CHECK_THROWS_AS(stark_shift(atom, 2, 3, reference_beam()), DomainError);
}

TEST_CASE("simplified vector model")
{
    const auto atom = load_rb85();
    for (int f : {2, 3}) {
        const SimplifiedVectorModel model(atom, f);
        const auto b = reference_beam(1.0);
        CHECK(model.shift(b, 1) == doctest::Approx(stark_shift(atom, f, 1, b).vector).epsilon(1e-12));
        CHECK(model.shift(b.with_intensity(2.0), -2) == doctest::Approx(-4.0 * model.shift(b, 1)));
        CHECK(model.shift(b, 1, 0.01, 10.0) == doctest::Approx(2.0 * model.shift(b, 1, 0.01, 20.0)));
        CHECK_THROWS_AS(model.shift(b, 1, 1.0, 50.0), DivisionNearZero);
        // far detuned the full vector term approaches the 1/delta law
        auto far = b;
        far.detuning = units::ghz_to_rad_per_us(60.0);
        CHECK(model.shift(far, 1) == doctest::Approx(stark_shift(atom, f, 1, far).vector).epsilon(0.05));
    }
}

TEST_CASE("fictitious field")
{
    const auto atom = load_rb85();
    const double b = fictitious_field(atom, reference_beam(4.5));
    MESSAGE("fictitious field at 4.5 mW/mm^2, 25.6 GHz: " << b << " mG");
    CHECK(std::abs(b) > 3.0);
    CHECK(std::abs(b) < 8.0);
    CHECK(fictitious_field(atom, reference_beam(4.5, -1.0)) == doctest::Approx(-b).epsilon(1e-14));
    CHECK(fictitious_field(atom, reference_beam(4.5, 0.0)) == 0.0);
    CHECK(fictitious_field(atom, reference_beam(0.0)) == 0.0);
    CHECK(field_per_intensity(atom, reference_beam(4.5, -1.0)) == doctest::Approx(b / 4.5));

    auto cal = reference_beam(4.5);
    cal.calibration = 0.5;
    CHECK(fictitious_field(atom, cal) == doctest::Approx(0.5 * b));

    // The field is the vector-shift difference divided by mu_B g_FF'.
    const auto beam = reference_beam(4.5);
    const double mu = atom.constants().bohr_magneton_rad_per_us_per_mG();
    const double rate = stark_shift(atom, 3, 1, beam).vector - stark_shift(atom, 2, 0, beam).vector;
    CHECK(b == doctest::Approx(rate / (mu * (1.0 / 3.0))).epsilon(1e-12));

    const auto pairs = fictitious_field_pairs(atom, beam, 1);
    CHECK(pairs.size() == 5);
    CHECK_THROWS_AS(fictitious_field_pair(atom, beam, 0, 0), DomainError);
    CHECK(fictitious_field(atom, beam, 0) == doctest::Approx(fictitious_field_pair(atom, beam, 1, 1)));
}
