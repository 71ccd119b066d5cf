#include "starkmem/stark.hpp"

#include "starkmem/angular_momentum.hpp"
#include "starkmem/errors.hpp"

#include <cmath>
#include <sstream>

namespace starkmem {

namespace {

constexpr double kResonanceGuard = 100.0;

void check_off_resonance(const AtomSystem& atom, double omega)
{
    for (const auto& [key, line] : atom.catalog().entries()) {
        if (std::abs(omega - line.omega) < kResonanceGuard * line.linewidth) {
            std::ostringstream os;
            os << "optical frequency within " << kResonanceGuard << " linewidths of F=" << key.first
               << " -> F'=" << key.second << " (offset "
               << units::rad_per_us_to_hz(omega - line.omega) * 1e-6 << " MHz)";
            throw NearResonance(os.str());
        }
    }
}

double sign_pow(int exponent) { return (exponent % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

void BeamConfig::validate() const
{
    auto fail = [](const char* what) { throw DomainError(what); };
    if (!std::isfinite(detuning)) fail("beam detuning must be finite");
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) fail("beam intensity must be >= 0");
    if (!(std::abs(polarization) <= 1.0)) fail("polarization q must lie in [-1, 1]");
    if (!(std::abs(k_dot_b) <= 1.0)) fail("k_dot_B must lie in [-1, 1]");
    if (!(zeta_dot_b_sq >= 0.0 && zeta_dot_b_sq <= 1.0)) fail("zeta_dot_B_sq must lie in [0, 1]");
    if (!std::isfinite(calibration)) fail("calibration factor must be finite");
}

double waveplate_to_q(double angle) { return std::sin(2.0 * angle); }

Polarizabilities polarizabilities(const AtomSystem& atom, int f, double optical_frequency)
{
    check_off_resonance(atom, optical_frequency);
    const auto& k = atom.constants();
    const auto& catalog = atom.catalog();
    const double d = catalog.reduced_dipole_si;
    const double w = optical_frequency * 1e6;  // rad/s
    const double ff = f;

    const double vector_prefactor = std::sqrt(6.0 * ff * (2 * ff + 1) / (ff + 1));
    const double tensor_prefactor =
        f >= 1 ? std::sqrt(40.0 * ff * (2 * ff + 1) * (2 * ff - 1) / (3.0 * (ff + 1) * (2 * ff + 3)))
               : 0.0;

    Polarizabilities alpha;
    for (const auto& e : atom.excited_manifolds()) {
        if (!catalog.contains(f, e.f)) continue;
        const auto& line = catalog.at(f, e.f);
        const double wr = line.omega * 1e6;
        const double strength = line.reduced_element * line.reduced_element * d * d;
        // omega_r / (hbar (omega_r^2 - omega^2)), written to avoid cancellation.
        const double kernel = wr / (k.hbar * (wr - w) * (wr + w)) * strength;

        const HalfInteger F{f}, Fp{e.f}, one{1}, two{2};
        alpha.scalar += 2.0 / 3.0 * kernel;
        alpha.vector +=
            sign_pow(f + e.f + 1) * vector_prefactor * wigner6j(one, one, one, F, F, Fp) * kernel;
        alpha.tensor +=
            sign_pow(f + e.f) * tensor_prefactor * wigner6j(one, one, two, F, F, Fp) * kernel;
    }
    alpha.scalar = k.polarizability_si_to_khz(alpha.scalar);
    alpha.vector = k.polarizability_si_to_khz(alpha.vector);
    alpha.tensor = k.polarizability_si_to_khz(alpha.tensor);
    return alpha;
}

StarkShift shift_from_polarizabilities(const AtomSystem& atom, const Polarizabilities& alpha,
                                       int f, int m_f, const BeamConfig& beam)
{
    const double amp_sq = atom.constants().intensity_to_field_sq(beam.intensity) / 4.0;
    // h kHz -> rad/us
    const double to_rate = -amp_sq * units::khz_to_rad_per_us(1.0);
    const double ff = f;
    StarkShift s;
    s.scalar = to_rate * alpha.scalar;
    s.vector = to_rate * beam.k_dot_b * beam.polarization * (m_f / (2.0 * ff)) * alpha.vector;
    if (f >= 1) {
        s.tensor = to_rate * (3.0 * beam.zeta_dot_b_sq - 1.0) *
                   (3.0 * m_f * m_f - ff * (ff + 1)) / (2.0 * ff * (2 * ff - 1)) * alpha.tensor;
    }
    return s;
}

StarkShift stark_shift(const AtomSystem& atom, int f, int m_f, const BeamConfig& beam)
{
    if (std::abs(m_f) > f) throw DomainError("|m_F| exceeds F");
    beam.validate();
    const auto alpha = polarizabilities(atom, f, beam.optical_frequency(atom));
    return shift_from_polarizabilities(atom, alpha, f, m_f, beam);
}

SimplifiedVectorModel::SimplifiedVectorModel(const AtomSystem& atom, int f,
                                             double calibration_detuning)
    : f_(f),
      line_(atom.catalog().at(f, atom.storage_excited_f()).omega),
      linewidth_(atom.catalog().at(f, atom.storage_excited_f()).linewidth),
      reference_(atom.reference_transition())
{
    BeamConfig unit;
    unit.detuning = calibration_detuning;
    unit.intensity = 1.0;
    unit.polarization = 1.0;
    unit.k_dot_b = 1.0;
    const double full = stark_shift(atom, f, 1, unit).vector;
    constant_ = full * manifold_detuning(unit) / linewidth_;
}

double SimplifiedVectorModel::manifold_detuning(const BeamConfig& beam) const
{
    return reference_ + beam.detuning - line_;
}

double SimplifiedVectorModel::shift(const BeamConfig& beam, int m_f, double linewidth,
                                    double detuning) const
{
    if (std::abs(detuning) < kResonanceGuard * linewidth) {
        throw DivisionNearZero("manifold detuning within 100 linewidths of resonance");
    }
    return constant_ * beam.k_dot_b * beam.polarization * m_f * beam.intensity * linewidth /
           detuning;
}

double fictitious_field_pair(const AtomSystem& atom, const BeamConfig& beam, int m_f,
                             int m_f_prime)
{
    const auto& lower = atom.ground(atom.lower_ground_f());
    const auto& upper = atom.ground(atom.upper_ground_f());
    if (std::abs(m_f) > lower.f || std::abs(m_f_prime) > upper.f) {
        throw DomainError("storage pair outside the ground manifolds");
    }
    const double g_pair = m_f_prime * upper.g_factor - m_f * lower.g_factor;
    if (std::abs(g_pair) < 1e-12) throw DomainError("storage pair is field insensitive");

    beam.validate();
    if (beam.intensity == 0.0) return 0.0;
    const double omega = beam.optical_frequency(atom);
    const auto alpha_lower = polarizabilities(atom, lower.f, omega);
    const auto alpha_upper = polarizabilities(atom, upper.f, omega);
    const double rate = shift_from_polarizabilities(atom, alpha_upper, upper.f, m_f_prime, beam).vector -
                        shift_from_polarizabilities(atom, alpha_lower, lower.f, m_f, beam).vector;
    const double mu = atom.constants().bohr_magneton_rad_per_us_per_mG();
    return beam.calibration * rate / (mu * g_pair);
}

double fictitious_field(const AtomSystem& atom, const BeamConfig& beam, int q_storage)
{
    // With q_storage = 0 the (0 -> 0) pair is the clock transition; fall back to (1 -> 1).
    if (q_storage == 0) return fictitious_field_pair(atom, beam, 1, 1);
    return fictitious_field_pair(atom, beam, 0, q_storage);
}

std::vector<PairField> fictitious_field_pairs(const AtomSystem& atom, const BeamConfig& beam,
                                              int q_storage)
{
    const auto& lower = atom.ground(atom.lower_ground_f());
    const auto& upper = atom.ground(atom.upper_ground_f());
    std::vector<PairField> out;
    for (int m : lower.sublevels()) {
        const int mp = m + q_storage;
        if (std::abs(mp) > upper.f) continue;
        if (std::abs(mp * upper.g_factor - m * lower.g_factor) < 1e-12) continue;
        out.push_back({m, mp, fictitious_field_pair(atom, beam, m, mp)});
    }
    return out;
}

double field_per_intensity(const AtomSystem& atom, const BeamConfig& beam, int q_storage)
{
    BeamConfig unit = beam;
    unit.intensity = 1.0;
    unit.polarization = 1.0;
    return fictitious_field(atom, unit, q_storage);
}

}  // namespace starkmem
