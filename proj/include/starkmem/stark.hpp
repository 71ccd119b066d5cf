#pragma once

// Dynamic polarizabilities of the ground hyperfine manifolds, the
// scalar/vector/tensor light shifts they produce, and the conversion of
// the m_F-linear part into an equivalent ("fictitious") magnetic field.

#include "starkmem/atomic_data.hpp"

#include <vector>

namespace starkmem {

/// An AC Stark beam. `intensity` is the uniform (or local) intensity;
/// spatial profiles are handled by the fields module on top of this.
struct BeamConfig {
    /// Laser detuning from the |1> -> |3> line, rad/us. Positive is blue.
    double detuning = 0.0;
    double intensity = 0.0;      // mW/mm^2
    double polarization = 1.0;   // q: +1 sigma+, -1 sigma-, 0 linear
    double k_dot_b = 1.0;
    double zeta_dot_b_sq = 0.0;
    /// Empirical scale applied to fictitious fields. 1.0 means theory as is.
    double calibration = 1.0;

    /// Throws DomainError on out-of-range parameters.
    void validate() const;
    double optical_frequency(const AtomSystem& atom) const
    {
        return atom.reference_transition() + detuning;
    }
    BeamConfig with_intensity(double i) const
    {
        BeamConfig b = *this;
        b.intensity = i;
        return b;
    }
    BeamConfig with_polarization(double q) const
    {
        BeamConfig b = *this;
        b.polarization = q;
        return b;
    }
};

/// Degree of circular polarization behind a quarter-wave plate rotated by
/// `angle` (rad) from a linearly polarized input.
double waveplate_to_q(double angle);

/// h kHz / (V/cm)^2
struct Polarizabilities {
    double scalar = 0.0;
    double vector = 0.0;
    double tensor = 0.0;
};

/// Angular-frequency shifts, rad/us.
struct StarkShift {
    double scalar = 0.0;
    double vector = 0.0;
    double tensor = 0.0;

    double total() const { return scalar + vector + tensor; }
};

/// Sums over the excited hyperfine levels with counter-rotating terms kept.
/// Throws NearResonance within 100 linewidths of any D1 line.
Polarizabilities polarizabilities(const AtomSystem& atom, int f, double optical_frequency);

StarkShift stark_shift(const AtomSystem& atom, int f, int m_f, const BeamConfig& beam);

/// Combines polarizabilities with a beam into shifts (no resonance check).
StarkShift shift_from_polarizabilities(const AtomSystem& atom, const Polarizabilities& alpha,
                                       int f, int m_f, const BeamConfig& beam);

/// The q m_F I Gamma / delta form of the vector shift. The proportionality
/// constant is fixed per manifold so the model agrees with the full vector
/// term at `calibration_detuning`.
class SimplifiedVectorModel {
public:
    SimplifiedVectorModel(const AtomSystem& atom, int f,
                          double calibration_detuning = units::ghz_to_rad_per_us(25.6));

    /// Detuning of the beam from this manifold's |F> -> |3> line, rad/us.
    double manifold_detuning(const BeamConfig& beam) const;

    /// Shift in rad/us. Throws DivisionNearZero if |detuning| < 100 linewidth.
    double shift(const BeamConfig& beam, int m_f, double linewidth, double detuning) const;
    double shift(const BeamConfig& beam, int m_f) const
    {
        return shift(beam, m_f, linewidth_, manifold_detuning(beam));
    }

    double constant() const { return constant_; }

private:
    int f_;
    double line_;       // rad/us
    double linewidth_;  // rad/us
    double reference_;  // |1> -> |3>
    double constant_ = 0.0;
};

/// Equivalent field (mG) for one storage pair |F=lower, m_f> -> |F=upper, m_f_prime>:
/// the field whose Zeeman shifts give the same differential phase rate as the
/// beam's vector shifts. Throws DomainError for the field-insensitive pair.
double fictitious_field_pair(const AtomSystem& atom, const BeamConfig& beam, int m_f,
                             int m_f_prime);

/// Reference fictitious field, mG: the (m_F = 0 -> m_F' = q_storage) pair.
double fictitious_field(const AtomSystem& atom, const BeamConfig& beam, int q_storage = 1);

struct PairField {
    int m_f = 0;
    int m_f_prime = 0;
    double field = 0.0;  // mG
};

/// Per-pair equivalent fields for every lower-manifold sublevel paired with
/// m_f + q_storage (pairs with no upper sublevel or zero g_FF' are skipped).
std::vector<PairField> fictitious_field_pairs(const AtomSystem& atom, const BeamConfig& beam,
                                              int q_storage = 1);

/// mG of fictitious field per mW/mm^2 for q = +1 (reference pair).
double field_per_intensity(const AtomSystem& atom, const BeamConfig& beam, int q_storage = 1);

}  // namespace starkmem
