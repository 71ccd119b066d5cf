#pragma once

// Physical constants and alkali D1-line structure.
//
// Internal units: angular frequency in rad/us, magnetic field in mG,
// length in cm, optical intensity in mW/mm^2. Conversions to and from
// laboratory units live here and nowhere else.

#include <map>
#include <numbers>
#include <utility>
#include <vector>

namespace starkmem {

namespace units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Frequency in Hz -> angular frequency in rad/us.
constexpr double hz_to_rad_per_us(double hz) { return two_pi * hz * 1e-6; }
constexpr double rad_per_us_to_hz(double w) { return w / two_pi * 1e6; }
constexpr double khz_to_rad_per_us(double khz) { return hz_to_rad_per_us(khz * 1e3); }
constexpr double rad_per_us_to_khz(double w) { return rad_per_us_to_hz(w) * 1e-3; }
constexpr double ghz_to_rad_per_us(double ghz) { return hz_to_rad_per_us(ghz * 1e9); }
constexpr double rad_per_us_to_ghz(double w) { return rad_per_us_to_hz(w) * 1e-9; }

}  // namespace units

/// CODATA 2018 values.
struct PhysicalConstants {
    double h = 6.62607015e-34;            // J s
    double hbar = 6.62607015e-34 / units::two_pi;
    double speed_of_light = 299792458.0;  // m/s
    double epsilon0 = 8.8541878128e-12;   // F/m
    double elementary_charge = 1.602176634e-19;
    double bohr_radius = 5.29177210903e-11;
    double bohr_magneton_over_h = 1.39962449361;  // MHz/G

    /// mu_B / hbar in rad/us per mG.
    double bohr_magneton_rad_per_us_per_mG() const
    {
        return units::two_pi * bohr_magneton_over_h * 1e-3;
    }

    /// Optical intensity (mW/mm^2) -> squared field amplitude E^2 in (V/cm)^2,
    /// with I = c eps0 E^2 / 2.
    double intensity_to_field_sq(double intensity_mw_mm2) const
    {
        const double i_si = intensity_mw_mm2 * 1e3;  // W/m^2
        return 2.0 * i_si / (speed_of_light * epsilon0) * 1e-4;
    }
    double field_sq_to_intensity(double e_sq_v_cm) const
    {
        return e_sq_v_cm * 1e4 * speed_of_light * epsilon0 / 2.0 * 1e-3;
    }

    /// Polarizability in SI (C m^2 / V) -> h kHz / (V/cm)^2.
    double polarizability_si_to_khz(double alpha_si) const { return alpha_si / h * 10.0; }
    double polarizability_khz_to_si(double alpha) const { return alpha * h / 10.0; }
};

struct HyperfineManifold {
    int f = 0;
    double g_factor = 0.0;
    /// Energy offset from the fine-structure centroid, rad/us.
    double offset = 0.0;

    std::vector<int> sublevels() const
    {
        std::vector<int> m;
        for (int k = -f; k <= f; ++k) m.push_back(k);
        return m;
    }
};

struct TransitionEntry {
    int f = 0;
    int f_prime = 0;
    double omega = 0.0;      // rad/us
    double linewidth = 0.0;  // rad/us
    /// <F||d||F'> in units of d = |<J||er||J'>|, with the (-1)^(F'+J+1+I) phase.
    double reduced_element = 0.0;
};

class TransitionCatalog {
public:
    void add(TransitionEntry e) { entries_[{e.f, e.f_prime}] = e; }

    const TransitionEntry& at(int f, int f_prime) const;
    bool contains(int f, int f_prime) const { return entries_.count({f, f_prime}) > 0; }
    const std::map<std::pair<int, int>, TransitionEntry>& entries() const { return entries_; }

    /// Scalar-polarizability prefactor (2/3) |<F||d||F'>|^2 / d^2.
    double scalar_weight(int f, int f_prime) const;

    double hyperfine_splitting = 0.0;         // ground, rad/us
    double fine_structure_splitting = 0.0;    // rad/us
    double reduced_dipole_si = 0.0;           // d in C m

private:
    std::map<std::pair<int, int>, TransitionEntry> entries_;
};

/// An alkali species restricted to its D1 line. Immutable once built.
class AtomSystem {
public:
    AtomSystem(PhysicalConstants constants, int twice_nuclear_spin,
               std::vector<HyperfineManifold> ground, std::vector<HyperfineManifold> excited,
               double line_center, TransitionCatalog catalog);

    const PhysicalConstants& constants() const { return constants_; }
    int twice_nuclear_spin() const { return twice_i_; }
    const std::vector<HyperfineManifold>& ground_manifolds() const { return ground_; }
    const std::vector<HyperfineManifold>& excited_manifolds() const { return excited_; }
    const HyperfineManifold& ground(int f) const;
    const HyperfineManifold& excited(int f) const;
    const TransitionCatalog& catalog() const { return catalog_; }

    /// Centroid D1 angular frequency, rad/us.
    double line_center() const { return line_center_; }
    double hyperfine_splitting() const { return catalog_.hyperfine_splitting; }

    /// Lowest ground manifold (|1> of the storage Lambda scheme).
    int lower_ground_f() const { return ground_.front().f; }
    int upper_ground_f() const { return ground_.back().f; }
    /// Excited manifold used as |3>.
    int storage_excited_f() const { return excited_.back().f; }
    /// Angular frequency of |1> -> |3>, the detuning reference, rad/us.
    double reference_transition() const;

    double natural_linewidth() const;

private:
    PhysicalConstants constants_;
    int twice_i_;
    std::vector<HyperfineManifold> ground_;
    std::vector<HyperfineManifold> excited_;
    double line_center_;
    TransitionCatalog catalog_;
};

AtomSystem load_rb85();

}  // namespace starkmem
