#pragma once

// Retrieval efficiency of a stored spin wave under magnetic fields, 1/e
// lifetimes, (B1, B2) lifetime maps, and cycle-averaged decays under
// fluctuating bias fields.

#include "starkmem/atomic_data.hpp"
#include "starkmem/fields.hpp"

#include <cstdint>
#include <vector>

namespace starkmem {

enum class StorageScheme { Eit, Raman };

enum class EnvelopeKind { None, Gaussian, Exponential };

/// Decoherence not caused by magnetic fields.
struct Envelope {
    EnvelopeKind kind = EnvelopeKind::Gaussian;
    double time_constant = 100.0;  // us, Gaussian exp(-t^2/T^2)
    double rate = 0.0;             // 1/us, exponential exp(-rate t)

    static Envelope none() { return {EnvelopeKind::None, 0.0, 0.0}; }
    static Envelope gaussian(double t) { return {EnvelopeKind::Gaussian, t, 0.0}; }
    static Envelope exponential(double r) { return {EnvelopeKind::Exponential, 0.0, r}; }

    double operator()(double t) const;
    /// 1/e time of the envelope alone; +inf when it never decays.
    double lifetime() const;
};

/// Normalized Gaussian atomic density along z (cm).
struct GaussianDensity {
    double center = 0.0;
    double sigma = 0.625;

    double operator()(double z) const;
};

struct EnsembleConfig {
    GaussianDensity density;
    /// EIT: weights of the lower-manifold sublevels m_F = -F..F (sum to 1).
    std::vector<double> populations;
    StorageScheme scheme = StorageScheme::Eit;
    /// m_F' = m_F + q_storage.
    int q_storage = 1;
    /// Raman: the single stored sublevel.
    int raman_m_f = 1;
    Envelope envelope;
    /// Optional extra exponential loss (1/us), e.g. scattering from the AC beam.
    double extra_decay_rate = 0.0;

    /// Throws DomainError on violated invariants.
    void validate(const AtomSystem& atom) const;
    double envelope_at(double t) const;

    /// Equal populations over the lower manifold, q_storage = +1.
    static EnsembleConfig eit(const AtomSystem& atom, GaussianDensity density, Envelope envelope);
    /// Single m_F -> m_F pairing unless q_storage is changed afterwards.
    static EnsembleConfig raman(int m_f, GaussianDensity density, Envelope envelope);
};

struct QuadratureOptions {
    /// Integration half-width around the density center, in sigma.
    double half_width_sigmas = 8.0;
    double tolerance = 1e-12;
    unsigned max_depth = 20;
};

/// Differential g-factor g_FF' = m_F' g_F' - m_F g_F between the two ground manifolds.
double differential_g(const AtomSystem& atom, int m_f, int m_f_prime);

/// EIT multi-sublevel efficiency, normalized to 1 at t = 0.
double efficiency_multi(const AtomSystem& atom, const EnsembleConfig& ensemble,
                        const FieldProfile& field, double t, const QuadratureOptions& q = {});

/// Single-sublevel Raman efficiency; b0 only adds a global phase and is ignored.
double efficiency_raman(const AtomSystem& atom, const EnsembleConfig& ensemble,
                        const FieldProfile& field, double t, const QuadratureOptions& q = {});

/// Dispatches on ensemble.scheme.
double efficiency(const AtomSystem& atom, const EnsembleConfig& ensemble,
                  const FieldProfile& field, double t, const QuadratureOptions& q = {});

struct DecayCurve {
    std::vector<double> t;    // us
    std::vector<double> eta;
    double lifetime_1e = 0.0; // us, NaN when eta stays above 1/e on the grid
};

/// First 1/e crossing of sampled (t, eta), linearly interpolated between the
/// bracketing samples. Throws LifetimeNotReached when eta stays above 1/e.
double lifetime_from_samples(const std::vector<double>& t, const std::vector<double>& eta);

/// Samples eta on an increasing grid starting at 0.
DecayCurve decay_curve(const AtomSystem& atom, const EnsembleConfig& ensemble,
                       const FieldProfile& field, const std::vector<double>& t_grid,
                       const QuadratureOptions& q = {});

std::vector<double> uniform_grid(double t_max, double step);

struct LifetimeSearch {
    /// Defaults derive from the envelope: t_max = 1.5 x envelope lifetime
    /// (or 5000 us), step = envelope lifetime / 400 (or 0.5 us).
    double t_max = 0.0;
    double step = 0.0;
    double tolerance = 1e-9;  // relative, on the bisected crossing

    LifetimeSearch resolved(const EnsembleConfig& ensemble) const;
};

/// First 1/e crossing located by a forward scan and bisection.
double find_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                     const FieldProfile& field, const LifetimeSearch& search = {},
                     const QuadratureOptions& q = {});

struct Heatmap {
    std::vector<double> b1;  // mG/cm
    std::vector<double> b2;  // mG/cm^2
    /// tau_norm[i][j] at (b1[i], b2[j]).
    std::vector<std::vector<double>> tau_norm;
    double tau_reference = 0.0;  // us, lifetime at B = 0
};

Heatmap lifetime_heatmap(const AtomSystem& atom, const EnsembleConfig& ensemble,
                         const std::vector<double>& b1_values, const std::vector<double>& b2_values,
                         unsigned threads = 1, const LifetimeSearch& search = {},
                         const QuadratureOptions& q = {});

std::vector<double> linspace(double lo, double hi, int n);

struct FluctuationSpec {
    double range = 0.0;  // peak-to-peak Delta B0, mG
    int levels = 13;
    int cycles = 500;
    std::uint64_t seed = 1;
};

/// Per-cycle bias fields: base.b0 plus one of `levels` equally spaced offsets
/// spanning [-range/2, +range/2], drawn uniformly with a seeded generator.
FieldTimeSeries draw_bias_series(const FieldProfile& base, const FluctuationSpec& spec);

struct MonteCarloResult {
    DecayCurve mean;
    std::vector<double> cycle_b0;  // realized total b0 per cycle, mG
};

/// Averages eta(t) over the cycles of `series`. When `compensation_b0` is
/// given, each cycle's field gets that additional bias (the AC beam).
MonteCarloResult montecarlo_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                     const FieldTimeSeries& series,
                                     const std::vector<double>& t_grid,
                                     const std::vector<double>* compensation_b0 = nullptr,
                                     unsigned threads = 1, const QuadratureOptions& q = {});

MonteCarloResult montecarlo_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                     const FieldProfile& base_field, const FluctuationSpec& spec,
                                     const std::vector<double>& t_grid, unsigned threads = 1,
                                     const QuadratureOptions& q = {});

}  // namespace starkmem
