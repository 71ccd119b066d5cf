#pragma once

// Compensation-beam synthesis: bias cancellation, polynomial intensity
// profiles against gradient/curvature, a derivative-free lifetime optimizer
// for residuals beyond quadratic order, and per-cycle temporal schedules.

#include "starkmem/fields.hpp"
#include "starkmem/memory_sim.hpp"
#include "starkmem/stark.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace starkmem {

/// I(z) = c0 + c1 z + c2 z^2 in mW/mm^2 (z in cm).
struct IntensityPolynomial {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double at(double z) const { return c0 + z * (c1 + z * c2); }
    double min_on(double lo, double hi) const;
    double max_on(double lo, double hi) const;
    bool is_zero() const { return c0 == 0.0 && c1 == 0.0 && c2 == 0.0; }
};

struct Support {
    double z_min = -1.25;  // cm
    double z_max = 1.25;
};

struct TemporalStep {
    int cycle = 0;
    double intensity = 0.0;     // mW/mm^2
    double polarization = 1.0;  // q sign for this cycle
    double field = 0.0;         // realized fictitious b0, mG
    double residual = 0.0;      // b0 left after compensation, mG
};

struct CompensationPlan {
    /// Detuning/geometry from the template; polarization is the chosen sign,
    /// intensity the base level c0.
    BeamConfig beam;
    IntensityPolynomial intensity;
    Support support;
    std::vector<TemporalStep> temporal_schedule;
    /// Half a quantization step for temporal plans, mG.
    double worst_case_residual = 0.0;
    std::optional<double> predicted_lifetime;  // us
    /// Field left after the plan is applied.
    FieldProfile residual_after;

    bool is_zero() const { return intensity.is_zero() && temporal_schedule.empty(); }
};

struct CompensatorOptions {
    double intensity_cap = 50.0;  // mW/mm^2
    int q_storage = 1;
    /// Residuals below this (mG) are treated as already compensated.
    double zero_threshold = 1e-6;
};

/// Fictitious field produced by a polarization-q beam with intensity I(z).
FieldProfile plan_field(const AtomSystem& atom, const BeamConfig& beam,
                        const IntensityPolynomial& intensity, int q_storage = 1);
FieldProfile plan_field(const AtomSystem& atom, const CompensationPlan& plan, int q_storage = 1);

/// Uniform beam whose fictitious field is -residual_b0.
/// Throws FieldOutOfRange when the intensity cap is insufficient.
CompensationPlan solve_bias(const AtomSystem& atom, double residual_b0,
                            const BeamConfig& beam_template, const CompensatorOptions& opts = {});

/// Quadratic intensity profile whose fictitious field cancels b1 and b2 of
/// `residual` (and b0 when the non-negativity offset allows it; otherwise the
/// leftover is reported in residual_after.b0).
/// Throws NonPhysicalProfile / FieldOutOfRange when the cap cannot be met.
CompensationPlan solve_profile(const AtomSystem& atom, const FieldProfile& residual,
                               const BeamConfig& beam_template, const Support& support,
                               const CompensatorOptions& opts = {});

/// Fills plan.predicted_lifetime for `ensemble` with the plan applied to `residual`.
void predict(const AtomSystem& atom, CompensationPlan& plan, const EnsembleConfig& ensemble,
             const FieldProfile& residual, const LifetimeSearch& search = {},
             const CompensatorOptions& opts = {});

struct OptimizerOptions {
    int budget = 400;  // lifetime evaluations
    std::uint64_t seed = 1;
    int restarts = 3;
    LifetimeSearch search;
    QuadratureOptions quadrature;
};

struct OptimizerTrace {
    std::vector<double> best_lifetime;  // best-so-far after each evaluation
};

/// Derivative-free maximization of the simulated lifetime over (c0, c1, c2, q)
/// subject to 0 <= I(z) <= cap on the support. Seeded by solve_profile and the
/// uncompensated configuration, so it never returns less than either.
CompensationPlan optimize_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                   const FieldProfile& residual, const BeamConfig& beam_template,
                                   const Support& support, const OptimizerOptions& options = {},
                                   const CompensatorOptions& opts = {},
                                   OptimizerTrace* trace = nullptr);

/// Per-cycle uniform beams cancelling the b0 of each cycle, quantized to
/// `n_levels` equally spaced field levels spanning the required range.
/// Ties round toward the lower intensity.
CompensationPlan schedule_temporal(const AtomSystem& atom, const FieldTimeSeries& b0_series,
                                   int n_levels, const BeamConfig& beam_template,
                                   const CompensatorOptions& opts = {});

/// AC-beam b0 per cycle of a temporal plan, in cycle order.
std::vector<double> schedule_fields(const CompensationPlan& plan);

}  // namespace starkmem
