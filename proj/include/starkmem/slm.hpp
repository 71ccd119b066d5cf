#pragma once

// Sinusoidal phase gratings on a 1-D SLM column: zero-order efficiency,
// an aperture-filtered far-field model, and iterative mask synthesis.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace starkmem {

/// Uniform sample grid across the mask, centered on z' = 0. Lengths in mm.
struct SlmGrid {
    int samples = 1920;
    double pitch = 8e-3;

    double extent() const { return samples * pitch; }
    double z(int i) const { return (i - 0.5 * (samples - 1)) * pitch; }
    std::vector<double> coordinates() const;
    bool operator==(const SlmGrid& o) const { return samples == o.samples && pitch == o.pitch; }
};

/// phi(z') = m(z') sin(2 pi i / period_px), with 0 <= m <= pi.
struct PhaseMask {
    SlmGrid grid;
    double period_px = 16.0;
    std::vector<double> depth;  // rad, one per sample

    static PhaseMask uniform(const SlmGrid& grid, double m, double period_px = 16.0);
    /// Throws DomainError on a bad period, size or depth outside [0, pi].
    void validate() const;
    double phase(int i) const;
};

/// Intensity samples on a grid (arbitrary units).
struct SlmProfile {
    SlmGrid grid;
    std::vector<double> intensity;
};

/// J0(m)^2, the fraction of power left in the zero order. DomainError outside [0, pi].
double zero_order_efficiency(double m);

/// Smallest m with J0(m)^2 = efficiency, i.e. the branch m in [0, j0,1 ~ 2.405].
double zero_order_depth(double efficiency);

/// Largest m on the monotone branch of J0^2.
double monotone_depth_limit();

/// Collimated Gaussian, I = peak exp(-2 z^2 / w^2). waist <= 0 picks extent / 10.
SlmProfile gaussian_incident(const SlmGrid& grid, double waist = 0.0, double peak = 1.0);

/// Phase grating applied to the incident field, Fourier transformed, all
/// spatial frequencies outside half the order spacing blocked, transformed
/// back. Throws GridMismatch when the grids differ.
SlmProfile simulate_farfield(const PhaseMask& mask, const SlmProfile& incident);

/// Replaceable measurement of the zero-order output for a mask (a camera in the lab).
using FarfieldMeasurement = std::function<SlmProfile(const PhaseMask&)>;

struct MaskSynthesisOptions {
    int iterations = 30;
    double target_error = 0.01;  // RMS, relative to the peak target over the support
    double period_px = 16.0;
    /// Samples where the target is enforced; outside it the mask holds the edge depth.
    double support_min = 0.0;
    double support_max = 0.0;  // support_max <= support_min means the whole grid
    FarfieldMeasurement measure;  // empty means simulate_farfield
};

struct MaskSynthesisResult {
    PhaseMask mask;
    double error = 0.0;
    std::vector<double> error_trace;  // best-so-far after each measurement
};

/// Initial depth from inverting J0^2 = target / incident, then fixed-point
/// correction against the measured output. Throws TargetInfeasible when the
/// target exceeds the incident intensity anywhere in the support.
MaskSynthesisResult synthesize_mask(const SlmProfile& target, const SlmProfile& incident,
                                    const MaskSynthesisOptions& opts = {});

/// RMS of (output - target) over the support, divided by the peak target there.
double profile_error(const SlmProfile& output, const SlmProfile& target, double support_min,
                     double support_max);

void write_mask_csv(const std::filesystem::path& path, const PhaseMask& mask);
PhaseMask read_mask_csv(const std::filesystem::path& path, double period_px = 16.0);
/// 8-bit binary PGM of the wrapped phase (0..2 pi -> 0..255), `rows` identical lines.
void write_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask, int rows = 1080);
/// Reads columns z_prime_mm and intensity; the samples must lie on a uniform grid.
SlmProfile read_profile_table(const std::filesystem::path& path);

}  // namespace starkmem
