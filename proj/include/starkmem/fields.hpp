#pragma once

// Magnetic field distributions along the ensemble axis z: a quadratic
// polynomial plus an optional sampled residual, and per-cycle time series.

#include "starkmem/atomic_data.hpp"
#include "starkmem/stark.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <vector>

namespace starkmem {

/// Piecewise-linear table on strictly increasing abscissae. Evaluates to 0
/// outside the tabulated range.
struct SampledProfile {
    std::vector<double> z;
    std::vector<double> value;

    bool empty() const { return z.empty(); }
    double at(double x) const;
    /// Throws DomainError unless sizes match and z is strictly increasing.
    void validate() const;
};

/// B(z) = b0 + b1 z + b2 z^2 + residual(z); mG, cm.
struct FieldProfile {
    double b0 = 0.0;  // mG
    double b1 = 0.0;  // mG/cm
    double b2 = 0.0;  // mG/cm^2
    SampledProfile residual;

    double polynomial(double z) const { return b0 + z * (b1 + z * b2); }
    double at(double z) const { return polynomial(z) + residual.at(z); }
    bool has_residual() const { return !residual.empty(); }

    static FieldProfile bias(double b0) { return {b0, 0.0, 0.0, {}}; }
    static FieldProfile polynomial_field(double b0, double b1, double b2) { return {b0, b1, b2, {}}; }
};

FieldProfile negate(const FieldProfile& p);

/// Coefficient-wise sum; residuals are summed on the union of both grids.
FieldProfile compose(const FieldProfile& a, const FieldProfile& b);

/// Piecewise-constant field per experimental cycle (or time key).
class FieldTimeSeries {
public:
    struct Sample {
        double key = 0.0;
        FieldProfile field;
    };

    /// Keys must be strictly increasing; throws DomainError otherwise.
    void append(double key, FieldProfile field);
    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    /// Field in effect at `key` (the last sample with sample.key <= key).
    const FieldProfile& at(double key) const;

private:
    std::vector<Sample> samples_;
};

/// Where and how a fictitious-field map is reduced to (b0, b1, b2).
struct FitWindow {
    double z_min = -1.25;
    double z_max = 1.25;
    /// Fit weights follow a Gaussian atomic density with these parameters.
    double density_center = 0.0;
    double density_sigma = 0.625;
    int points = 401;

    /// +-n_sigma around a Gaussian density.
    static FitWindow around(double center, double sigma, double n_sigma = 2.0);
};

/// Fictitious field of a spatially varying beam: per-point conversion of
/// I(z) followed by a density-weighted least-squares quadratic fit. The fit
/// remainder is kept as the sampled residual (dropped when negligible).
FieldProfile fictitious_profile(const AtomSystem& atom, const BeamConfig& beam,
                                const std::function<double(double)>& intensity,
                                const FitWindow& window);
FieldProfile fictitious_profile(const AtomSystem& atom, const BeamConfig& beam,
                                const SampledProfile& intensity, const FitWindow& window);

/// Weighted least-squares quadratic through (z, value, weight); returns {c0, c1, c2}.
std::array<double, 3> fit_quadratic(const std::vector<double>& z, const std::vector<double>& value,
                                    const std::vector<double>& weight);

// Text format:
//   b0_mG = ...
//   b1_mG_per_cm = ...
//   b2_mG_per_cm2 = ...
//   [residual]
//   z_cm,B_mG
//   ...
void write_field_text(std::ostream& os, const FieldProfile& field);
FieldProfile read_field_text(std::istream& is);

/// Sampled profile CSV with the given column names.
SampledProfile read_profile_csv(const std::filesystem::path& path, const std::string& z_column,
                                const std::string& value_column);
void write_profile_csv(const std::filesystem::path& path, const SampledProfile& profile,
                       const std::string& z_column, const std::string& value_column);

}  // namespace starkmem
