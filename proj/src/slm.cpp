#include "starkmem/slm.hpp"

#include "starkmem/errors.hpp"
#include "starkmem/table_io.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

namespace starkmem {

namespace {

constexpr double kPi = std::numbers::pi;

double j0_squared(double m)
{
    const double j = boost::math::cyl_bessel_j(0, m);
    return j * j;
}

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftBuffer {
    explicit FftBuffer(int n)
        : n(n), data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)))
    {
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftBuffer()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(data);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    int n;
    fftw_complex* data;
    fftw_plan forward;
    fftw_plan backward;
};

std::pair<int, int> support_indices(const SlmGrid& grid, double lo, double hi)
{
    if (!(hi > lo)) return {0, grid.samples - 1};
    int first = grid.samples, last = -1;
    for (int i = 0; i < grid.samples; ++i) {
        const double z = grid.z(i);
        if (z >= lo && z <= hi) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (last < 0) throw DomainError("mask support contains no grid samples");
    return {first, last};
}

}  // namespace

std::vector<double> SlmGrid::coordinates() const
{
    std::vector<double> z(samples);
    for (int i = 0; i < samples; ++i) z[i] = this->z(i);
    return z;
}

PhaseMask PhaseMask::uniform(const SlmGrid& grid, double m, double period_px)
{
    PhaseMask mask{grid, period_px, std::vector<double>(grid.samples, m)};
    mask.validate();
    return mask;
}

void PhaseMask::validate() const
{
    if (grid.samples < 2 || !(grid.pitch > 0.0)) throw DomainError("SLM grid needs >= 2 samples and a positive pitch");
    if (!(period_px >= 2.0)) throw DomainError("grating period must be at least 2 pixels");
    if (static_cast<int>(depth.size()) != grid.samples) {
        throw GridMismatch("mask depth has " + std::to_string(depth.size()) + " samples, grid has " +
                           std::to_string(grid.samples));
    }
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (!(depth[i] >= 0.0 && depth[i] <= kPi)) {
            std::ostringstream os;
            os << "modulation depth " << depth[i] << " at sample " << i << " is outside [0, pi]";
            throw DomainError(os.str());
        }
    }
}

double PhaseMask::phase(int i) const
{
    return depth[i] * std::sin(2.0 * kPi * i / period_px);
}

double zero_order_efficiency(double m)
{
    if (!(m >= 0.0 && m <= kPi)) {
        std::ostringstream os;
        os << "modulation depth " << m << " rad is outside [0, pi]";
        throw DomainError(os.str());
    }
    return j0_squared(m);
}

double monotone_depth_limit()
{
    static const double z = boost::math::cyl_bessel_j_zero(0.0, 1);
    return z;
}

double zero_order_depth(double efficiency)
{
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        std::ostringstream os;
        os << "zero-order efficiency " << efficiency << " is outside [0, 1]";
        throw DomainError(os.str());
    }
    if (efficiency == 1.0) return 0.0;
    if (efficiency == 0.0) return monotone_depth_limit();
    auto f = [efficiency](double m) { return j0_squared(m) - efficiency; };
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, 0.0, monotone_depth_limit(), 1.0 - efficiency,
                                                     -efficiency,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

SlmProfile gaussian_incident(const SlmGrid& grid, double waist, double peak)
{
    if (waist <= 0.0) waist = grid.extent() / 10.0;
    SlmProfile p{grid, std::vector<double>(grid.samples)};
    for (int i = 0; i < grid.samples; ++i) {
        const double z = grid.z(i);
        p.intensity[i] = peak * std::exp(-2.0 * z * z / (waist * waist));
    }
    return p;
}

SlmProfile simulate_farfield(const PhaseMask& mask, const SlmProfile& incident)
{
    mask.validate();
    if (!(mask.grid == incident.grid) ||
        static_cast<int>(incident.intensity.size()) != incident.grid.samples) {
        throw GridMismatch("mask and incident beam are sampled on different grids");
    }
    const int n = mask.grid.samples;
    FftBuffer fft(n);
    for (int i = 0; i < n; ++i) {
        if (incident.intensity[i] < 0.0) throw DomainError("incident intensity must be non-negative");
        const auto e = std::sqrt(incident.intensity[i]) * std::polar(1.0, mask.phase(i));
        fft.data[i][0] = e.real();
        fft.data[i][1] = e.imag();
    }
    fftw_execute(fft.forward);
    // Orders sit n / period bins apart; pass strictly less than half of that.
    const double half_window = 0.5 * n / mask.period_px;
    for (int k = 0; k < n; ++k) {
        const int freq = k <= n / 2 ? k : k - n;
        if (std::abs(freq) >= half_window) {
            fft.data[k][0] = 0.0;
            fft.data[k][1] = 0.0;
        }
    }
    fftw_execute(fft.backward);
    SlmProfile out{mask.grid, std::vector<double>(n)};
    const double norm = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        const double re = fft.data[i][0] * norm, im = fft.data[i][1] * norm;
        out.intensity[i] = re * re + im * im;
    }
    return out;
}

double profile_error(const SlmProfile& output, const SlmProfile& target, double support_min,
                     double support_max)
{
    if (!(output.grid == target.grid)) throw GridMismatch("output and target grids differ");
    const auto [first, last] = support_indices(target.grid, support_min, support_max);
    double peak = 0.0, sum = 0.0;
    for (int i = first; i <= last; ++i) {
        peak = std::max(peak, target.intensity[i]);
        const double d = output.intensity[i] - target.intensity[i];
        sum += d * d;
    }
    if (peak <= 0.0) throw DomainError("target is zero over the support");
    return std::sqrt(sum / (last - first + 1)) / peak;
}

MaskSynthesisResult synthesize_mask(const SlmProfile& target, const SlmProfile& incident,
                                    const MaskSynthesisOptions& opts)
{
    if (!(target.grid == incident.grid) ||
        static_cast<int>(target.intensity.size()) != target.grid.samples ||
        static_cast<int>(incident.intensity.size()) != incident.grid.samples) {
        throw GridMismatch("target and incident beam are sampled on different grids");
    }
    if (opts.iterations < 0) throw DomainError("iteration budget must be non-negative");
    const SlmGrid& grid = target.grid;
    const int n = grid.samples;
    const auto [first, last] = support_indices(grid, opts.support_min, opts.support_max);

    std::vector<double> eff(n, 1.0);
    for (int i = first; i <= last; ++i) {
        const double t = target.intensity[i], in = incident.intensity[i];
        if (t < 0.0) throw TargetInfeasible("target intensity is negative at z' = " + format_number(grid.z(i)));
        if (t > in * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "target " << t << " exceeds the incident intensity " << in << " at z' = " << grid.z(i)
               << " mm; the zero order can only remove light";
            throw TargetInfeasible(os.str());
        }
        eff[i] = in > 0.0 ? std::min(1.0, t / in) : 1.0;
    }
    auto depths_from = [&](const std::vector<double>& e) {
        std::vector<double> m(n);
        for (int i = first; i <= last; ++i) m[i] = zero_order_depth(std::clamp(e[i], 0.0, 1.0));
        for (int i = 0; i < first; ++i) m[i] = m[first];
        for (int i = last + 1; i < n; ++i) m[i] = m[last];
        return m;
    };

    const FarfieldMeasurement measure =
        opts.measure ? opts.measure : [&incident](const PhaseMask& m) { return simulate_farfield(m, incident); };

    MaskSynthesisResult result;
    result.mask = PhaseMask{grid, opts.period_px, depths_from(eff)};
    result.mask.validate();
    SlmProfile out = measure(result.mask);
    result.error = profile_error(out, target, opts.support_min, opts.support_max);
    result.error_trace.push_back(result.error);

    // Multiplicative correction of the local efficiency; a step that makes
    // things worse is discarded and the next one is damped.
    double damping = 1.0;
    std::vector<double> best_eff = eff;
    SlmProfile best_out = out;
    for (int it = 0; it < opts.iterations && result.error > opts.target_error; ++it) {
        std::vector<double> trial = best_eff;
        for (int i = first; i <= last; ++i) {
            if (best_out.intensity[i] > 0.0) {
                trial[i] = best_eff[i] * std::pow(target.intensity[i] / best_out.intensity[i], damping);
            }
        }
        PhaseMask mask{grid, opts.period_px, depths_from(trial)};
        SlmProfile trial_out = measure(mask);
        const double err = profile_error(trial_out, target, opts.support_min, opts.support_max);
        if (err < result.error) {
            result.error = err;
            result.mask = std::move(mask);
            best_eff = std::move(trial);
            best_out = std::move(trial_out);
        } else {
            damping *= 0.5;
        }
        result.error_trace.push_back(result.error);
    }
    return result;
}

void write_mask_csv(const std::filesystem::path& path, const PhaseMask& mask)
{
    mask.validate();
    CsvTable t;
    t.header = {"z_prime_mm", "m_rad"};
    for (int i = 0; i < mask.grid.samples; ++i) t.rows.push_back({mask.grid.z(i), mask.depth[i]});
    write_csv_file(path, t);
}

namespace {

SlmGrid grid_from_coordinates(const std::vector<double>& z, const std::string& what)
{
    if (z.size() < 2) throw FormatError(what + " needs at least two samples");
    const double pitch = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
    if (!(pitch > 0.0)) throw FormatError(what + " coordinates must increase");
    SlmGrid grid{static_cast<int>(z.size()), pitch};
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (std::abs(z[i] - grid.z(static_cast<int>(i))) > 1e-6 * pitch) {
            throw FormatError(what + " is not on a uniform grid centered on zero (row " +
                              std::to_string(i + 2) + ")");
        }
    }
    return grid;
}

}  // namespace

PhaseMask read_mask_csv(const std::filesystem::path& path, double period_px)
{
    const auto t = read_csv_file(path);
    PhaseMask mask{grid_from_coordinates(t.column_values("z_prime_mm"), path.string()), period_px,
                   t.column_values("m_rad")};
    mask.validate();
    return mask;
}

void write_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask, int rows)
{
    mask.validate();
    if (rows < 1) throw DomainError("PGM needs at least one row");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os << "P5\n" << mask.grid.samples << ' ' << rows << "\n255\n";
    std::string line(mask.grid.samples, '\0');
    for (int i = 0; i < mask.grid.samples; ++i) {
        double wrapped = std::fmod(mask.phase(i), 2.0 * kPi);
        if (wrapped < 0.0) wrapped += 2.0 * kPi;
        const long level = std::min(255L, static_cast<long>(wrapped / (2.0 * kPi) * 256.0));
        line[i] = static_cast<char>(static_cast<unsigned char>(level));
    }
    for (int r = 0; r < rows; ++r) os.write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!os) throw FormatError("failed writing " + path.string());
}

SlmProfile read_profile_table(const std::filesystem::path& path)
{
    const auto t = read_csv_file(path);
    SlmProfile p{grid_from_coordinates(t.column_values("z_prime_mm"), path.string()),
                 t.column_values("intensity")};
    return p;
}

}  // namespace starkmem
