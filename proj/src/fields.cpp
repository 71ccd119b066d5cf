#include "starkmem/fields.hpp"

#include "starkmem/errors.hpp"
#include "starkmem/table_io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace starkmem {

double SampledProfile::at(double x) const
{
    if (z.empty() || x < z.front() || x > z.back()) return 0.0;
    const auto it = std::upper_bound(z.begin(), z.end(), x);
    if (it == z.end()) return value.back();
    const std::size_t hi = static_cast<std::size_t>(it - z.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - z[lo]) / (z[hi] - z[lo]);
    return value[lo] + t * (value[hi] - value[lo]);
}

void SampledProfile::validate() const
{
    if (z.size() != value.size()) throw DomainError("sampled profile: z and value sizes differ");
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (!(z[i] > z[i - 1])) throw DomainError("sampled profile: z must be strictly increasing");
    }
}

FieldProfile negate(const FieldProfile& p)
{
    FieldProfile out{-p.b0, -p.b1, -p.b2, p.residual};
    for (auto& v : out.residual.value) v = -v;
    return out;
}

FieldProfile compose(const FieldProfile& a, const FieldProfile& b)
{
    FieldProfile out{a.b0 + b.b0, a.b1 + b.b1, a.b2 + b.b2, {}};
    if (!a.has_residual()) {
        out.residual = b.residual;
    } else if (!b.has_residual()) {
        out.residual = a.residual;
    } else {
        std::vector<double> grid;
        grid.reserve(a.residual.z.size() + b.residual.z.size());
        std::merge(a.residual.z.begin(), a.residual.z.end(), b.residual.z.begin(),
                   b.residual.z.end(), std::back_inserter(grid));
        // Each residual drops to zero at its ends; keep that step sharp.
        for (const auto* r : {&a.residual, &b.residual}) {
            grid.push_back(std::nextafter(r->z.front(), -HUGE_VAL));
            grid.push_back(std::nextafter(r->z.back(), HUGE_VAL));
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        out.residual.z = grid;
        out.residual.value.reserve(grid.size());
        for (double z : grid) out.residual.value.push_back(a.residual.at(z) + b.residual.at(z));
    }
    return out;
}

void FieldTimeSeries::append(double key, FieldProfile field)
{
    if (!samples_.empty() && !(key > samples_.back().key)) {
        throw DomainError("time series keys must be strictly increasing");
    }
    samples_.push_back({key, std::move(field)});
}

const FieldProfile& FieldTimeSeries::at(double key) const
{
    if (samples_.empty() || key < samples_.front().key) {
        throw DomainError("time series has no sample at or before the requested key");
    }
    auto it = std::upper_bound(samples_.begin(), samples_.end(), key,
                               [](double k, const Sample& s) { return k < s.key; });
    return std::prev(it)->field;
}

FitWindow FitWindow::around(double center, double sigma, double n_sigma)
{
    FitWindow w;
    w.z_min = center - n_sigma * sigma;
    w.z_max = center + n_sigma * sigma;
    w.density_center = center;
    w.density_sigma = sigma;
    return w;
}

std::array<double, 3> fit_quadratic(const std::vector<double>& z, const std::vector<double>& value,
                                    const std::vector<double>& weight)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    if (n < 3) throw DomainError("quadratic fit needs at least three points");
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sqrt(weight[i]);
        a(i, 0) = s;
        a(i, 1) = s * z[i];
        a(i, 2) = s * z[i] * z[i];
        y(i) = s * value[i];
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
    return {c(0), c(1), c(2)};
}

FieldProfile fictitious_profile(const AtomSystem& atom, const BeamConfig& beam,
                                const std::function<double(double)>& intensity,
                                const FitWindow& window)
{
    if (!(window.z_max > window.z_min) || window.points < 3 || !(window.density_sigma > 0.0)) {
        throw DomainError("invalid fit window");
    }
    // The conversion is linear in intensity, so one unit evaluation suffices.
    const double per_unit = fictitious_field(atom, beam.with_intensity(1.0));

    std::vector<double> z(window.points), b(window.points), w(window.points);
    const double dz = (window.z_max - window.z_min) / (window.points - 1);
    for (int i = 0; i < window.points; ++i) {
        z[i] = window.z_min + i * dz;
        const double local = intensity(z[i]);
        if (local < 0.0) throw DomainError("beam intensity profile is negative on the fit support");
        b[i] = per_unit * local;
        const double u = (z[i] - window.density_center) / window.density_sigma;
        w[i] = std::exp(-0.5 * u * u);
    }
    const auto c = fit_quadratic(z, b, w);
    FieldProfile out{c[0], c[1], c[2], {}};

    double scale = 0.0, worst = 0.0;
    std::vector<double> rest(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        rest[i] = b[i] - out.polynomial(z[i]);
        scale = std::max(scale, std::abs(b[i]));
        worst = std::max(worst, std::abs(rest[i]));
    }
    if (worst > 1e-12 * std::max(scale, 1.0)) out.residual = {std::move(z), std::move(rest)};
    return out;
}

FieldProfile fictitious_profile(const AtomSystem& atom, const BeamConfig& beam,
                                const SampledProfile& intensity, const FitWindow& window)
{
    intensity.validate();
    if (intensity.empty() || intensity.z.front() > window.z_min || intensity.z.back() < window.z_max) {
        throw DomainError("intensity table does not cover the fit support");
    }
    return fictitious_profile(
        atom, beam, [&](double z) { return intensity.at(z); }, window);
}

void write_field_text(std::ostream& os, const FieldProfile& field)
{
    os << "b0_mG = " << format_number(field.b0) << '\n'
       << "b1_mG_per_cm = " << format_number(field.b1) << '\n'
       << "b2_mG_per_cm2 = " << format_number(field.b2) << '\n';
    if (field.has_residual()) {
        os << "[residual]\n";
        CsvTable t{{"z_cm", "B_mG"}, {}};
        for (std::size_t i = 0; i < field.residual.z.size(); ++i) {
            t.rows.push_back({field.residual.z[i], field.residual.value[i]});
        }
        write_csv(os, t);
    }
}

FieldProfile read_field_text(std::istream& is)
{
    FieldProfile out;
    bool seen[3] = {false, false, false};
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        if (line.compare(b, 10, "[residual]") == 0) {
            std::ostringstream rest;
            rest << is.rdbuf();
            std::istringstream table_in(rest.str());
            const auto table = read_csv(table_in);
            out.residual.z = table.column_values("z_cm");
            out.residual.value = table.column_values("B_mG");
            out.residual.validate();
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = line.substr(b, eq - b);
        key.erase(key.find_last_not_of(" \t") + 1);
        double v = 0.0;
        if (!parse_number(line.substr(eq + 1), v)) {
            throw FormatError("line " + std::to_string(line_no) + ": bad number for " + key);
        }
        if (key == "b0_mG") {
            out.b0 = v;
            seen[0] = true;
        } else if (key == "b1_mG_per_cm") {
            out.b1 = v;
            seen[1] = true;
        } else if (key == "b2_mG_per_cm2") {
            out.b2 = v;
            seen[2] = true;
        } else {
            throw FormatError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (!seen[0] && !seen[1] && !seen[2] && !out.has_residual()) {
        throw FormatError("field file defines no coefficients");
    }
    return out;
}

SampledProfile read_profile_csv(const std::filesystem::path& path, const std::string& z_column,
                                const std::string& value_column)
{
    const auto table = read_csv_file(path);
    SampledProfile p{table.column_values(z_column), table.column_values(value_column)};
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return p;
}

void write_profile_csv(const std::filesystem::path& path, const SampledProfile& profile,
                       const std::string& z_column, const std::string& value_column)
{
    CsvTable t{{z_column, value_column}, {}};
    for (std::size_t i = 0; i < profile.z.size(); ++i) t.rows.push_back({profile.z[i], profile.value[i]});
    write_csv_file(path, t);
}

}  // namespace starkmem
