#include "starkmem/memory_sim.hpp"

#include "starkmem/errors.hpp"
#include "starkmem/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

namespace starkmem {

namespace {

const double kInvE = std::exp(-1.0);

using Complex = std::complex<double>;

// Integral of `fn` weighted by the density over +-half_width sigma,
// divided by the density mass on that interval. The interval is split at the
// knots of the sampled residual so every piece is smooth.
template <class Fn>
Complex density_average(const GaussianDensity& rho, const QuadratureOptions& q, const SampledProfile& kinks,
                        Fn&& fn)
{
    using boost::math::quadrature::gauss_kronrod;
    const double lo = rho.center - q.half_width_sigmas * rho.sigma;
    const double hi = rho.center + q.half_width_sigmas * rho.sigma;
    std::vector<double> cuts{lo};
    for (double z : kinks.z) {
        if (z > lo && z < hi) cuts.push_back(z);
    }
    cuts.push_back(hi);
    Complex integral{0.0, 0.0};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        integral += gauss_kronrod<double, 15>::integrate([&](double z) { return rho(z) * fn(z); }, cuts[i - 1],
                                                          cuts[i], q.max_depth, q.tolerance);
    }
    const double mass = std::erf(q.half_width_sigmas / std::numbers::sqrt2);
    return integral / mass;
}

bool spatially_uniform(const FieldProfile& f)
{
    return f.b1 == 0.0 && f.b2 == 0.0 && !f.has_residual();
}

}  // namespace

double Envelope::operator()(double t) const
{
    switch (kind) {
    case EnvelopeKind::None:
        return 1.0;
    case EnvelopeKind::Gaussian:
        return std::exp(-(t * t) / (time_constant * time_constant));
    case EnvelopeKind::Exponential:
        return std::exp(-rate * t);
    }
    return 1.0;
}

double Envelope::lifetime() const
{
    switch (kind) {
    case EnvelopeKind::None:
        return std::numeric_limits<double>::infinity();
    case EnvelopeKind::Gaussian:
        return time_constant;
    case EnvelopeKind::Exponential:
        return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::infinity();
}

double GaussianDensity::operator()(double z) const
{
    const double u = (z - center) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

void EnsembleConfig::validate(const AtomSystem& atom) const
{
    if (!(density.sigma > 0.0)) throw DomainError("density sigma must be > 0");
    switch (envelope.kind) {
    case EnvelopeKind::Gaussian:
        if (!(envelope.time_constant > 0.0)) throw DomainError("Gaussian envelope needs T > 0");
        break;
    case EnvelopeKind::Exponential:
        if (!(envelope.rate >= 0.0)) throw DomainError("exponential envelope needs rate >= 0");
        break;
    case EnvelopeKind::None:
        break;
    }
    if (!(extra_decay_rate >= 0.0)) throw DomainError("extra decay rate must be >= 0");
    if (std::abs(q_storage) > 1) throw DomainError("q_storage must be -1, 0 or +1");

    const auto& lower = atom.ground(atom.lower_ground_f());
    const auto& upper = atom.ground(atom.upper_ground_f());
    if (scheme == StorageScheme::Eit) {
        if (populations.size() != static_cast<std::size_t>(2 * lower.f + 1)) {
            throw DomainError("EIT populations need one weight per lower-manifold sublevel");
        }
        double sum = 0.0;
        for (double a : populations) {
            if (!(a >= 0.0)) throw DomainError("populations must be non-negative");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw DomainError("populations must sum to 1");
        for (int m : lower.sublevels()) {
            if (populations[m + lower.f] > 0.0 && std::abs(m + q_storage) > upper.f) {
                throw DomainError("populated sublevel has no storage partner");
            }
        }
    } else {
        if (std::abs(raman_m_f) > lower.f || std::abs(raman_m_f + q_storage) > upper.f) {
            throw DomainError("Raman sublevel outside the ground manifolds");
        }
    }
}

double EnsembleConfig::envelope_at(double t) const
{
    double e = envelope(t);
    if (extra_decay_rate > 0.0) e *= std::exp(-extra_decay_rate * t);
    return e;
}

EnsembleConfig EnsembleConfig::eit(const AtomSystem& atom, GaussianDensity density,
                                   Envelope envelope)
{
    EnsembleConfig e;
    e.density = density;
    const int n = 2 * atom.lower_ground_f() + 1;
    e.populations.assign(n, 1.0 / n);
    e.scheme = StorageScheme::Eit;
    e.q_storage = 1;
    e.envelope = envelope;
    return e;
}

EnsembleConfig EnsembleConfig::raman(int m_f, GaussianDensity density, Envelope envelope)
{
    EnsembleConfig e;
    e.density = density;
    e.scheme = StorageScheme::Raman;
    e.q_storage = 0;
    e.raman_m_f = m_f;
    e.envelope = envelope;
    return e;
}

double differential_g(const AtomSystem& atom, int m_f, int m_f_prime)
{
    return m_f_prime * atom.ground(atom.upper_ground_f()).g_factor -
           m_f * atom.ground(atom.lower_ground_f()).g_factor;
}

double efficiency_multi(const AtomSystem& atom, const EnsembleConfig& ensemble,
                        const FieldProfile& field, double t, const QuadratureOptions& q)
{
    const int f = atom.lower_ground_f();
    const double mu = atom.constants().bohr_magneton_rad_per_us_per_mG();

    std::vector<std::pair<double, double>> terms;  // (weight, phase rate per mG)
    double total = 0.0;
    for (int m = -f; m <= f; ++m) {
        const double a = ensemble.populations.at(m + f);
        if (a == 0.0) continue;
        terms.emplace_back(a, mu * differential_g(atom, m, m + ensemble.q_storage) * t);
        total += a;
    }
    if (terms.empty() || total <= 0.0) throw DomainError("no populated sublevels");

    auto phasor_sum = [&](double b) {
        Complex s{0.0, 0.0};
        for (const auto& [a, k] : terms) s += a * std::polar(1.0, k * b);
        return s;
    };

    Complex amplitude;
    if (spatially_uniform(field)) {
        amplitude = phasor_sum(field.b0);
    } else {
        amplitude = density_average(ensemble.density, q, field.residual,
                                    [&](double z) { return phasor_sum(field.at(z)); });
    }
    amplitude /= total;
    return std::norm(amplitude) * ensemble.envelope_at(t);
}

double efficiency_raman(const AtomSystem& atom, const EnsembleConfig& ensemble,
                        const FieldProfile& field, double t, const QuadratureOptions& q)
{
    const int m = ensemble.raman_m_f;
    const double k = atom.constants().bohr_magneton_rad_per_us_per_mG() *
                     differential_g(atom, m, m + ensemble.q_storage) * t;
    if (k == 0.0 || spatially_uniform(field)) return ensemble.envelope_at(t);

    const Complex amplitude = density_average(ensemble.density, q, field.residual, [&](double z) {
        const double b = z * (field.b1 + z * field.b2) + field.residual.at(z);
        return std::polar(1.0, -k * b);
    });
    return std::norm(amplitude) * ensemble.envelope_at(t);
}

double efficiency(const AtomSystem& atom, const EnsembleConfig& ensemble,
                  const FieldProfile& field, double t, const QuadratureOptions& q)
{
    return ensemble.scheme == StorageScheme::Eit ? efficiency_multi(atom, ensemble, field, t, q)
                                                 : efficiency_raman(atom, ensemble, field, t, q);
}

double lifetime_from_samples(const std::vector<double>& t, const std::vector<double>& eta)
{
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i] <= kInvE) {
            if (i == 0) return t[0];
            const double frac = (eta[i - 1] - kInvE) / (eta[i - 1] - eta[i]);
            return t[i - 1] + frac * (t[i] - t[i - 1]);
        }
    }
    throw LifetimeNotReached("retrieval efficiency stays above 1/e on the time grid; extend it");
}

namespace {

double lifetime_or_nan(const std::vector<double>& t, const std::vector<double>& eta)
{
    try {
        return lifetime_from_samples(t, eta);
    } catch (const LifetimeNotReached&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

DecayCurve decay_curve(const AtomSystem& atom, const EnsembleConfig& ensemble,
                       const FieldProfile& field, const std::vector<double>& t_grid,
                       const QuadratureOptions& q)
{
    ensemble.validate(atom);
    if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be increasing");
    }
    DecayCurve c;
    c.t = t_grid;
    c.eta.reserve(t_grid.size());
    for (double t : t_grid) c.eta.push_back(efficiency(atom, ensemble, field, t, q));
    c.lifetime_1e = lifetime_or_nan(c.t, c.eta);
    return c;
}

std::vector<double> uniform_grid(double t_max, double step)
{
    if (!(t_max > 0.0) || !(step > 0.0)) throw DomainError("time grid needs t_max > 0 and step > 0");
    const auto n = static_cast<std::size_t>(std::llround(t_max / step));
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = step * static_cast<double>(i);
    return g;
}

LifetimeSearch LifetimeSearch::resolved(const EnsembleConfig& ensemble) const
{
    LifetimeSearch s = *this;
    double env_life = ensemble.envelope.lifetime();
    if (ensemble.extra_decay_rate > 0.0) {
        // Combined envelope crossing; both factors are monotone.
        double lo = 0.0, hi = std::min(env_life, 1.0 / ensemble.extra_decay_rate);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (ensemble.envelope_at(mid) > kInvE ? lo : hi) = mid;
        }
        env_life = hi;
    }
    const bool finite = std::isfinite(env_life);
    if (!(s.t_max > 0.0)) s.t_max = finite ? 1.5 * env_life : 5000.0;
    if (!(s.step > 0.0)) s.step = finite ? env_life / 400.0 : 0.5;
    return s;
}

double find_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                     const FieldProfile& field, const LifetimeSearch& search,
                     const QuadratureOptions& q)
{
    ensemble.validate(atom);
    const auto s = search.resolved(ensemble);
    auto eta = [&](double t) { return efficiency(atom, ensemble, field, t, q); };

    double prev = 0.0;
    for (double t = s.step;; t += s.step) {
        t = std::min(t, s.t_max);
        if (eta(t) <= kInvE) {
            double lo = prev, hi = t;
            while (hi - lo > s.tolerance * hi) {
                const double mid = 0.5 * (lo + hi);
                (eta(mid) > kInvE ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        if (t >= s.t_max) break;
        prev = t;
    }
    throw LifetimeNotReached("no 1/e crossing before t_max = " + std::to_string(s.t_max) + " us");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 1) throw DomainError("linspace needs n >= 1");
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    v.back() = hi;
    return v;
}

Heatmap lifetime_heatmap(const AtomSystem& atom, const EnsembleConfig& ensemble,
                         const std::vector<double>& b1_values, const std::vector<double>& b2_values,
                         unsigned threads, const LifetimeSearch& search,
                         const QuadratureOptions& q)
{
    Heatmap map;
    map.b1 = b1_values;
    map.b2 = b2_values;
    map.tau_reference = find_lifetime(atom, ensemble, FieldProfile{}, search, q);

    const std::size_t n1 = b1_values.size(), n2 = b2_values.size();
    std::vector<double> flat(n1 * n2);
    parallel_for(flat.size(), threads, [&](std::size_t k) {
        const auto field = FieldProfile::polynomial_field(0.0, b1_values[k / n2], b2_values[k % n2]);
        flat[k] = find_lifetime(atom, ensemble, field, search, q) / map.tau_reference;
    });
    map.tau_norm.assign(n1, std::vector<double>(n2));
    for (std::size_t k = 0; k < flat.size(); ++k) map.tau_norm[k / n2][k % n2] = flat[k];
    return map;
}

FieldTimeSeries draw_bias_series(const FieldProfile& base, const FluctuationSpec& spec)
{
    if (spec.cycles < 1) throw DomainError("Monte Carlo needs at least one cycle");
    if (spec.levels < 1) throw DomainError("fluctuation needs at least one level");
    if (!(spec.range >= 0.0)) throw DomainError("fluctuation range must be >= 0");
    std::mt19937_64 rng(spec.seed);
    FieldTimeSeries series;
    for (int c = 0; c < spec.cycles; ++c) {
        // Modulo keeps the draw identical across standard libraries.
        const auto level = static_cast<int>(rng() % static_cast<std::uint64_t>(spec.levels));
        const double offset =
            spec.levels == 1 ? 0.0 : spec.range * (static_cast<double>(level) / (spec.levels - 1) - 0.5);
        FieldProfile f = base;
        f.b0 = base.b0 + offset;
        series.append(c, std::move(f));
    }
    return series;
}

MonteCarloResult montecarlo_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                     const FieldTimeSeries& series,
                                     const std::vector<double>& t_grid,
                                     const std::vector<double>* compensation_b0, unsigned threads,
                                     const QuadratureOptions& q)
{
    ensemble.validate(atom);
    if (series.empty()) throw DomainError("Monte Carlo needs at least one cycle");
    if (compensation_b0 && compensation_b0->size() != series.size()) {
        throw DomainError("compensation schedule length differs from the cycle count");
    }
    if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("time grid must start at 0");

    MonteCarloResult result;
    std::vector<FieldProfile> cycle_fields;
    cycle_fields.reserve(series.size());
    for (std::size_t c = 0; c < series.size(); ++c) {
        FieldProfile f = series.samples()[c].field;
        if (compensation_b0) f.b0 += (*compensation_b0)[c];
        result.cycle_b0.push_back(f.b0);
        cycle_fields.push_back(std::move(f));
    }

    // Identical cycles are evaluated once; weights are count / N.
    using Key = std::tuple<double, double, double>;
    std::map<Key, std::size_t> counts;
    std::vector<std::size_t> distinct;
    bool groupable = true;
    for (const auto& f : cycle_fields) groupable = groupable && !f.has_residual();
    if (groupable) {
        for (std::size_t c = 0; c < cycle_fields.size(); ++c) {
            const auto& f = cycle_fields[c];
            auto [it, inserted] = counts.try_emplace(Key{f.b0, f.b1, f.b2}, 0);
            if (inserted) distinct.push_back(c);
            ++it->second;
        }
    } else {
        for (std::size_t c = 0; c < cycle_fields.size(); ++c) distinct.push_back(c);
    }

    std::vector<std::vector<double>> curves(distinct.size());
    parallel_for(distinct.size(), threads, [&](std::size_t k) {
        const auto& f = cycle_fields[distinct[k]];
        auto& curve = curves[k];
        curve.reserve(t_grid.size());
        for (double t : t_grid) curve.push_back(efficiency(atom, ensemble, f, t, q));
    });

    const double n = static_cast<double>(cycle_fields.size());
    result.mean.t = t_grid;
    result.mean.eta.assign(t_grid.size(), 0.0);
    for (std::size_t k = 0; k < distinct.size(); ++k) {
        const auto& f = cycle_fields[distinct[k]];
        const double count =
            groupable ? static_cast<double>(counts.at(Key{f.b0, f.b1, f.b2})) : 1.0;
        const double w = count / n;
        for (std::size_t i = 0; i < t_grid.size(); ++i) result.mean.eta[i] += w * curves[k][i];
    }
    result.mean.lifetime_1e = lifetime_or_nan(result.mean.t, result.mean.eta);
    return result;
}

MonteCarloResult montecarlo_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                     const FieldProfile& base_field, const FluctuationSpec& spec,
                                     const std::vector<double>& t_grid, unsigned threads,
                                     const QuadratureOptions& q)
{
    return montecarlo_lifetime(atom, ensemble, draw_bias_series(base_field, spec), t_grid, nullptr,
                               threads, q);
}

}  // namespace starkmem
