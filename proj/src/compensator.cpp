#include "starkmem/compensator.hpp"

#include "starkmem/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace starkmem {

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

double per_unit_field(const AtomSystem& atom, const BeamConfig& tmpl, int q_storage)
{
    const double f1 = field_per_intensity(atom, tmpl, q_storage);
    if (f1 == 0.0) throw FieldOutOfRange("beam produces no fictitious field at this geometry");
    return f1;
}

CompensationPlan zero_plan(const BeamConfig& tmpl, const FieldProfile& residual, Support support)
{
    CompensationPlan p;
    p.beam = tmpl.with_intensity(0.0);
    p.support = support;
    p.residual_after = residual;
    return p;
}

}  // namespace

double IntensityPolynomial::min_on(double lo, double hi) const
{
    double m = std::min(at(lo), at(hi));
    if (c2 != 0.0) {
        const double v = -c1 / (2.0 * c2);
        if (v > lo && v < hi) m = std::min(m, at(v));
    }
    return m;
}

double IntensityPolynomial::max_on(double lo, double hi) const
{
    double m = std::max(at(lo), at(hi));
    if (c2 != 0.0) {
        const double v = -c1 / (2.0 * c2);
        if (v > lo && v < hi) m = std::max(m, at(v));
    }
    return m;
}

FieldProfile plan_field(const AtomSystem& atom, const BeamConfig& beam,
                        const IntensityPolynomial& intensity, int q_storage)
{
    if (intensity.is_zero()) return {};
    const double k = beam.polarization * field_per_intensity(atom, beam, q_storage);
    return FieldProfile::polynomial_field(k * intensity.c0, k * intensity.c1, k * intensity.c2);
}

FieldProfile plan_field(const AtomSystem& atom, const CompensationPlan& plan, int q_storage)
{
    return plan_field(atom, plan.beam, plan.intensity, q_storage);
}

CompensationPlan solve_bias(const AtomSystem& atom, double residual_b0,
                            const BeamConfig& beam_template, const CompensatorOptions& opts)
{
    beam_template.validate();
    const auto residual = FieldProfile::bias(residual_b0);
    if (std::abs(residual_b0) < opts.zero_threshold) return zero_plan(beam_template, residual, {});

    const double f1 = per_unit_field(atom, beam_template, opts.q_storage);
    const double intensity = std::abs(residual_b0) / std::abs(f1);
    if (intensity > opts.intensity_cap) {
        std::ostringstream os;
        os << "cancelling " << residual_b0 << " mG needs " << intensity
           << " mW/mm^2, above the cap of " << opts.intensity_cap
           << "; raise the cap or reduce the detuning";
        throw FieldOutOfRange(os.str());
    }
    CompensationPlan p;
    p.beam = beam_template.with_polarization(-sign_of(residual_b0) * sign_of(f1));
    p.beam.intensity = intensity;
    p.intensity = {intensity, 0.0, 0.0};
    p.residual_after = compose(residual, plan_field(atom, p, opts.q_storage));
    return p;
}

CompensationPlan solve_profile(const AtomSystem& atom, const FieldProfile& residual,
                               const BeamConfig& beam_template, const Support& support,
                               const CompensatorOptions& opts)
{
    beam_template.validate();
    if (!(support.z_max > support.z_min)) throw DomainError("support must have z_max > z_min");
    if (std::abs(residual.b1) < opts.zero_threshold && std::abs(residual.b2) < opts.zero_threshold) {
        CompensationPlan p = solve_bias(atom, residual.b0, beam_template, opts);
        p.support = support;
        p.residual_after = compose(residual, plan_field(atom, p, opts.q_storage));
        return p;
    }

    const double f1 = per_unit_field(atom, beam_template, opts.q_storage);
    struct Candidate {
        double q;
        IntensityPolynomial poly;
        double leftover;
        double peak;
    };
    std::vector<Candidate> feasible;
    for (double q : {1.0, -1.0}) {
        const double k = q * f1;
        IntensityPolynomial shape{0.0, -residual.b1 / k, -residual.b2 / k};
        const double c0_min = std::max(0.0, -shape.min_on(support.z_min, support.z_max));
        const double c0_need = -residual.b0 / k;
        for (double c0 : {std::max(c0_need, c0_min), c0_min}) {
            IntensityPolynomial poly = shape;
            poly.c0 = c0;
            const double peak = poly.max_on(support.z_min, support.z_max);
            if (peak > opts.intensity_cap) continue;
            const double leftover = c0 == c0_need ? 0.0 : residual.b0 + k * c0;
            feasible.push_back({q, poly, leftover, peak});
            break;
        }
    }
    if (feasible.empty()) {
        std::ostringstream os;
        os << "no non-negative intensity profile below " << opts.intensity_cap
           << " mW/mm^2 realizes b1 = " << -residual.b1 << " mG/cm, b2 = " << -residual.b2
           << " mG/cm^2 on [" << support.z_min << ", " << support.z_max << "] cm";
        throw NonPhysicalProfile(os.str());
    }
    const auto best = std::min_element(feasible.begin(), feasible.end(),
                                       [](const Candidate& a, const Candidate& b) {
                                           if (std::abs(a.leftover) != std::abs(b.leftover)) {
                                               return std::abs(a.leftover) < std::abs(b.leftover);
                                           }
                                           return a.peak < b.peak;
                                       });
    CompensationPlan p;
    p.beam = beam_template.with_polarization(best->q);
    p.beam.intensity = best->poly.c0;
    p.intensity = best->poly;
    p.support = support;
    p.residual_after = compose(residual, plan_field(atom, p, opts.q_storage));
    if (best->leftover == 0.0) p.residual_after.b0 = 0.0;
    return p;
}

void predict(const AtomSystem& atom, CompensationPlan& plan, const EnsembleConfig& ensemble,
             const FieldProfile& residual, const LifetimeSearch& search,
             const CompensatorOptions& opts)
{
    const auto field = compose(residual, plan_field(atom, plan, opts.q_storage));
    plan.predicted_lifetime = find_lifetime(atom, ensemble, field, search);
}

namespace {

// Lifetime objective over (c0, c1, c2) for a fixed polarization sign, with a
// hard evaluation budget and a best-so-far trace.
class LifetimeObjective {
public:
    LifetimeObjective(const AtomSystem& atom, const EnsembleConfig& ensemble,
                      const FieldProfile& residual, const BeamConfig& tmpl, const Support& support,
                      const OptimizerOptions& options, const CompensatorOptions& opts,
                      OptimizerTrace* trace)
        : atom_(atom),
          ensemble_(ensemble),
          residual_(residual),
          tmpl_(tmpl),
          support_(support),
          options_(options),
          opts_(opts),
          trace_(trace),
          search_(options.search.resolved(ensemble))
    {
    }

    using Point = std::array<double, 3>;

    bool exhausted() const { return evaluations_ >= options_.budget; }

    bool feasible(const Point& c) const
    {
        const IntensityPolynomial p{c[0], c[1], c[2]};
        return p.min_on(support_.z_min, support_.z_max) >= -1e-12 &&
               p.max_on(support_.z_min, support_.z_max) <= opts_.intensity_cap;
    }

    /// -inf for infeasible points or once the budget is spent.
    double operator()(double q, const Point& c)
    {
        if (!feasible(c)) return -std::numeric_limits<double>::infinity();
        if (exhausted()) return -std::numeric_limits<double>::infinity();
        ++evaluations_;
        const IntensityPolynomial poly{c[0], c[1], c[2]};
        const auto field =
            compose(residual_, plan_field(atom_, tmpl_.with_polarization(q), poly, opts_.q_storage));
        double life;
        try {
            life = find_lifetime(atom_, ensemble_, field, search_, options_.quadrature);
        } catch (const LifetimeNotReached&) {
            life = search_.t_max;
        }
        if (life > best_value_ + 1e-9 * std::max(1.0, best_value_) || !has_best_) {
            best_value_ = life;
            best_q_ = q;
            best_point_ = c;
            has_best_ = true;
        }
        if (trace_) trace_->best_lifetime.push_back(best_value_);
        return life;
    }

    double best_value() const { return best_value_; }
    double best_q() const { return best_q_; }
    const Point& best_point() const { return best_point_; }

private:
    const AtomSystem& atom_;
    const EnsembleConfig& ensemble_;
    const FieldProfile& residual_;
    const BeamConfig& tmpl_;
    Support support_;
    const OptimizerOptions& options_;
    const CompensatorOptions& opts_;
    OptimizerTrace* trace_;
    LifetimeSearch search_;
    int evaluations_ = 0;
    bool has_best_ = false;
    double best_value_ = -std::numeric_limits<double>::infinity();
    double best_q_ = 1.0;
    Point best_point_{0.0, 0.0, 0.0};
};

// Coordinate descent with geometric step shrinking. Accepts strict
// improvements only.
void coordinate_descent(LifetimeObjective& f, double q, LifetimeObjective::Point x, double fx,
                        std::array<double, 3> step, int max_evals)
{
    int used = 0;
    const std::array<double, 3> min_step{step[0] * 1e-4, step[1] * 1e-4, step[2] * 1e-4};
    while (used < max_evals && !f.exhausted()) {
        bool improved = false;
        for (int j = 0; j < 3 && used < max_evals; ++j) {
            for (double dir : {1.0, -1.0}) {
                auto y = x;
                y[j] += dir * step[j];
                ++used;
                const double fy = f(q, y);
                if (fy > fx + 1e-9 * std::max(1.0, fx)) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            bool all_small = true;
            for (int j = 0; j < 3; ++j) {
                step[j] *= 0.5;
                all_small = all_small && step[j] < min_step[j];
            }
            if (all_small) break;
        }
    }
}

// Nelder-Mead maximization in (c0, c1, c2).
void simplex_polish(LifetimeObjective& f, double q, const LifetimeObjective::Point& start,
                    const std::array<double, 3>& scale, int max_evals)
{
    using Point = LifetimeObjective::Point;
    struct Vertex {
        Point x;
        double v;
    };
    int used = 0;
    auto eval = [&](const Point& p) {
        ++used;
        return f(q, p);
    };
    std::array<Vertex, 4> s;
    s[0] = {start, eval(start)};
    for (int j = 0; j < 3; ++j) {
        Point p = start;
        p[j] += scale[j];
        s[j + 1] = {p, eval(p)};
    }
    auto lerp = [](const Point& a, const Point& b, double t) {
        return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
    };
    while (used < max_evals && !f.exhausted()) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
        Point centroid{0.0, 0.0, 0.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) centroid[j] += s[i].x[j] / 3.0;
        }
        const Point reflected = lerp(centroid, s[3].x, -1.0);
        const double vr = eval(reflected);
        if (vr > s[0].v) {
            const Point expanded = lerp(centroid, s[3].x, -2.0);
            const double ve = eval(expanded);
            s[3] = ve > vr ? Vertex{expanded, ve} : Vertex{reflected, vr};
        } else if (vr > s[2].v) {
            s[3] = {reflected, vr};
        } else {
            const Point contracted = lerp(centroid, s[3].x, 0.5);
            const double vc = eval(contracted);
            if (vc > s[3].v) {
                s[3] = {contracted, vc};
            } else {
                for (int i = 1; i < 4; ++i) {
                    s[i].x = lerp(s[0].x, s[i].x, 0.5);
                    s[i].v = eval(s[i].x);
                }
            }
        }
    }
}

}  // namespace

CompensationPlan optimize_lifetime(const AtomSystem& atom, const EnsembleConfig& ensemble,
                                   const FieldProfile& residual, const BeamConfig& beam_template,
                                   const Support& support, const OptimizerOptions& options,
                                   const CompensatorOptions& opts, OptimizerTrace* trace)
{
    if (options.budget < 50) throw DomainError("optimizer budget must be at least 50 evaluations");
    beam_template.validate();
    ensemble.validate(atom);
    LifetimeObjective objective(atom, ensemble, residual, beam_template, support, options, opts,
                                trace);

    using Point = LifetimeObjective::Point;
    const double q0 = sign_of(beam_template.polarization == 0.0 ? 1.0 : beam_template.polarization);
    objective(q0, Point{0.0, 0.0, 0.0});

    // Analytic seed on the polynomial part of the residual.
    FieldProfile poly_part = residual;
    poly_part.residual = {};
    double seed_q = q0;
    Point seed{0.0, 0.0, 0.0};
    try {
        const auto p = solve_profile(atom, poly_part, beam_template, support, opts);
        seed_q = sign_of(p.beam.polarization);
        seed = {p.intensity.c0, p.intensity.c1, p.intensity.c2};
        objective(seed_q, seed);
    } catch (const InfeasibleError&) {
    }

    const double half = 0.5 * (support.z_max - support.z_min);
    const double level = std::max({std::abs(seed[0]), std::abs(seed[1]) * half,
                                    std::abs(seed[2]) * half * half, 1.0});
    const std::array<double, 3> scale{0.25 * level, 0.25 * level / half, 0.25 * level / (half * half)};

    const int descent_budget = options.budget * 2 / 5;
    coordinate_descent(objective, objective.best_q(), objective.best_point(), objective.best_value(),
                       scale, descent_budget);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const int restart_budget = options.budget / (5 * std::max(1, options.restarts));
    for (int r = 0; r < options.restarts && !objective.exhausted(); ++r) {
        const double q = (r % 2 == 0) ? objective.best_q() : -objective.best_q();
        Point start = objective.best_point();
        for (int j = 0; j < 3; ++j) start[j] += scale[j] * jitter(rng);
        start[0] = std::max(start[0], 0.0);
        const double v = objective(q, start);
        if (std::isfinite(v)) {
            std::array<double, 3> step{scale[0] * 0.5, scale[1] * 0.5, scale[2] * 0.5};
            coordinate_descent(objective, q, start, v, step, restart_budget);
        }
    }

    std::array<double, 3> polish_scale{scale[0] * 0.05, scale[1] * 0.05, scale[2] * 0.05};
    simplex_polish(objective, objective.best_q(), objective.best_point(), polish_scale,
                   std::numeric_limits<int>::max());

    const Point& c = objective.best_point();
    CompensationPlan plan;
    plan.beam = beam_template.with_polarization(objective.best_q());
    plan.beam.intensity = c[0];
    plan.intensity = {c[0], c[1], c[2]};
    plan.support = support;
    plan.residual_after = compose(residual, plan_field(atom, plan, opts.q_storage));
    plan.predicted_lifetime = objective.best_value();
    return plan;
}

CompensationPlan schedule_temporal(const AtomSystem& atom, const FieldTimeSeries& b0_series,
                                   int n_levels, const BeamConfig& beam_template,
                                   const CompensatorOptions& opts)
{
    if (n_levels < 1) throw DomainError("temporal schedule needs at least one level");
    if (b0_series.empty()) throw DomainError("temporal schedule needs a non-empty series");
    beam_template.validate();
    const double f1 = per_unit_field(atom, beam_template, opts.q_storage);

    std::vector<double> required;
    for (const auto& s : b0_series.samples()) required.push_back(-s.field.b0);
    const auto [lo_it, hi_it] = std::minmax_element(required.begin(), required.end());
    const double lo = *lo_it, hi = *hi_it;

    std::vector<double> levels;
    if (n_levels == 1 || hi == lo) {
        levels = {n_levels == 1 ? 0.5 * (lo + hi) : lo};
    } else {
        levels = linspace(lo, hi, n_levels);
    }

    CompensationPlan plan = zero_plan(beam_template, FieldProfile{}, {});
    plan.worst_case_residual = levels.size() > 1 ? 0.5 * (levels[1] - levels[0]) : 0.5 * (hi - lo);
    for (std::size_t c = 0; c < required.size(); ++c) {
        const double want = required[c];
        std::size_t best = 0;
        for (std::size_t k = 1; k < levels.size(); ++k) {
            const double dk = std::abs(levels[k] - want), db = std::abs(levels[best] - want);
            if (dk < db || (dk == db && std::abs(levels[k]) < std::abs(levels[best]))) best = k;
        }
        double level = levels[best];
        if (std::abs(level) < opts.zero_threshold) level = 0.0;
        TemporalStep step;
        step.cycle = static_cast<int>(b0_series.samples()[c].key);
        step.intensity = std::abs(level) / std::abs(f1);
        step.polarization = level < 0.0 ? -sign_of(f1) : sign_of(f1);
        if (step.intensity > opts.intensity_cap) {
            std::ostringstream os;
            os << "cycle " << step.cycle << " needs " << step.intensity
               << " mW/mm^2, above the cap of " << opts.intensity_cap;
            throw FieldOutOfRange(os.str());
        }
        step.field = step.polarization * f1 * step.intensity;
        step.residual = b0_series.samples()[c].field.b0 + step.field;
        plan.temporal_schedule.push_back(step);
    }
    plan.beam.polarization = plan.temporal_schedule.front().polarization;
    plan.beam.intensity = plan.temporal_schedule.front().intensity;
    return plan;
}

std::vector<double> schedule_fields(const CompensationPlan& plan)
{
    std::vector<double> out;
    out.reserve(plan.temporal_schedule.size());
    for (const auto& s : plan.temporal_schedule) out.push_back(s.field);
    return out;
}

}  // namespace starkmem
