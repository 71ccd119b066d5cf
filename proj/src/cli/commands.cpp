#include "cli/commands.hpp"

#include "cli/config.hpp"
#include "starkmem/atomic_data.hpp"
#include "starkmem/compensator.hpp"
#include "starkmem/errors.hpp"
#include "starkmem/fields.hpp"
#include "starkmem/memory_sim.hpp"
#include "starkmem/slm.hpp"
#include "starkmem/stark.hpp"
#include "starkmem/table_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace starkmem::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<long long> seed;
    std::optional<int> threads;
    std::string field_path;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

Range parse_range(const std::string& text, const std::string& flag)
{
    std::stringstream ss(text);
    std::string a, b, c;
    Range r;
    double n = 0.0;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) ||
        !parse_number(a, r.lo) || !parse_number(b, r.hi) || !parse_number(c, n) || n < 1 ||
        n != std::floor(n)) {
        throw ConfigError(flag + " expects LO:HI:N, got '" + text + "'");
    }
    r.n = static_cast<int>(n);
    return r;
}

// Everything a subcommand needs, resolved once from the config.
class Scenario {
public:
    Scenario(Config cfg, const GlobalFlags& flags, std::ostream& out)
        : cfg_(std::move(cfg)), out_(out), dir_(flags.out_dir), field_path_(flags.field_path)
    {
        if (flags.seed) cfg_.set("run", "seed", std::to_string(*flags.seed), "--seed");
        if (flags.threads) cfg_.set("run", "threads", std::to_string(*flags.threads), "--threads");
    }

    Config& config() { return cfg_; }
    const AtomSystem& atom()
    {
        if (!atom_) {
            cfg_.choice("atom", "species", {"rb85"});
            atom_ = load_rb85();
        }
        return *atom_;
    }

    BeamConfig beam()
    {
        BeamConfig b;
        b.detuning = units::ghz_to_rad_per_us(cfg_.number("beam", "detuning_GHz"));
        b.intensity = cfg_.number("beam", "intensity_mW_per_mm2");
        b.polarization = cfg_.number("beam", "polarization_q");
        b.k_dot_b = cfg_.number("beam", "k_dot_b");
        b.zeta_dot_b_sq = cfg_.number("beam", "zeta_dot_b_sq");
        b.calibration = cfg_.number("beam", "calibration");
        b.validate();
        return b;
    }

    FieldProfile field()
    {
        if (!field_path_.empty()) {
            std::ifstream is(field_path_);
            if (!is) throw ConfigError("cannot open field file " + field_path_);
            return read_field_text(is);
        }
        FieldProfile f = FieldProfile::polynomial_field(cfg_.number("field", "b0_mG"),
                                                        cfg_.number("field", "b1_mG_per_cm"),
                                                        cfg_.number("field", "b2_mG_per_cm2"));
        const auto& residual = cfg_.text("field", "residual_csv");
        if (!residual.empty()) f.residual = read_profile_csv(residual, "z_cm", "B_mG");
        return f;
    }

    EnsembleConfig ensemble()
    {
        const auto& a = atom();
        GaussianDensity density{cfg_.number("ensemble", "density_center_cm"),
                                cfg_.number("ensemble", "density_sigma_cm")};
        Envelope env;
        const auto kind = cfg_.choice("ensemble", "envelope", {"gaussian", "exponential", "none"});
        if (kind == "gaussian") env = Envelope::gaussian(cfg_.number("ensemble", "envelope_time_us"));
        if (kind == "exponential") env = Envelope::exponential(cfg_.number("ensemble", "envelope_rate_per_us"));
        if (kind == "none") env = Envelope::none();

        EnsembleConfig e;
        if (cfg_.choice("ensemble", "scheme", {"eit", "raman"}) == "eit") {
            e = EnsembleConfig::eit(a, density, env);
            e.q_storage = cfg_.integer("ensemble", "q_storage");
            const auto pops = cfg_.numbers("ensemble", "populations");
            if (!pops.empty()) e.populations = pops;
        } else {
            e = EnsembleConfig::raman(cfg_.integer("ensemble", "raman_m_f"), density, env);
            e.q_storage = cfg_.integer("ensemble", "q_storage");
        }
        e.extra_decay_rate = cfg_.number("ensemble", "extra_decay_rate_per_us");
        e.validate(a);
        return e;
    }

    QuadratureOptions quadrature()
    {
        QuadratureOptions q;
        q.half_width_sigmas = cfg_.number("run", "quadrature_sigmas");
        if (!(q.half_width_sigmas > 0.0)) throw ConfigError("[run] quadrature_sigmas must be positive");
        return q;
    }

    LifetimeSearch search()
    {
        LifetimeSearch s;
        s.t_max = cfg_.number("run", "lifetime_t_max_us");
        s.step = cfg_.number("run", "lifetime_step_us");
        return s;
    }

    std::vector<double> time_grid()
    {
        return uniform_grid(cfg_.number("run", "t_max_us"), cfg_.number("run", "t_step_us"));
    }

    std::uint64_t seed()
    {
        const double s = cfg_.number("run", "seed");
        if (s < 0 || s != std::floor(s)) throw ConfigError("[run] seed must be a non-negative integer");
        return static_cast<std::uint64_t>(s);
    }

    unsigned threads()
    {
        const int t = cfg_.integer("run", "threads");
        if (t < 0) throw ConfigError("[run] threads must be >= 0");
        return static_cast<unsigned>(t);
    }

    fs::path output(const std::string& name)
    {
        fs::create_directories(dir_);
        return dir_ / name;
    }

    void write_json(const std::string& name, json body)
    {
        json doc;
        doc["config"] = cfg_.resolved();
        for (auto& [k, v] : body.items()) doc[k] = v;
        const auto path = output(name);
        std::ofstream os(path);
        os << doc.dump(2) << '\n';
        if (!os) throw FormatError("failed writing " + path.string());
    }

    std::ostream& out() { return out_; }

private:
    Config cfg_;
    std::ostream& out_;
    fs::path dir_;
    std::string field_path_;
    std::optional<AtomSystem> atom_;
};

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string lifetime_text(double v)
{
    return std::isfinite(v) ? format_number(v) + " us" : "not reached";
}

json field_json(const FieldProfile& f)
{
    return {{"b0_mG", f.b0}, {"b1_mG_per_cm", f.b1}, {"b2_mG_per_cm2", f.b2},
            {"has_residual_table", f.has_residual()}};
}

void write_curve(Scenario& s, const std::string& name, const DecayCurve& c)
{
    CsvTable t;
    t.header = {"t_us", "eta"};
    for (std::size_t i = 0; i < c.t.size(); ++i) t.rows.push_back({c.t[i], c.eta[i]});
    write_csv_file(s.output(name), t);
}

int cmd_shift(Scenario& s, const std::string& sweep)
{
    const auto& atom = s.atom();
    const auto beam = s.beam();
    const int q_storage = s.config().integer("ensemble", "q_storage");

    CsvTable t;
    t.header = {"F", "m_F", "scalar_kHz", "vector_kHz", "tensor_kHz", "total_kHz"};
    for (const auto& manifold : atom.ground_manifolds()) {
        for (int m : manifold.sublevels()) {
            const auto sh = stark_shift(atom, manifold.f, m, beam);
            t.rows.push_back({double(manifold.f), double(m), units::rad_per_us_to_khz(sh.scalar),
                              units::rad_per_us_to_khz(sh.vector), units::rad_per_us_to_khz(sh.tensor),
                              units::rad_per_us_to_khz(sh.total())});
        }
    }
    const auto shift_path = s.output("shift.csv");
    write_csv_file(shift_path, t);

    const double field = beam.intensity == 0.0 ? 0.0 : fictitious_field(atom, beam, q_storage);
    json pairs = json::array();
    if (beam.intensity != 0.0) {
        for (const auto& p : fictitious_field_pairs(atom, beam, q_storage)) {
            pairs.push_back({{"m_F", p.m_f}, {"m_F_prime", p.m_f_prime}, {"field_mG", p.field}});
        }
    }
    s.write_json("shift.json", {{"fictitious_field_mG", field}, {"pairs", pairs}});

    std::string extra;
    Range r;
    bool do_sweep = false;
    if (!sweep.empty()) {
        r = parse_range(sweep, "--sweep-intensity");
        do_sweep = true;
    } else if (s.config().integer("sweep", "intensity_points") > 0) {
        r = {s.config().number("sweep", "intensity_min_mW_per_mm2"),
             s.config().number("sweep", "intensity_max_mW_per_mm2"),
             s.config().integer("sweep", "intensity_points")};
        do_sweep = true;
    }
    if (do_sweep) {
        CsvTable st;
        st.header = {"intensity_mW_per_mm2", "B_fict_mG"};
        for (double i : linspace(r.lo, r.hi, r.n)) {
            st.rows.push_back({i, i == 0.0 ? 0.0 : fictitious_field(atom, beam.with_intensity(i), q_storage)});
        }
        const auto p = s.output("shift_sweep.csv");
        write_csv_file(p, st);
        extra = ", sweep " + p.string();
    }
    s.out() << "shift: fictitious field " << format_number(field) << " mG at "
            << format_number(beam.intensity) << " mW/mm^2; wrote " << shift_path.string() << extra
            << '\n';
    return kOk;
}

int cmd_curve(Scenario& s, std::optional<double> t_max, std::optional<double> t_step)
{
    if (t_max) s.config().set("run", "t_max_us", format_number(*t_max), "--t-max");
    if (t_step) s.config().set("run", "t_step_us", format_number(*t_step), "--t-step");
    const auto c = decay_curve(s.atom(), s.ensemble(), s.field(), s.time_grid(), s.quadrature());
    write_curve(s, "curve.csv", c);
    s.write_json("curve.json", {{"lifetime_us", number_or_null(c.lifetime_1e)}});
    s.out() << "curve: lifetime " << lifetime_text(c.lifetime_1e) << "; wrote "
            << s.output("curve.csv").string() << '\n';
    return kOk;
}

int cmd_lifetime(Scenario& s)
{
    const auto ens = s.ensemble();
    const auto field = s.field();
    const double life = find_lifetime(s.atom(), ens, field, s.search(), s.quadrature());
    const double envelope = find_lifetime(s.atom(), ens, FieldProfile{}, s.search(), s.quadrature());
    s.write_json("lifetime.json", {{"field", field_json(field)},
                                   {"lifetime_us", life},
                                   {"zero_field_lifetime_us", envelope}});
    s.out() << "lifetime: " << format_number(life) << " us (zero field " << format_number(envelope)
            << " us); wrote " << s.output("lifetime.json").string() << '\n';
    return kOk;
}

int cmd_heatmap(Scenario& s, const std::string& b1, const std::string& b2)
{
    auto& c = s.config();
    const Range r1 = b1.empty() ? Range{c.number("sweep", "b1_min_mG_per_cm"), c.number("sweep", "b1_max_mG_per_cm"),
                                        c.integer("sweep", "b1_points")}
                                : parse_range(b1, "--b1");
    const Range r2 = b2.empty() ? Range{c.number("sweep", "b2_min_mG_per_cm2"), c.number("sweep", "b2_max_mG_per_cm2"),
                                        c.integer("sweep", "b2_points")}
                                : parse_range(b2, "--b2");
    const auto h = lifetime_heatmap(s.atom(), s.ensemble(), linspace(r1.lo, r1.hi, r1.n),
                                    linspace(r2.lo, r2.hi, r2.n), s.threads(), s.search(), s.quadrature());
    CsvTable t;
    t.header = {"b1_mG_per_cm", "b2_mG_per_cm2", "tau_norm"};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < h.b1.size(); ++i) {
        for (std::size_t j = 0; j < h.b2.size(); ++j) {
            t.rows.push_back({h.b1[i], h.b2[j], h.tau_norm[i][j]});
            if (h.tau_norm[i][j] > h.tau_norm[bi][bj]) bi = i, bj = j;
        }
    }
    const auto p = s.output("heatmap.csv");
    write_csv_file(p, t);
    s.write_json("heatmap.json", {{"tau_reference_us", h.tau_reference},
                                  {"peak", {{"b1_mG_per_cm", h.b1[bi]}, {"b2_mG_per_cm2", h.b2[bj]}}}});
    s.out() << "heatmap: " << h.b1.size() << "x" << h.b2.size() << " grid, tau(B=0) "
            << format_number(h.tau_reference) << " us, peak at (" << format_number(h.b1[bi]) << ", "
            << format_number(h.b2[bj]) << "); wrote " << p.string() << '\n';
    return kOk;
}

CompensatorOptions compensator_options(Scenario& s)
{
    CompensatorOptions o;
    o.intensity_cap = s.config().number("compensate", "intensity_cap_mW_per_mm2");
    o.q_storage = s.config().integer("ensemble", "q_storage");
    return o;
}

FluctuationSpec fluctuation(Scenario& s)
{
    FluctuationSpec f;
    f.range = s.config().number("montecarlo", "delta_b_mG");
    f.levels = s.config().integer("montecarlo", "levels");
    f.cycles = s.config().integer("montecarlo", "cycles");
    f.seed = s.seed();
    return f;
}

void write_schedule(Scenario& s, const CompensationPlan& plan)
{
    CsvTable t;
    t.header = {"cycle", "intensity_mW_per_mm2", "polarization_q", "field_mG", "residual_mG"};
    for (const auto& st : plan.temporal_schedule) {
        t.rows.push_back({double(st.cycle), st.intensity, st.polarization, st.field, st.residual});
    }
    write_csv_file(s.output("schedule.csv"), t);
}

int cmd_montecarlo(Scenario& s, std::optional<double> delta_b, std::optional<int> cycles,
                   std::optional<int> levels, bool compensate)
{
    auto& c = s.config();
    if (delta_b) c.set("montecarlo", "delta_b_mG", format_number(*delta_b), "--delta-b");
    if (cycles) c.set("montecarlo", "cycles", std::to_string(*cycles), "--cycles");
    if (levels) c.set("montecarlo", "levels", std::to_string(*levels), "--levels");
    if (compensate) c.set("montecarlo", "compensate", "true", "--compensate");
    const bool comp = c.choice("montecarlo", "compensate", {"true", "false"}) == "true";

    const auto& atom = s.atom();
    const auto ens = s.ensemble();
    const auto series = draw_bias_series(s.field(), fluctuation(s));
    MonteCarloResult r;
    json extra = json::object();
    if (comp) {
        const auto plan = schedule_temporal(atom, series, c.integer("montecarlo", "schedule_levels"),
                                            s.beam(), compensator_options(s));
        const auto fields = schedule_fields(plan);
        r = montecarlo_lifetime(atom, ens, series, s.time_grid(), &fields, s.threads(), s.quadrature());
        write_schedule(s, plan);
        extra["worst_case_residual_mG"] = plan.worst_case_residual;
    } else {
        r = montecarlo_lifetime(atom, ens, series, s.time_grid(), nullptr, s.threads(), s.quadrature());
    }
    write_curve(s, "montecarlo.csv", r.mean);
    CsvTable cyc;
    cyc.header = {"cycle", "b0_mG"};
    for (std::size_t i = 0; i < r.cycle_b0.size(); ++i) cyc.rows.push_back({double(i), r.cycle_b0[i]});
    write_csv_file(s.output("montecarlo_cycles.csv"), cyc);
    extra["lifetime_us"] = number_or_null(r.mean.lifetime_1e);
    s.write_json("montecarlo.json", extra);
    s.out() << "montecarlo: averaged lifetime " << lifetime_text(r.mean.lifetime_1e) << " over "
            << r.cycle_b0.size() << " cycles" << (comp ? " with per-cycle compensation" : "")
            << "; wrote " << s.output("montecarlo.csv").string() << '\n';
    return kOk;
}

int cmd_compensate(Scenario& s, const std::string& mode_flag)
{
    auto& c = s.config();
    if (!mode_flag.empty()) c.set("compensate", "mode", mode_flag, "--mode");
    const auto mode = c.choice("compensate", "mode", {"bias", "profile", "optimize", "temporal"});
    const auto& atom = s.atom();
    const auto beam = s.beam();
    const auto residual = s.field();
    const auto opts = compensator_options(s);
    const Support support{c.number("compensate", "support_min_cm"), c.number("compensate", "support_max_cm")};

    CompensationPlan plan;
    if (mode == "bias") {
        plan = solve_bias(atom, residual.b0, beam, opts);
        plan.residual_after = compose(residual, plan_field(atom, plan, opts.q_storage));
        predict(atom, plan, s.ensemble(), residual, s.search(), opts);
    } else if (mode == "profile") {
        plan = solve_profile(atom, residual, beam, support, opts);
        predict(atom, plan, s.ensemble(), residual, s.search(), opts);
    } else if (mode == "optimize") {
        OptimizerOptions o;
        o.budget = c.integer("compensate", "budget");
        o.restarts = c.integer("compensate", "restarts");
        o.seed = s.seed();
        o.search = s.search();
        o.quadrature = s.quadrature();
        plan = optimize_lifetime(atom, s.ensemble(), residual, beam, support, o, opts);
    } else {
        const auto series = draw_bias_series(residual, fluctuation(s));
        plan = schedule_temporal(atom, series, c.integer("montecarlo", "schedule_levels"), beam, opts);
        write_schedule(s, plan);
    }

    json p;
    p["mode"] = mode;
    p["polarization_q"] = plan.beam.polarization;
    p["intensity"] = {{"c0_mW_per_mm2", plan.intensity.c0},
                      {"c1_mW_per_mm2_per_cm", plan.intensity.c1},
                      {"c2_mW_per_mm2_per_cm2", plan.intensity.c2}};
    p["support_cm"] = {plan.support.z_min, plan.support.z_max};
    p["worst_case_residual_mG"] = plan.worst_case_residual;
    p["predicted_lifetime_us"] = plan.predicted_lifetime ? json(*plan.predicted_lifetime) : json(nullptr);
    p["residual_before"] = field_json(residual);
    p["residual_after"] = field_json(plan.residual_after);
    p["temporal_steps"] = plan.temporal_schedule.size();
    s.write_json("plan.json", {{"plan", p}});

    const auto after = s.output("field_after.txt");
    {
        std::ofstream os(after);
        write_field_text(os, plan.residual_after);
        if (!os) throw FormatError("failed writing " + after.string());
    }
    s.out() << "compensate (" << mode << "): q = " << format_number(plan.beam.polarization)
            << ", I(z) = " << format_number(plan.intensity.c0) << " + " << format_number(plan.intensity.c1)
            << " z + " << format_number(plan.intensity.c2) << " z^2 mW/mm^2";
    if (plan.predicted_lifetime) s.out() << ", predicted lifetime " << format_number(*plan.predicted_lifetime) << " us";
    s.out() << "; wrote " << s.output("plan.json").string() << " and " << after.string() << '\n';
    return kOk;
}

int cmd_mask(Scenario& s, const std::string& target_flag)
{
    auto& c = s.config();
    if (!target_flag.empty()) c.set("mask", "target", target_flag, "--target");
    const SlmGrid grid{c.integer("mask", "samples"), c.number("mask", "pitch_mm")};
    if (grid.samples < 2 || !(grid.pitch > 0.0)) throw ConfigError("[mask] needs samples >= 2 and pitch_mm > 0");
    const double waist = c.number("mask", "waist_mm") > 0.0 ? c.number("mask", "waist_mm") : grid.extent() / 10.0;
    const auto incident = gaussian_incident(grid, waist);
    double half = c.number("mask", "support_half_width_mm");
    if (!(half > 0.0)) half = waist / 2.0;

    const auto kind = c.choice("mask", "target", {"linear", "quadratic", "csv"});
    const double lo = c.number("mask", "target_low"), hi = c.number("mask", "target_high");
    SlmProfile target{grid, std::vector<double>(grid.samples)};
    if (kind == "csv") {
        const auto& path = c.text("mask", "target_csv");
        if (path.empty()) throw ConfigError("[mask] target = csv needs target_csv");
        target = read_profile_table(path);
        if (!(target.grid == grid)) throw GridMismatch("target_csv is not on the [mask] grid");
    } else {
        for (int i = 0; i < grid.samples; ++i) {
            const double u = std::clamp(grid.z(i) / half, -1.0, 1.0);
            target.intensity[i] = kind == "linear" ? lo + (hi - lo) * 0.5 * (u + 1.0) : lo + (hi - lo) * u * u;
        }
    }
    MaskSynthesisOptions o;
    o.iterations = c.integer("mask", "iterations");
    o.target_error = c.number("mask", "target_error");
    o.period_px = c.number("mask", "period_px");
    o.support_min = -half;
    o.support_max = half;
    const auto r = synthesize_mask(target, incident, o);
    const auto output = simulate_farfield(r.mask, incident);

    write_mask_csv(s.output("mask.csv"), r.mask);
    write_mask_pgm(s.output("mask.pgm"), r.mask, c.integer("mask", "pgm_rows"));
    CsvTable t;
    t.header = {"z_prime_mm", "incident", "target", "output"};
    for (int i = 0; i < grid.samples; ++i) {
        t.rows.push_back({grid.z(i), incident.intensity[i], target.intensity[i], output.intensity[i]});
    }
    write_csv_file(s.output("mask_output.csv"), t);
    s.write_json("mask.json", {{"rms_error", r.error}, {"error_trace", r.error_trace}});
    s.out() << "mask: " << kind << " target, RMS error " << format_number(r.error) << " after "
            << r.error_trace.size() - 1 << " corrections; wrote " << s.output("mask.csv").string()
            << " and " << s.output("mask.pgm").string() << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"AC-Stark fictitious fields and quantum-memory lifetimes", "starkmem"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--config", g.config_path, "scenario file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "random seed (overrides [run] seed)");
    app.add_option("--threads", g.threads, "worker threads, 0 = auto");
    app.add_option("--field", g.field_path, "field file replacing the [field] section")->check(CLI::ExistingFile);

    auto* shift = app.add_subcommand("shift", "per-sublevel AC Stark shifts and the fictitious field");
    std::string sweep;
    shift->add_option("--sweep-intensity", sweep, "LO:HI:N intensity sweep in mW/mm^2");

    auto* curve = app.add_subcommand("curve", "retrieval efficiency versus storage time");
    std::optional<double> t_max, t_step;
    curve->add_option("--t-max", t_max, "end time, us");
    curve->add_option("--t-step", t_step, "spacing, us");

    auto* lifetime = app.add_subcommand("lifetime", "1/e storage lifetime");

    auto* heatmap = app.add_subcommand("heatmap", "normalized lifetime over gradient and curvature");
    std::string b1, b2;
    heatmap->add_option("--b1", b1, "LO:HI:N gradient sweep, mG/cm");
    heatmap->add_option("--b2", b2, "LO:HI:N curvature sweep, mG/cm^2");

    auto* mc = app.add_subcommand("montecarlo", "cycle-averaged decay under a fluctuating bias");
    std::optional<double> delta_b;
    std::optional<int> cycles, levels;
    bool compensate = false;
    mc->add_option("--delta-b", delta_b, "peak-to-peak fluctuation, mG");
    mc->add_option("--cycles", cycles, "storage cycles");
    mc->add_option("--levels", levels, "fluctuation levels");
    mc->add_flag("--compensate", compensate, "apply the per-cycle AC beam");

    auto* comp = app.add_subcommand("compensate", "AC-beam compensation plan");
    std::string mode;
    comp->add_option("--mode", mode, "bias, profile, optimize or temporal");

    auto* mask = app.add_subcommand("mask", "SLM phase mask for a shaped AC beam");
    std::string target;
    mask->add_option("--target", target, "linear, quadratic or csv");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        Config cfg = g.config_path.empty() ? Config{} : Config::load(g.config_path);
        Scenario s(std::move(cfg), g, out);
        if (shift->parsed()) return cmd_shift(s, sweep);
        if (curve->parsed()) return cmd_curve(s, t_max, t_step);
        if (lifetime->parsed()) return cmd_lifetime(s);
        if (heatmap->parsed()) return cmd_heatmap(s, b1, b2);
        if (mc->parsed()) return cmd_montecarlo(s, delta_b, cycles, levels, compensate);
        if (comp->parsed()) return cmd_compensate(s, mode);
        if (mask->parsed()) return cmd_mask(s, target);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const PhysicsError& e) {
        err << "physics error: " << e.what() << '\n';
        return kPhysicsError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kConfigError;
}

}  // namespace starkmem::cli
