#include "cli/config.hpp"

#include "starkmem/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace starkmem::cli {

const std::vector<ConfigKey>& config_schema()
{
    static const std::vector<ConfigKey> schema = {
        {"atom", "species", "rb85", "atomic species (only rb85 is tabulated)"},

        {"beam", "detuning_GHz", "25.6", "detuning from the F=2 -> F'=3 line"},
        {"beam", "intensity_mW_per_mm2", "3.0", "peak intensity"},
        {"beam", "polarization_q", "1", "+1 sigma+, -1 sigma-, 0 linear"},
        {"beam", "k_dot_b", "1", "projection of the beam axis on the quantization axis"},
        {"beam", "zeta_dot_b_sq", "0", "|zeta . B|^2 for the tensor term"},
        {"beam", "calibration", "1", "scale applied to computed shifts"},

        {"field", "b0_mG", "0", "uniform bias"},
        {"field", "b1_mG_per_cm", "0", "gradient"},
        {"field", "b2_mG_per_cm2", "0", "curvature"},
        {"field", "residual_csv", "", "optional z_cm,B_mG table added to the polynomial"},

        {"ensemble", "scheme", "eit", "eit or raman"},
        {"ensemble", "density_center_cm", "0", "cloud center"},
        {"ensemble", "density_sigma_cm", "0.625", "cloud rms length"},
        {"ensemble", "populations", "", "comma-separated lower-manifold weights m=-F..F; empty = equal"},
        {"ensemble", "q_storage", "1", "m_F' - m_F of the stored coherence"},
        {"ensemble", "raman_m_f", "1", "stored sublevel for the raman scheme"},
        {"ensemble", "envelope", "gaussian", "gaussian, exponential or none"},
        {"ensemble", "envelope_time_us", "100", "gaussian exp(-t^2/T^2) time constant"},
        {"ensemble", "envelope_rate_per_us", "0", "exponential envelope rate"},
        {"ensemble", "extra_decay_rate_per_us", "0", "additional exponential loss"},

        {"run", "t_max_us", "200", "decay-curve end time"},
        {"run", "t_step_us", "1", "decay-curve spacing"},
        {"run", "lifetime_t_max_us", "0", "lifetime scan horizon; 0 derives it from the envelope"},
        {"run", "lifetime_step_us", "0", "lifetime scan step; 0 derives it from the envelope"},
        {"run", "quadrature_sigmas", "8", "density integration half-width"},
        {"run", "seed", "1", "random seed"},
        {"run", "threads", "1", "worker threads, 0 = auto"},

        {"sweep", "intensity_min_mW_per_mm2", "0", "shift sweep start"},
        {"sweep", "intensity_max_mW_per_mm2", "5", "shift sweep end"},
        {"sweep", "intensity_points", "0", "shift sweep samples; 0 disables the sweep"},
        {"sweep", "b1_min_mG_per_cm", "-10", "heatmap gradient start"},
        {"sweep", "b1_max_mG_per_cm", "10", "heatmap gradient end"},
        {"sweep", "b1_points", "21", "heatmap gradient samples"},
        {"sweep", "b2_min_mG_per_cm2", "-10", "heatmap curvature start"},
        {"sweep", "b2_max_mG_per_cm2", "10", "heatmap curvature end"},
        {"sweep", "b2_points", "21", "heatmap curvature samples"},

        {"montecarlo", "delta_b_mG", "6.8", "peak-to-peak bias fluctuation"},
        {"montecarlo", "levels", "13", "discrete fluctuation levels"},
        {"montecarlo", "cycles", "500", "storage cycles"},
        {"montecarlo", "compensate", "false", "apply the quantized per-cycle AC beam"},
        {"montecarlo", "schedule_levels", "13", "intensity levels of the per-cycle beam"},

        {"compensate", "mode", "profile", "bias, profile, optimize or temporal"},
        {"compensate", "intensity_cap_mW_per_mm2", "50", "largest allowed beam intensity"},
        {"compensate", "support_min_cm", "-1.25", "beam support start"},
        {"compensate", "support_max_cm", "1.25", "beam support end"},
        {"compensate", "budget", "400", "optimizer lifetime evaluations"},
        {"compensate", "restarts", "3", "optimizer restarts"},

        {"mask", "samples", "1920", "SLM columns"},
        {"mask", "pitch_mm", "0.008", "SLM pixel pitch"},
        {"mask", "period_px", "16", "grating period"},
        {"mask", "waist_mm", "0", "incident 1/e^2 radius; 0 = one tenth of the mask width"},
        {"mask", "target", "linear", "linear, quadratic or csv"},
        {"mask", "target_csv", "", "z_prime_mm,intensity table when target = csv"},
        {"mask", "support_half_width_mm", "0", "enforced region; 0 = half the waist"},
        {"mask", "target_low", "0.1", "target minimum, fraction of the incident peak"},
        {"mask", "target_high", "0.55", "target maximum, fraction of the incident peak"},
        {"mask", "iterations", "30", "correction iterations"},
        {"mask", "target_error", "0.01", "stop once the RMS error is below this"},
        {"mask", "pgm_rows", "1080", "rows of the exported image"},
    };
    return schema;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool known_section(const std::string& section)
{
    const auto& s = config_schema();
    return std::any_of(s.begin(), s.end(), [&](const ConfigKey& k) { return k.section == section; });
}

std::string known_keys(const std::string& section)
{
    std::string out;
    for (const auto& k : config_schema()) {
        if (k.section != section) continue;
        if (!out.empty()) out += ", ";
        out += k.key;
    }
    return out;
}

}  // namespace

Config::Config()
{
    for (const auto& k : config_schema()) values_[{k.section, k.key}] = {k.default_value, "default"};
}

Config Config::parse(std::istream& is, const std::string& source)
{
    Config c;
    std::string line, section;
    std::map<std::pair<std::string, std::string>, int> seen;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const std::string where = source + ":" + std::to_string(number);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        if (section.empty()) throw ConfigError(where + ": key outside of any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!c.values_.count({section, key})) {
            throw ConfigError(where + ": unknown key '" + key + "' in [" + section +
                              "]; known keys: " + known_keys(section));
        }
        if (auto it = seen.find({section, key}); it != seen.end()) {
            throw ConfigError(where + ": '" + key + "' already set on line " + std::to_string(it->second));
        }
        seen[{section, key}] = number;
        c.values_[{section, key}] = {value, where};
    }
    return c;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    return parse(is, path.string());
}

void Config::set(const std::string& section, const std::string& key, const std::string& value,
                 const std::string& origin)
{
    auto it = values_.find({section, key});
    if (it == values_.end()) throw ConfigError("unknown key [" + section + "] " + key);
    it->second = {value, origin};
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const
{
    auto it = values_.find({section, key});
    if (it == values_.end()) throw ConfigError("internal: undeclared key [" + section + "] " + key);
    return it->second;
}

void Config::bad_value(const std::string& section, const std::string& key, const std::string& why) const
{
    const auto& e = entry(section, key);
    throw ConfigError(e.origin + ": [" + section + "] " + key + " = '" + e.value + "': " + why);
}

const std::string& Config::text(const std::string& section, const std::string& key) const
{
    return entry(section, key).value;
}

double Config::number(const std::string& section, const std::string& key) const
{
    double v = 0.0;
    if (!parse_number(text(section, key), v) || !std::isfinite(v)) bad_value(section, key, "not a number");
    return v;
}

int Config::integer(const std::string& section, const std::string& key) const
{
    const double v = number(section, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) bad_value(section, key, "not an integer");
    return static_cast<int>(v);
}

std::string Config::choice(const std::string& section, const std::string& key,
                           const std::vector<std::string>& allowed) const
{
    const std::string v = lower(text(section, key));
    if (std::find(allowed.begin(), allowed.end(), v) != allowed.end()) return v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    bad_value(section, key, "expected one of " + list);
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const
{
    std::vector<double> out;
    std::stringstream ss(text(section, key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_number(trim(item), v)) bad_value(section, key, "not a comma-separated list of numbers");
        out.push_back(v);
    }
    return out;
}

nlohmann::ordered_json Config::resolved() const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& k : config_schema()) {
        const std::string& v = text(k.section, k.key);
        double num = 0.0;
        if (parse_number(v, num) && std::isfinite(num)) {
            j[k.section][k.key] = num;
        } else {
            j[k.section][k.key] = v;
        }
    }
    return j;
}

}  // namespace starkmem::cli
