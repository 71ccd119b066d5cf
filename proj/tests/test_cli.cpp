#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "starkmem/table_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace starkmem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "starkmem");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / "starkmem_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write_config(const fs::path& dir, const std::string& text)
{
    const auto p = dir / "scenario.ini";
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing")
{
    std::istringstream good("# comment\n[beam]\nintensity_mW_per_mm2 = 4.5  # trailing\n\n[field]\nb1_mG_per_cm=2\n");
    const auto c = cli::Config::parse(good, "s.ini");
    CHECK(c.number("beam", "intensity_mW_per_mm2") == 4.5);
    CHECK(c.number("field", "b1_mG_per_cm") == 2.0);
    CHECK(c.number("beam", "detuning_GHz") == 25.6);
    CHECK(c.resolved()["beam"]["intensity_mW_per_mm2"] == 4.5);
    CHECK(c.resolved()["atom"]["species"] == "rb85");

    auto fails = [](const std::string& text) {
        std::istringstream is(text);
        return cli::Config::parse(is, "s.ini");
    };
    CHECK_THROWS_WITH_AS(fails("[beam]\nintensity = 3\n"), doctest::Contains("s.ini:2"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(fails("[bream]\n"), doctest::Contains("unknown section"), cli::ConfigError);
    CHECK_THROWS_AS(fails("intensity_mW_per_mm2 = 3\n"), cli::ConfigError);
    CHECK_THROWS_AS(fails("[beam]\nintensity_mW_per_mm2\n"), cli::ConfigError);
    CHECK_THROWS_WITH_AS(fails("[beam]\nintensity_mW_per_mm2 = 1\nintensity_mW_per_mm2 = 2\n"),
                         doctest::Contains("line 2"), cli::ConfigError);

    std::istringstream bad_number("[beam]\nintensity_mW_per_mm2 = three\n");
    const auto b = cli::Config::parse(bad_number, "s.ini");
    CHECK_THROWS_WITH_AS(b.number("beam", "intensity_mW_per_mm2"), doctest::Contains("s.ini:2"), cli::ConfigError);
}

TEST_CASE("shift command")
{
    const auto dir = scratch("shift");
    const auto cfg = write_config(dir, "[beam]\nintensity_mW_per_mm2 = 0\n");
    auto r = run({"shift", "--config", cfg, "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto t = read_csv_file(dir / "shift.csv");
    CHECK(t.header.front() == "F");
    CHECK(t.rows.size() == 12);
    for (const auto& row : t.rows) {
        for (std::size_t k = 2; k < row.size(); ++k) CHECK(row[k] == 0.0);
    }

    r = run({"shift", "--out", dir.string(), "--sweep-intensity", "0:10:50"});
    REQUIRE(r.code == 0);
    const auto sweep = read_csv_file(dir / "shift_sweep.csv");
    REQUIRE(sweep.rows.size() == 50);
    CHECK(sweep.rows.front()[1] == 0.0);
    const double slope = sweep.rows.back()[1] / sweep.rows.back()[0];
    for (const auto& row : sweep.rows) CHECK(row[1] == doctest::Approx(slope * row[0]).epsilon(1e-8).scale(1e-6));

    const auto json = nlohmann::json::parse(slurp(dir / "shift.json"));
    CHECK(json["config"]["beam"]["detuning_GHz"] == 25.6);
    CHECK(json.contains("fictitious_field_mG"));
}

TEST_CASE("exit codes")
{
    const auto dir = scratch("codes");
    auto r = run({"shift", "--config", write_config(dir, "[beam]\nintensty_mW_per_mm2 = 3\n"), "--out", dir.string()});
    CHECK(r.code == cli::kConfigError);
    CHECK(r.err.find("scenario.ini:2") != std::string::npos);

    r = run({"shift", "--config", write_config(dir, "[beam]\ndetuning_GHz = 0\n"), "--out", dir.string()});
    CHECK(r.code == cli::kPhysicsError);

    r = run({"compensate", "--config",
             write_config(dir, "[field]\nb1_mG_per_cm = 10\nb2_mG_per_cm2 = 10\n[compensate]\nintensity_cap_mW_per_mm2 = 1\n"),
             "--out", dir.string()});
    CHECK(r.code == cli::kInfeasible);

    CHECK(run({"nonsense"}).code == cli::kConfigError);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("outputs are deterministic and Monte-Carlo without fluctuation equals the curve")
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    const auto cfg = write_config(a, "[field]\nb0_mG = 1.2\nb1_mG_per_cm = 2\n[run]\nt_max_us = 150\n");
    REQUIRE(run({"curve", "--config", cfg, "--out", a.string()}).code == 0);
    REQUIRE(run({"curve", "--config", cfg, "--out", b.string()}).code == 0);
    CHECK(slurp(a / "curve.csv") == slurp(b / "curve.csv"));
    CHECK(slurp(a / "curve.json") == slurp(b / "curve.json"));

    REQUIRE(run({"montecarlo", "--config", cfg, "--out", a.string(), "--delta-b", "0"}).code == 0);
    CHECK(slurp(a / "montecarlo.csv") == slurp(a / "curve.csv"));

    REQUIRE(run({"montecarlo", "--config", cfg, "--out", a.string(), "--seed", "9", "--threads", "1"}).code == 0);
    REQUIRE(run({"montecarlo", "--config", cfg, "--out", b.string(), "--seed", "9", "--threads", "3"}).code == 0);
    CHECK(slurp(a / "montecarlo.csv") == slurp(b / "montecarlo.csv"));
    CHECK(slurp(a / "montecarlo_cycles.csv") == slurp(b / "montecarlo_cycles.csv"));
}

TEST_CASE("compensate then lifetime restores the envelope lifetime")
{
    const auto dir = scratch("comp");
    const auto cfg = write_config(dir, "[field]\nb0_mG = 5.8\n");
    auto r = run({"lifetime", "--config", cfg, "--out", dir.string()});
    REQUIRE(r.code == 0);
    const double before = nlohmann::json::parse(slurp(dir / "lifetime.json"))["lifetime_us"];
    CHECK(before < 99.0);

    REQUIRE(run({"compensate", "--config", cfg, "--out", dir.string(), "--mode", "bias"}).code == 0);
    const auto plan = nlohmann::json::parse(slurp(dir / "plan.json"));
    CHECK(plan["plan"]["mode"] == "bias");
    CHECK(plan["config"]["field"]["b0_mG"] == 5.8);

    r = run({"lifetime", "--config", cfg, "--out", dir.string(), "--field", (dir / "field_after.txt").string()});
    REQUIRE(r.code == 0);
    const auto life = nlohmann::json::parse(slurp(dir / "lifetime.json"));
    CHECK(double(life["lifetime_us"]) == doctest::Approx(double(life["zero_field_lifetime_us"])).epsilon(1e-6));
}

TEST_CASE("heatmap, temporal plan and mask commands")
{
    const auto dir = scratch("misc");
    REQUIRE(run({"heatmap", "--out", dir.string(), "--b1=-4:4:3", "--b2=-4:4:3"}).code == 0);
    const auto h = read_csv_file(dir / "heatmap.csv");
    REQUIRE(h.rows.size() == 9);
    CHECK(h.rows[4][2] == doctest::Approx(1.0));
    CHECK(run({"heatmap", "--out", dir.string(), "--b1", "bad"}).code == cli::kConfigError);

    REQUIRE(run({"compensate", "--out", dir.string(), "--mode", "temporal"}).code == 0);
    const auto sched = read_csv_file(dir / "schedule.csv");
    CHECK(sched.rows.size() == 500);
    CHECK(sched.header[2] == "polarization_q");

    REQUIRE(run({"montecarlo", "--out", dir.string(), "--compensate"}).code == 0);
    CHECK(fs::exists(dir / "schedule.csv"));

    const auto r = run({"mask", "--out", dir.string(), "--target", "quadratic"});
    REQUIRE(r.code == 0);
    CHECK(fs::file_size(dir / "mask.pgm") > 1920 * 1080);
    const auto mj = nlohmann::json::parse(slurp(dir / "mask.json"));
    CHECK(double(mj["rms_error"]) < 0.02);
}

TEST_CASE("installed binary")
{
    const auto dir = scratch("binary");
    const std::string cmd = std::string(STARKMEM_CLI_PATH) + " shift --out " + dir.string() + " > " +
                            (dir / "log.txt").string() + " 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir / "log.txt").find("fictitious field") != std::string::npos);
}
