#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "sfwm/config.hpp"
#include "support/synthetic.hpp"

using namespace sfwm;
using Catch::Approx;

namespace {

nlohmann::json base_config() {
    return {
        {"waveguide",
         {{"kind", "fibre"}, {"g_av_um", 1.0}, {"delta", 0.1}, {"Lambda_T_m", 0.045},
          {"periods", 50}, {"steps_per_period", 200}}},
        {"dispersion",
         {{"provider", "pcf_empirical"},
          {"coefficients_file", "pcf_vw_coefficients.json"},
          {"sellmeier_file", "sellmeier_silica.json"},
          {"d_over_pitch", 0.5},
          {"n2_m2_per_W", 2.25e-20}}},
        {"pump", {{"kind", "cw"}, {"lambda_pump_nm", 780.0}, {"power_W", 1.0}}},
        {"grid",
         {{"signal_min_nm", 749.0}, {"signal_max_nm", 751.0}, {"signal_points", 21},
          {"target_signal_nm", 750.0}}},
        {"threads", 2},
        {"output", {{"directory", "out"}, {"normalize", false}}},
    };
}

std::filesystem::path write_config(const nlohmann::json& j) {
    const auto path = std::filesystem::temp_directory_path() / "sfwm_cfg_test.json";
    std::ofstream(path) << j.dump(2);
    return path;
}

}  // namespace

TEST_CASE("config round trip") {
    auto j = base_config();
    const auto cfg = RunConfig::from_json(j, SFWM_DATA_DIR);
    const auto profile = cfg.profile();
    CHECK(profile.g_av_um == 1.0);
    CHECK(profile.periods == 50);
    const auto pump = cfg.cw_pump();
    CHECK(pump.lambda_um == Approx(0.780));
    CHECK(cfg.threads() == 2);
    CHECK(cfg.spectrum_grid_nm().size() == 21);
    const auto provider = cfg.make_provider();
    CHECK(provider->effective_index(0.78, 1.0) > 1.0);
    CHECK(cfg.medium(provider.get()).n2_m2_W == Approx(2.25e-20));
}

TEST_CASE("dotted overrides") {
    const auto path = write_config(base_config());
    const auto cfg = RunConfig::load(path, {"pump.power_W=2", "waveguide.periods=10",
                                            "pump.kind=cw"});
    CHECK(cfg.cw_pump().power_W == 2.0);
    CHECK(cfg.profile().periods == 10);
    CHECK_THROWS_AS(RunConfig::load(path, {"no-equals-sign"}), config_error);
}

TEST_CASE("execution-only keys do not change the config hash") {
    auto a = RunConfig::from_json(base_config());
    auto j = base_config();
    j["threads"] = 8;
    j["output"]["directory"] = "elsewhere";
    auto b = RunConfig::from_json(j);
    CHECK(a.hash() == b.hash());
    auto j2 = base_config();
    j2["pump"]["power_W"] = 3.0;
    CHECK(RunConfig::from_json(j2).hash() != a.hash());
}

TEST_CASE("schema violations carry the offending path") {
    auto no_pump = base_config();
    no_pump.erase("pump");
    CHECK_THROWS_WITH(RunConfig::from_json(no_pump).cw_pump(),
                      Catch::Matchers::ContainsSubstring("pump"));
    auto bad_kind = base_config();
    bad_kind["dispersion"]["provider"] = "magic";
    CHECK_THROWS_AS(RunConfig::from_json(bad_kind, SFWM_DATA_DIR).make_provider(), config_error);
    auto bad_power = base_config();
    bad_power["pump"]["power_W"] = "strong";
    CHECK_THROWS_AS(RunConfig::from_json(bad_power).cw_pump(), config_error);
}

TEST_CASE("pulse width keys") {
    auto j = base_config();
    j["pump"] = {{"kind", "pulse"}, {"lambda_pump_nm", 780.0}, {"energy_nJ", 1.0},
                 {"tau_ps", 2.47}, {"components", 65}};
    CHECK(RunConfig::from_json(j).pulse_pump().tau_s == Approx(2.47e-12));

    j["pump"].erase("tau_ps");
    j["pump"]["fwhm_ps"] = 4.0;
    const double tau = RunConfig::from_json(j).pulse_pump().tau_s;
    CHECK(tau == Approx(4.0e-12 / (2.0 * std::sqrt(std::log(2.0)))));

    // tau is authoritative when both appear
    j["pump"]["tau_ps"] = 2.47;
    CHECK(RunConfig::from_json(j).pulse_pump().tau_s == Approx(2.47e-12));

    j["pump"].erase("tau_ps");
    j["pump"].erase("fwhm_ps");
    CHECK_THROWS_AS(RunConfig::from_json(j).pulse_pump(), config_error);
}

TEST_CASE("missing data files are reported") {
    auto j = base_config();
    j["dispersion"]["coefficients_file"] = "definitely_missing.json";
    CHECK_THROWS_AS(RunConfig::from_json(j, SFWM_DATA_DIR).make_provider(), io_error);
}

TEST_CASE("table provider from config") {
    const auto csv = std::filesystem::temp_directory_path() / "sfwm_cfg_table.csv";
    std::ofstream(csv) << "geometry_um,wavelength_um,n_eff,area_um2\n"
                          "1.0,0.7,1.45,0.9\n"
                          "1.0,0.9,1.44,1.0\n"
                          "2.0,0.7,1.46,1.1\n"
                          "2.0,0.9,1.43,1.2\n";
    auto j = base_config();
    j["dispersion"] = {{"provider", "table"}, {"table_file", csv.string()},
                       {"n2_m2_per_W", 1e-19}};
    const auto cfg = RunConfig::from_json(j);
    const auto provider = cfg.make_provider();
    CHECK(provider->effective_index(0.7, 1.0) == 1.45);
    CHECK(provider->mode_area_um2(0.7, 1.0).value() == 0.9);
}
