#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfwm/analysis.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/dispersion_table.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/pcf.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/pump.hpp"
#include "sfwm/sweep.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm {

/// JSON run description with unit-bearing key names. File paths are resolved
/// relative to the config file location. `threads` and `output` steer
/// execution only and are excluded from the configuration hash.
class RunConfig {
public:
    static RunConfig load(const std::filesystem::path& path,
                          const std::vector<std::string>& overrides = {}) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open config: " + path.string());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw config_error("config " + path.string() + ": " + e.what());
        }
        RunConfig cfg;
        cfg.raw_ = std::move(j);
        cfg.base_dir_ = path.has_parent_path() ? path.parent_path() : ".";
        cfg.apply_overrides(overrides);
        return cfg;
    }

    static RunConfig from_json(nlohmann::json j, std::filesystem::path base_dir = ".") {
        RunConfig cfg;
        cfg.raw_ = std::move(j);
        cfg.base_dir_ = std::move(base_dir);
        return cfg;
    }

    const nlohmann::json& raw() const { return raw_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }

    /// Hash of the physics payload; execution-only keys do not contribute.
    std::string hash() const {
        nlohmann::json payload = raw_;
        payload.erase("threads");
        payload.erase("output");
        return config_hash(payload);
    }

    // -- sections -----------------------------------------------------------

    TaperProfile profile() const {
        const auto& w = require_section("waveguide");
        TaperProfile p;
        p.g_av_um = require_number(w, "waveguide", "g_av_um");
        p.delta = require_number(w, "waveguide", "delta");
        p.period_m = require_number(w, "waveguide", "Lambda_T_m");
        p.periods = static_cast<int>(require_number(w, "waveguide", "periods"));
        p.steps_per_period = static_cast<int>(w.value("steps_per_period", 200.0));
        try {
            p.validate();
        } catch (const config_error& e) {
            throw config_error(std::string("waveguide: ") + e.what());
        }
        return p;
    }

    std::unique_ptr<DispersionProvider> make_provider() const {
        const auto& d = require_section("dispersion");
        const std::string kind = require_string(d, "dispersion", "provider");
        if (kind == "pcf_empirical") {
            const auto coef = PcfCoefficients::load(
                resolve(require_string(d, "dispersion", "coefficients_file")));
            const auto glass =
                SellmeierModel::load(resolve(require_string(d, "dispersion", "sellmeier_file")));
            const double ratio = require_number(d, "dispersion", "d_over_pitch");
            return std::make_unique<PcfFibreModel>(coef, glass, ratio);
        }
        if (kind == "table") {
            auto table =
                DispersionTable::load_csv(resolve(require_string(d, "dispersion", "table_file")));
            return std::make_unique<TableProvider>(std::move(table));
        }
        if (kind == "sellmeier_bulk") {
            auto glass =
                SellmeierModel::load(resolve(require_string(d, "dispersion", "sellmeier_file")));
            return std::make_unique<SellmeierProvider>(std::move(glass));
        }
        throw config_error("dispersion.provider must be pcf_empirical | table | sellmeier_bulk");
    }

    MediumSpec medium(const DispersionProvider* provider) const {
        const auto& d = require_section("dispersion");
        MediumSpec m;
        m.provider = provider;
        m.n2_m2_W = require_number(d, "dispersion", "n2_m2_per_W");
        if (!(m.n2_m2_W > 0.0)) throw config_error("dispersion.n2_m2_per_W must be > 0");
        if (d.contains("fixed_mode_radius_um") && !d["fixed_mode_radius_um"].is_null())
            m.fixed_mode_radius_um = d["fixed_mode_radius_um"].get<double>();
        return m;
    }

    bool pump_is_pulse() const {
        return require_string(require_section("pump"), "pump", "kind") == "pulse";
    }

    CwPump cw_pump() const {
        const auto& p = require_section("pump");
        if (require_string(p, "pump", "kind") != "cw")
            throw config_error("this command needs pump.kind = \"cw\"");
        CwPump pump;
        pump.lambda_um = require_number(p, "pump", "lambda_pump_nm") * 1e-3;
        pump.power_W = require_number(p, "pump", "power_W");
        pump.validate();
        return pump;
    }

    /// tau_ps is authoritative; fwhm_ps (intensity FWHM = 2 tau sqrt(ln 2))
    /// is accepted as an alternative way to state the width.
    GaussianPulsePump pulse_pump() const {
        const auto& p = require_section("pump");
        if (require_string(p, "pump", "kind") != "pulse")
            throw config_error("this command needs pump.kind = \"pulse\"");
        GaussianPulsePump pump;
        pump.lambda0_um = require_number(p, "pump", "lambda_pump_nm") * 1e-3;
        pump.energy_J = require_number(p, "pump", "energy_nJ") * 1e-9;
        if (p.contains("tau_ps"))
            pump.tau_s = p["tau_ps"].get<double>() * 1e-12;
        else if (p.contains("fwhm_ps"))
            pump.tau_s = p["fwhm_ps"].get<double>() * 1e-12 / (2.0 * std::sqrt(std::log(2.0)));
        else
            throw config_error("pump: need tau_ps (or fwhm_ps)");
        pump.components = static_cast<int>(p.value("components", 129.0));
        pump.span_over_tau = p.value("span_over_tau", 8.0);
        pump.validate();
        return pump;
    }

    std::vector<double> spectrum_grid_nm() const {
        const auto& g = require_section("grid");
        const double lo = require_number(g, "grid", "signal_min_nm");
        const double hi = require_number(g, "grid", "signal_max_nm");
        const auto points = static_cast<std::size_t>(require_number(g, "grid", "signal_points"));
        if (!(hi > lo) || points < 2) throw config_error("grid: need signal_max_nm > signal_min_nm and >= 2 points");
        return linspace(lo, hi, points);
    }

    double target_signal_nm() const {
        return require_number(require_section("grid"), "grid", "target_signal_nm");
    }

    std::size_t jsa_points() const {
        return static_cast<std::size_t>(require_section("grid").value("jsa_points", 101.0));
    }

    double jsa_bandwidths() const { return require_section("grid").value("jsa_bandwidths", 3.0); }

    bool normalize_spectrum() const {
        if (!raw_.contains("output")) return false;
        return raw_["output"].value("normalize", false);
    }

    int threads() const { return static_cast<int>(raw_.value("threads", 1.0)); }

    std::filesystem::path output_dir() const {
        if (raw_.contains("output") && raw_["output"].contains("directory"))
            return raw_["output"]["directory"].get<std::string>();
        return "out";
    }

    struct MapSpec {
        std::vector<double> deltas;
        std::vector<double> periods_m;
    };

    MapSpec map_spec() const {
        const auto& m = require_section("map");
        MapSpec spec;
        spec.deltas = linspace(require_number(m, "map", "delta_min"),
                               require_number(m, "map", "delta_max"),
                               static_cast<std::size_t>(require_number(m, "map", "delta_points")));
        spec.periods_m =
            linspace(require_number(m, "map", "period_min_m"),
                     require_number(m, "map", "period_max_m"),
                     static_cast<std::size_t>(require_number(m, "map", "period_points")));
        return spec;
    }

    std::vector<SweepAxis> sweep_axes() const {
        const auto& s = require_section("sweep");
        if (!s.contains("axes") || !s["axes"].is_array() || s["axes"].empty())
            throw config_error("sweep: need a non-empty axes array");
        std::vector<SweepAxis> axes;
        for (const auto& a : s["axes"]) {
            SweepAxis axis;
            axis.path = require_string(a, "sweep.axes[]", "path");
            axis.values = a.at("values").get<std::vector<double>>();
            axes.push_back(std::move(axis));
        }
        return axes;
    }

    std::string purity_jsa_file() const {
        if (raw_.contains("purity") && raw_["purity"].contains("jsa_file"))
            return resolve(raw_["purity"]["jsa_file"].get<std::string>());
        return {};
    }

    std::string resolve(const std::string& file) const {
        std::filesystem::path p(file);
        if (p.is_absolute()) return p.string();
        return (base_dir_ / p).string();
    }

private:
    void apply_overrides(const std::vector<std::string>& overrides) {
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw config_error("override must look like section.key=value: " + kv);
            const std::string key = kv.substr(0, eq);
            const std::string value = kv.substr(eq + 1);
            nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
            if (parsed.is_discarded()) parsed = value;  // keep as string
            raw_[json_pointer_from_dotted(key)] = parsed;
        }
    }

    const nlohmann::json& require_section(const std::string& name) const {
        if (!raw_.contains(name) || !raw_[name].is_object())
            throw config_error("config: missing section \"" + name + "\"");
        return raw_[name];
    }

    static double require_number(const nlohmann::json& j, const std::string& section,
                                 const std::string& key) {
        if (!j.contains(key) || !j[key].is_number())
            throw config_error("config: " + section + "." + key + " must be a number");
        return j[key].get<double>();
    }

    static std::string require_string(const nlohmann::json& j, const std::string& section,
                                      const std::string& key) {
        if (!j.contains(key) || !j[key].is_string())
            throw config_error("config: " + section + "." + key + " must be a string");
        return j[key].get<std::string>();
    }

    nlohmann::json raw_;
    std::filesystem::path base_dir_;
};

}  // namespace sfwm
