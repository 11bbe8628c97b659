#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sfwm/constants.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/sellmeier.hpp"

namespace sfwm {

/// Empirical effective-index description of a solid-core hexagonal-lattice
/// holey fibre, ingested from a coefficient file.
///
/// The normalized frequency V and decay parameter W of an equivalent
/// step-index fibre with core radius a = r_core_over_pitch * pitch are fitted
/// as rational functions of u = lambda/pitch with coefficients that depend on
/// the relative hole size x = d/pitch:
///
///   V(u) = A1 + A2 / (1 + A3 exp(A4 u)),   Ai = ai0 + ai1 x^bi1 + ai2 x^bi2 + ai3 x^bi3
///   W(u) = B1 + B2 / (1 + B3 exp(B4 u)),   Bi analogous
///
/// from which, with k = 2 pi / lambda and n_co the cladding-glass index,
///   n_fsm^2 = n_co^2 - (V / (k a))^2      (space-filling-mode cladding index)
///   n_eff^2 = n_fsm^2 + (W / (k a))^2
///
/// The fundamental-mode Gaussian radius uses a step-index fit in V:
///   w = a (m0 + m1 V^e1 + m2 V^e2)
struct PcfCoefficients {
    struct FitRow {
        double a0, a1, a2, a3;  // additive coefficients
        double e1, e2, e3;      // exponents on d/pitch
        double eval(double x) const {
            return a0 + a1 * std::pow(x, e1) + a2 * std::pow(x, e2) + a3 * std::pow(x, e3);
        }
    };

    std::array<FitRow, 4> v_rows;
    std::array<FitRow, 4> w_rows;
    double core_radius_over_pitch = 0.0;
    std::array<double, 3> mode_radius_fit{};        // m0, m1, m2
    std::array<double, 2> mode_radius_exponents{};  // e1, e2
    double hole_ratio_lo = 0.0, hole_ratio_hi = 0.0;
    double norm_lambda_lo = 0.0, norm_lambda_hi = 0.0;

    static PcfCoefficients from_json(const nlohmann::json& j) {
        PcfCoefficients c;
        const auto read_rows = [](const nlohmann::json& block) {
            std::array<FitRow, 4> rows;
            const auto a0 = block.at("a0").get<std::vector<double>>();
            const auto a1 = block.at("a1").get<std::vector<double>>();
            const auto a2 = block.at("a2").get<std::vector<double>>();
            const auto a3 = block.at("a3").get<std::vector<double>>();
            const auto e1 = block.at("e1").get<std::vector<double>>();
            const auto e2 = block.at("e2").get<std::vector<double>>();
            const auto e3 = block.at("e3").get<std::vector<double>>();
            for (const auto* v : {&a0, &a1, &a2, &a3, &e1, &e2, &e3})
                if (v->size() != 4) throw config_error("pcf coefficients: each row needs 4 entries");
            for (int i = 0; i < 4; ++i)
                rows[i] = {a0[i], a1[i], a2[i], a3[i], e1[i], e2[i], e3[i]};
            return rows;
        };
        c.v_rows = read_rows(j.at("V"));
        c.w_rows = read_rows(j.at("W"));
        c.core_radius_over_pitch = j.at("core_radius_over_pitch").get<double>();
        const auto mf = j.at("mode_radius_fit").get<std::vector<double>>();
        const auto me = j.at("mode_radius_exponents").get<std::vector<double>>();
        if (mf.size() != 3 || me.size() != 2)
            throw config_error("pcf coefficients: mode_radius_fit needs 3 terms, exponents 2");
        c.mode_radius_fit = {mf[0], mf[1], mf[2]};
        c.mode_radius_exponents = {me[0], me[1]};
        const auto hr = j.at("hole_ratio_range").get<std::vector<double>>();
        const auto nl = j.at("normalized_wavelength_range").get<std::vector<double>>();
        if (hr.size() != 2 || nl.size() != 2)
            throw config_error("pcf coefficients: ranges must be [lo, hi]");
        c.hole_ratio_lo = hr[0];
        c.hole_ratio_hi = hr[1];
        c.norm_lambda_lo = nl[0];
        c.norm_lambda_hi = nl[1];
        if (!(c.core_radius_over_pitch > 0.0))
            throw config_error("pcf coefficients: core_radius_over_pitch must be > 0");
        return c;
    }

    static PcfCoefficients load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open pcf coefficient file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw config_error("pcf coefficient file " + path + ": " + e.what());
        }
        return from_json(j);
    }
};

/// Analytic fibre provider: geometry parameter is the lattice pitch (um).
class PcfFibreModel final : public DispersionProvider {
public:
    PcfFibreModel(PcfCoefficients coefficients, SellmeierModel cladding_glass,
                  double hole_diameter_over_pitch)
        : coef_(std::move(coefficients)),
          glass_(std::move(cladding_glass)),
          hole_ratio_(hole_diameter_over_pitch) {
        glass_.validate();
        if (!(hole_ratio_ >= coef_.hole_ratio_lo && hole_ratio_ <= coef_.hole_ratio_hi))
            throw config_error("pcf model: d/pitch = " + std::to_string(hole_ratio_) +
                               " outside fitted range");
        for (int i = 0; i < 4; ++i) {
            v_coef_[i] = coef_.v_rows[i].eval(hole_ratio_);
            w_coef_[i] = coef_.w_rows[i].eval(hole_ratio_);
        }
    }

    double v_parameter(double lambda_um, double pitch_um) const {
        require_in_domain(lambda_um, pitch_um);
        const double u = lambda_um / pitch_um;
        return v_coef_[0] + v_coef_[1] / (1.0 + v_coef_[2] * std::exp(v_coef_[3] * u));
    }

    double w_parameter(double lambda_um, double pitch_um) const {
        require_in_domain(lambda_um, pitch_um);
        const double u = lambda_um / pitch_um;
        return w_coef_[0] + w_coef_[1] / (1.0 + w_coef_[2] * std::exp(w_coef_[3] * u));
    }

    double effective_index(double lambda_um, double pitch_um) const override {
        require_in_domain(lambda_um, pitch_um);
        const double a = coef_.core_radius_over_pitch * pitch_um;
        const double inv_ka = lambda_um / (two_pi * a);
        const double n_co = material_index(glass_, lambda_um);
        const double v = v_parameter(lambda_um, pitch_um);
        const double w = w_parameter(lambda_um, pitch_um);
        const double n_fsm2 = n_co * n_co - (v * inv_ka) * (v * inv_ka);
        if (!(n_fsm2 > 0.0))
            throw domain_error("pcf model: cladding index undefined at lambda/pitch = " +
                               std::to_string(lambda_um / pitch_um));
        const double n_eff2 = n_fsm2 + (w * inv_ka) * (w * inv_ka);
        const double n_eff = std::sqrt(n_eff2);
        if (!(n_eff >= 1.0))
            throw domain_error("pcf model: n_eff < 1, outside fit validity");
        return n_eff;
    }

    double mode_radius_um(double lambda_um, double pitch_um) const {
        const double a = coef_.core_radius_over_pitch * pitch_um;
        const double v = v_parameter(lambda_um, pitch_um);
        if (!(v > 0.0)) throw domain_error("pcf model: V <= 0, mode radius undefined");
        const double w = a * (coef_.mode_radius_fit[0] +
                              coef_.mode_radius_fit[1] * std::pow(v, coef_.mode_radius_exponents[0]) +
                              coef_.mode_radius_fit[2] * std::pow(v, coef_.mode_radius_exponents[1]));
        if (!(w > 0.0)) throw domain_error("pcf model: nonpositive mode radius");
        return w;
    }

    std::optional<double> mode_area_um2(double lambda_um, double pitch_um) const override {
        const double w = mode_radius_um(lambda_um, pitch_um);
        return 0.5 * pi * w * w;  // unit-peak Gaussian convention
    }

    DomainBox domain() const override {
        // Conservative box; the binding constraint is the lambda/pitch ratio
        // checked in in_domain().
        return {glass_.range_lo_um, glass_.range_hi_um, 0.05, 50.0};
    }

    bool in_domain(double lambda_um, double pitch_um) const override {
        if (!(pitch_um > 0.0)) return false;
        if (lambda_um < glass_.range_lo_um || lambda_um > glass_.range_hi_um) return false;
        const double u = lambda_um / pitch_um;
        return u >= coef_.norm_lambda_lo && u <= coef_.norm_lambda_hi;
    }

    double hole_ratio() const { return hole_ratio_; }

private:
    PcfCoefficients coef_;
    SellmeierModel glass_;
    double hole_ratio_;
    std::array<double, 4> v_coef_{};
    std::array<double, 4> w_coef_{};
};

}  // namespace sfwm
