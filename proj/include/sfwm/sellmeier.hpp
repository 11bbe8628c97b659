#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfwm/errors.hpp"

namespace sfwm {

/// Sellmeier expansion n^2(lambda) = 1 + sum_k B_k lambda^2 / (lambda^2 - C_k),
/// lambda in um, C_k in um^2. Valid only inside [range_lo_um, range_hi_um].
struct SellmeierModel {
    std::string material;
    std::vector<double> B;       // dimensionless
    std::vector<double> C_um2;   // um^2, all > 0
    double range_lo_um = 0.0;
    double range_hi_um = 0.0;

    void validate() const {
        if (B.size() != C_um2.size())
            throw config_error("sellmeier: B and C_um2 length mismatch");
        if (B.empty())
            throw config_error("sellmeier: no terms");
        for (double c : C_um2)
            if (!(c > 0.0))
                throw config_error("sellmeier: all C_um2 must be > 0");
        if (!(range_lo_um > 0.0) || !(range_hi_um > range_lo_um))
            throw config_error("sellmeier: invalid wavelength range");
    }

    static SellmeierModel from_json(const nlohmann::json& j) {
        SellmeierModel m;
        m.material = j.value("material", "unknown");
        m.B = j.at("B").get<std::vector<double>>();
        m.C_um2 = j.at("C_um2").get<std::vector<double>>();
        const auto range = j.at("range_um").get<std::vector<double>>();
        if (range.size() != 2) throw config_error("sellmeier: range_um must be [lo, hi]");
        m.range_lo_um = range[0];
        m.range_hi_um = range[1];
        m.validate();
        return m;
    }

    static SellmeierModel load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open sellmeier file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw config_error("sellmeier file " + path + ": " + e.what());
        }
        return from_json(j);
    }
};

/// Bulk refractive index at a wavelength inside the model's valid range.
inline double material_index(const SellmeierModel& model, double lambda_um) {
    if (!(lambda_um >= model.range_lo_um && lambda_um <= model.range_hi_um))
        throw domain_error("sellmeier: wavelength " + std::to_string(lambda_um) +
                           " um outside valid range [" + std::to_string(model.range_lo_um) +
                           ", " + std::to_string(model.range_hi_um) + "]");
    const double l2 = lambda_um * lambda_um;
    double n2 = 1.0;
    for (std::size_t k = 0; k < model.B.size(); ++k) {
        const double denom = l2 - model.C_um2[k];
        if (std::abs(denom) < 1e-12 * l2)
            throw domain_error("sellmeier: wavelength at resonance C_k");
        n2 += model.B[k] * l2 / denom;
    }
    if (!(n2 >= 1.0 - 1e-12))
        throw domain_error("sellmeier: n^2 < 1 at lambda = " + std::to_string(lambda_um));
    return std::sqrt(n2);
}

}  // namespace sfwm
