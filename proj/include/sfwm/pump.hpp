#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

struct CwPump {
    double lambda_um = 0.0;
    double power_W = 0.0;

    double omega() const { return omega_from_lambda_um(lambda_um); }

    void validate() const {
        if (!(lambda_um > 0.0)) throw config_error("cw pump: wavelength must be > 0");
        if (!(power_W > 0.0)) throw config_error("cw pump: power must be > 0");
    }
};

/// Transform-limited Gaussian pulse A(t) = A0 exp(-t^2 / 2 tau^2); the
/// intensity full-width-half-maximum is 2 tau sqrt(ln 2).
struct GaussianPulsePump {
    double lambda0_um = 0.0;      // central wavelength
    double energy_J = 0.0;
    double tau_s = 0.0;           // characteristic width
    int components = 129;         // odd, so the grid is symmetric about omega0
    double span_over_tau = 8.0;   // full spectral span in units of 1/tau

    double omega0() const { return omega_from_lambda_um(lambda0_um); }
    double delta_omega() const {
        return components > 1 ? span_over_tau / tau_s / (components - 1) : 0.0;
    }

    void validate() const {
        if (!(lambda0_um > 0.0)) throw config_error("pulse pump: wavelength must be > 0");
        if (!(energy_J > 0.0)) throw config_error("pulse pump: energy must be > 0");
        if (!(tau_s > 0.0)) throw config_error("pulse pump: tau must be > 0");
        if (components < 1 || components % 2 == 0)
            throw config_error("pulse pump: component count must be odd and >= 1");
        if (!(span_over_tau > 0.0)) throw config_error("pulse pump: span must be > 0");
    }

    /// Intensity-area product I_p(omega) * S_p of a monochromatic component,
    /// in W: E tau dOmega^2 / (2 pi sqrt(pi)) * exp(-tau^2 (omega - omega0)^2).
    /// Dividing by the local pump mode area gives the component intensity.
    double flux_at(double omega_rad_s) const {
        const double d = omega_rad_s - omega0();
        const double dw = delta_omega();
        return energy_J * tau_s * dw * dw / (two_pi * std::sqrt(pi)) *
               std::exp(-tau_s * tau_s * d * d);
    }
};

using PumpSource = std::variant<CwPump, GaussianPulsePump>;

/// One monochromatic wave of the decomposed pulse.
struct PumpComponent {
    double omega_rad_s = 0.0;
    double flux_W = 0.0;  // intensity * area; divide by S_p (m^2) for W/m^2

    double intensity_W_m2(double area_um2) const {
        if (!(area_um2 > 0.0)) throw domain_error("pump component: area must be > 0");
        return flux_W / (area_um2 / um2_per_m2);
    }
};

/// Symmetric spectral grid around omega0 with the closed-form per-component
/// intensity, referenced to pump area S_p (um^2).
inline std::vector<PumpComponent> decompose_pulse(const GaussianPulsePump& pulse,
                                                  double pump_area_um2) {
    pulse.validate();
    if (!(pump_area_um2 > 0.0)) throw domain_error("decompose_pulse: pump area must be > 0");
    std::vector<PumpComponent> out;
    out.reserve(pulse.components);
    const double w0 = pulse.omega0();
    const double dw = pulse.delta_omega();
    const int half = (pulse.components - 1) / 2;
    for (int j = -half; j <= half; ++j) {
        PumpComponent c;
        c.omega_rad_s = w0 + j * dw;
        c.flux_W = pulse.flux_at(c.omega_rad_s);
        out.push_back(c);
    }
    (void)pump_area_um2;  // kept in the signature: intensities are read per area
    return out;
}

/// SPM-corrected pump propagation constant for a single monochromatic pump:
/// kappa_p = k_p [1 + n2 I_p / (n_p^2 S_p) * integral |F_p|^4].
inline double pump_kappa_cw(double k_p_per_m, double n_p, double n2_m2_W, double I_p_W_m2,
                            double S_p_um2, double self_overlap_um2) {
    if (!(S_p_um2 > 0.0)) throw domain_error("pump_kappa_cw: area must be > 0");
    return k_p_per_m * (1.0 + n2_m2_W * I_p_W_m2 * (self_overlap_um2 / S_p_um2) / (n_p * n_p));
}

/// SPM + cross-XPM corrected constant of pump component u in the presence of
/// component v (factor 2 on the cross term):
/// kappa_u = k_u [1 + n2 (I_u O_uu + 2 I_v O_vu) / (n_u^2 S_u)].
inline double pump_kappa_two(double k_u_per_m, double n_u, double n2_m2_W, double I_u_W_m2,
                             double I_v_W_m2, double S_u_um2, double self_overlap_uu_um2,
                             double cross_overlap_vu_um2) {
    if (!(S_u_um2 > 0.0)) throw domain_error("pump_kappa_two: area must be > 0");
    const double correction =
        n2_m2_W * (I_u_W_m2 * self_overlap_uu_um2 + 2.0 * I_v_W_m2 * cross_overlap_vu_um2) /
        (S_u_um2 * n_u * n_u);
    return k_u_per_m * (1.0 + correction);
}

}  // namespace sfwm
