#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfwm/constants.hpp"
#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/modes.hpp"
#include "sfwm/pump.hpp"
#include "sfwm/transfer_matrix.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm {

// ---------------------------------------------------------------------------
// Coupling coefficients
// ---------------------------------------------------------------------------

/// Signal-idler coupling rate for a monochromatic pump, 1/m:
/// gamma = (2 n2 I_p / c) sqrt(omega_s omega_i / (n_s n_i S_s S_i)) O_fwm.
/// Symmetric under signal <-> idler exchange, including in floating point.
inline double gamma_cw(double omega_s, double omega_i, double n_s, double n_i, double S_s_um2,
                       double S_i_um2, double O_fwm_um2, double n2_m2_W, double I_p_W_m2) {
    const double ratio = std::sqrt((omega_s * omega_i) / ((n_s * n_i) * (S_s_um2 * S_i_um2)));
    return 2.0 * n2_m2_W * I_p_W_m2 / speed_of_light * ratio * O_fwm_um2;
}

/// Coupling rate contributed by a nondegenerate pump pair (omega_p1, omega_p2):
/// gamma = (4 n2 sqrt(I_p1 I_p2) / c) sqrt(omega_s omega_i / (n_s n_i S_s S_i)) O_fwm.
/// A degenerate pair carries half this prefactor, i.e. exactly gamma_cw.
inline double gamma_pulsed(double omega_s, double omega_i, double n_s, double n_i, double S_s_um2,
                           double S_i_um2, double O_fwm_um2, double n2_m2_W, double I_p1_W_m2,
                           double I_p2_W_m2) {
    const double ratio = std::sqrt((omega_s * omega_i) / ((n_s * n_i) * (S_s_um2 * S_i_um2)));
    return 4.0 * n2_m2_W * std::sqrt(I_p1_W_m2 * I_p2_W_m2) / speed_of_light * ratio * O_fwm_um2;
}

/// XPM-corrected signal/idler propagation constant under one pump:
/// kappa_q = k_q [1 + 4 n2 I_p O_pq / (n_q^2 S_q)].
inline double kappa_mode_cw(double k_q_per_m, double n_q, double n2_m2_W, double I_p_W_m2,
                            double S_q_um2, double O_pq_um2) {
    return k_q_per_m * (1.0 + 4.0 * n2_m2_W * I_p_W_m2 * (O_pq_um2 / S_q_um2) / (n_q * n_q));
}

/// XPM-corrected constant under a pump component pair.
inline double kappa_mode_two(double k_q_per_m, double n_q, double n2_m2_W, double I_1_W_m2,
                             double I_2_W_m2, double S_q_um2, double O_1q_um2, double O_2q_um2) {
    return k_q_per_m *
           (1.0 + 4.0 * n2_m2_W * (I_1_W_m2 * O_1q_um2 + I_2_W_m2 * O_2q_um2) /
                      (S_q_um2 * n_q * n_q));
}

/// Signed phase mismatch for a monochromatic pump: 2 kappa_p - kappa_s - kappa_i.
inline double delta_kappa_cw(double kappa_p, double kappa_s, double kappa_i) {
    return 2.0 * kappa_p - (kappa_s + kappa_i);
}

/// Signed phase mismatch for a pump pair: kappa_p1 + kappa_p2 - kappa_s - kappa_i.
inline double delta_kappa_pulsed(double kappa_p1, double kappa_p2, double kappa_s,
                                 double kappa_i) {
    return (kappa_p1 + kappa_p2) - (kappa_s + kappa_i);
}

/// Energy-conservation guard for an explicit pump pair.
inline void validate_pump_pair(double omega_s, double omega_i, double omega_p1, double omega_p2,
                               double rel_tol = 1e-9) {
    const double target = omega_s + omega_i;
    if (std::abs((omega_p1 + omega_p2) - target) > rel_tol * target)
        throw std::logic_error("pump pair violates omega_p1 + omega_p2 = omega_s + omega_i");
}

// ---------------------------------------------------------------------------
// Element transfer matrices
// ---------------------------------------------------------------------------

/// Accumulated phase mismatch at each element boundary (midpoint rule):
/// phi[0] = 0, phi[m+1] = phi[m] + dkappa[m] dz.
inline std::vector<double> accumulated_phase(std::span<const double> dkappa_per_element,
                                             double dz_m) {
    std::vector<double> phi(dkappa_per_element.size() + 1);
    phi[0] = 0.0;
    for (std::size_t m = 0; m < dkappa_per_element.size(); ++m)
        phi[m + 1] = phi[m] + dkappa_per_element[m] * dz_m;
    return phi;
}

/// f = j gamma dz exp(j dphi)
inline std::complex<double> element_coupling(double gamma, double dphi, double dz_m) {
    return std::complex<double>(0.0, gamma * dz_m) * std::polar(1.0, dphi);
}

inline TransferMatrix element_matrix_from_coupling(std::complex<double> f) {
    TransferMatrix t;
    t.t12 = f;
    t.t21 = std::conj(f);
    return t;
}

inline TransferMatrix element_matrix_cw(double gamma, double dphi, double dz_m) {
    return element_matrix_from_coupling(element_coupling(gamma, dphi, dz_m));
}

/// Off-diagonal summed over pump pairs, each with its own accumulated phase.
inline TransferMatrix element_matrix_pulsed(std::span<const double> gammas,
                                            std::span<const double> dphis, double dz_m) {
    if (gammas.size() != dphis.size())
        throw std::logic_error("element_matrix_pulsed: gamma/phase length mismatch");
    std::complex<double> f{0.0, 0.0};
    for (std::size_t k = 0; k < gammas.size(); ++k)
        f += element_coupling(gammas[k], dphis[k], dz_m);
    return element_matrix_from_coupling(f);
}

// ---------------------------------------------------------------------------
// Whole-structure propagation
// ---------------------------------------------------------------------------

/// Per-element coupling data for the product engine. Element m reads slot
/// m % slots, so periodic structures store one period of coefficients.
/// `pairs` is 1 for a CW pump and the pump-grid size for a pulsed pump.
struct ChannelTables {
    double dz_m = 0.0;
    std::size_t element_count = 0;
    std::size_t slots = 0;
    std::size_t pairs = 1;
    std::vector<double> gamma;   // [slot * pairs + k], 1/m
    std::vector<double> dkappa;  // [slot * pairs + k], 1/m

    void validate() const {
        if (!(dz_m > 0.0)) throw config_error("channel tables: dz must be > 0");
        if (element_count == 0 || slots == 0 || pairs == 0)
            throw config_error("channel tables: empty");
        if (gamma.size() != slots * pairs || dkappa.size() != slots * pairs)
            throw config_error("channel tables: coefficient size mismatch");
    }
};

struct PropagateOptions {
    double coupling_warn_threshold = 0.1;  // |f| above this degrades the first-order element
    double overflow_limit = 1e12;          // |T11| beyond this aborts as unphysical
    bool collect_trace = false;            // record |T12|^2 at every element boundary
};

struct PropagationResult {
    TransferMatrix matrix;
    double max_abs_coupling = 0.0;
    bool coupling_warning = false;
    std::vector<double> trace;  // photon number at z = 0, dz, ..., L (if requested)

    double photon_number() const { return matrix.photon_number(); }
};

/// Descending-order product of element matrices T = T_M ... T_2 T_1.
/// Per-pair phases advance by exp(j dkappa dz) between elements; the phase
/// entering each element coupling is sampled at the element midpoint, where
/// the geometry-dependent coefficients are sampled too.
inline PropagationResult propagate(const ChannelTables& tables,
                                   const PropagateOptions& options = {}) {
    tables.validate();
    const std::size_t pairs = tables.pairs;
    const double dz = tables.dz_m;

    std::vector<std::complex<double>> half_phasor(tables.slots * pairs);
    std::vector<std::complex<double>> step_phasor(tables.slots * pairs);
    for (std::size_t g = 0; g < tables.slots; ++g)
        for (std::size_t k = 0; k < pairs; ++k) {
            half_phasor[g * pairs + k] = std::polar(1.0, 0.5 * tables.dkappa[g * pairs + k] * dz);
            step_phasor[g * pairs + k] = std::polar(1.0, tables.dkappa[g * pairs + k] * dz);
        }

    PropagationResult result;
    if (options.collect_trace) {
        result.trace.reserve(tables.element_count + 1);
        result.trace.push_back(0.0);
    }
    std::vector<std::complex<double>> phase(pairs, {1.0, 0.0});
    TransferMatrix total;
    for (std::size_t m = 0; m < tables.element_count; ++m) {
        const std::size_t g = m % tables.slots;
        std::complex<double> f{0.0, 0.0};
        for (std::size_t k = 0; k < pairs; ++k)
            f += std::complex<double>(0.0, tables.gamma[g * pairs + k] * dz) * phase[k] *
                 half_phasor[g * pairs + k];
        const double abs_f = std::abs(f);
        if (abs_f > result.max_abs_coupling) result.max_abs_coupling = abs_f;
        total = element_matrix_from_coupling(f) * total;
        if (std::abs(total.t11) > options.overflow_limit)
            throw numeric_error("propagate: |T(1,1)| exceeded " +
                                std::to_string(options.overflow_limit) +
                                " at element " + std::to_string(m) + " (unphysical gain)");
        for (std::size_t k = 0; k < pairs; ++k) phase[k] *= step_phasor[g * pairs + k];
        if ((m & 1023u) == 1023u)
            for (auto& p : phase) p /= std::abs(p);  // keep phasors on the unit circle
        if (options.collect_trace) result.trace.push_back(total.photon_number());
    }
    result.coupling_warning = result.max_abs_coupling >= options.coupling_warn_threshold;
    result.matrix = total;
    return result;
}

// ---------------------------------------------------------------------------
// Physical coupling contexts
// ---------------------------------------------------------------------------

/// Read-only description of the nonlinear medium shared by all contexts.
struct MediumSpec {
    const DispersionProvider* provider = nullptr;
    double n2_m2_W = 0.0;
    std::optional<double> fixed_mode_radius_um;

    void validate() const {
        if (provider == nullptr) throw config_error("medium: dispersion provider missing");
        if (!(n2_m2_W >= 0.0)) throw config_error("medium: n2 must be >= 0");
        if (fixed_mode_radius_um && !(*fixed_mode_radius_um > 0.0))
            throw config_error("medium: fixed mode radius must be > 0");
    }
};

inline GaussianMode make_mode(const MediumSpec& medium, double lambda_um, double g_um) {
    GaussianMode mode;
    mode.lambda_um = lambda_um;
    mode.n_eff = medium.provider->effective_index(lambda_um, g_um);
    if (medium.fixed_mode_radius_um) {
        mode.radius_um = *medium.fixed_mode_radius_um;
    } else if (auto area = medium.provider->mode_area_um2(lambda_um, g_um)) {
        mode.radius_um = std::sqrt(2.0 * *area / pi);
    } else {
        throw config_error("medium: no mode-size source (provider lacks an area column and no "
                           "fixed mode radius is configured)");
    }
    return mode;
}

struct PairCoefficients {
    double gamma = 0.0;   // engine weight, 1/m
    double dkappa = 0.0;  // 1/m
};

/// Coefficients of a monochromatic-pump SFWM channel at one cross-section.
inline PairCoefficients cw_coefficients(const MediumSpec& medium, const CwPump& pump,
                                        double omega_s, double omega_i, double g_um) {
    const GaussianMode p = make_mode(medium, pump.lambda_um, g_um);
    const GaussianMode s = make_mode(medium, lambda_um_from_omega(omega_s), g_um);
    const GaussianMode i = make_mode(medium, lambda_um_from_omega(omega_i), g_um);
    const double S_p = mode_area_um2(p), S_s = mode_area_um2(s), S_i = mode_area_um2(i);
    const double I_p = pump.power_W / (S_p / um2_per_m2);
    const double k_p = p.n_eff * pump.omega() / speed_of_light;
    const double k_s = s.n_eff * omega_s / speed_of_light;
    const double k_i = i.n_eff * omega_i / speed_of_light;

    const double kappa_p = pump_kappa_cw(k_p, p.n_eff, medium.n2_m2_W, I_p, S_p,
                                         overlap_xpm_um2(p, p));
    const double kappa_s = kappa_mode_cw(k_s, s.n_eff, medium.n2_m2_W, I_p, S_s,
                                         overlap_xpm_um2(p, s));
    const double kappa_i = kappa_mode_cw(k_i, i.n_eff, medium.n2_m2_W, I_p, S_i,
                                         overlap_xpm_um2(p, i));
    PairCoefficients out;
    out.gamma = gamma_cw(omega_s, omega_i, s.n_eff, i.n_eff, S_s, S_i,
                         overlap_fwm_um2(p, p, s, i), medium.n2_m2_W, I_p);
    out.dkappa = delta_kappa_cw(kappa_p, kappa_s, kappa_i);
    return out;
}

/// Coefficients contributed by the ordered pump pair (omega_p1, omega_p2) at
/// one cross-section. The engine enumerates ordered pairs over the full pump
/// grid, so each term carries half the nondegenerate closed-form prefactor;
/// at omega_p1 == omega_p2 this weight equals the monochromatic one exactly.
inline PairCoefficients pulsed_pair_coefficients(const MediumSpec& medium,
                                                 const GaussianPulsePump& pulse, double omega_p1,
                                                 double omega_p2, double omega_s, double omega_i,
                                                 double g_um) {
    validate_pump_pair(omega_s, omega_i, omega_p1, omega_p2);
    const GaussianMode p1 = make_mode(medium, lambda_um_from_omega(omega_p1), g_um);
    const GaussianMode p2 = make_mode(medium, lambda_um_from_omega(omega_p2), g_um);
    const GaussianMode s = make_mode(medium, lambda_um_from_omega(omega_s), g_um);
    const GaussianMode i = make_mode(medium, lambda_um_from_omega(omega_i), g_um);
    const double S_1 = mode_area_um2(p1), S_2 = mode_area_um2(p2);
    const double S_s = mode_area_um2(s), S_i = mode_area_um2(i);
    const double I_1 = pulse.flux_at(omega_p1) / (S_1 / um2_per_m2);
    const double I_2 = pulse.flux_at(omega_p2) / (S_2 / um2_per_m2);
    const double k_1 = p1.n_eff * omega_p1 / speed_of_light;
    const double k_2 = p2.n_eff * omega_p2 / speed_of_light;
    const double k_s = s.n_eff * omega_s / speed_of_light;
    const double k_i = i.n_eff * omega_i / speed_of_light;

    const double kappa_1 = pump_kappa_two(k_1, p1.n_eff, medium.n2_m2_W, I_1, I_2, S_1,
                                          overlap_xpm_um2(p1, p1), overlap_xpm_um2(p2, p1));
    const double kappa_2 = pump_kappa_two(k_2, p2.n_eff, medium.n2_m2_W, I_2, I_1, S_2,
                                          overlap_xpm_um2(p2, p2), overlap_xpm_um2(p1, p2));
    const double kappa_s = kappa_mode_two(k_s, s.n_eff, medium.n2_m2_W, I_1, I_2, S_s,
                                          overlap_xpm_um2(p1, s), overlap_xpm_um2(p2, s));
    const double kappa_i = kappa_mode_two(k_i, i.n_eff, medium.n2_m2_W, I_1, I_2, S_i,
                                          overlap_xpm_um2(p1, i), overlap_xpm_um2(p2, i));
    PairCoefficients out;
    out.gamma = 0.5 * gamma_pulsed(omega_s, omega_i, s.n_eff, i.n_eff, S_s, S_i,
                                   overlap_fwm_um2(p1, p2, s, i), medium.n2_m2_W, I_1, I_2);
    out.dkappa = delta_kappa_pulsed(kappa_1, kappa_2, kappa_s, kappa_i);
    return out;
}

/// Continuous coefficient evaluation for the ODE oracle.
using ChannelField = std::function<void(double z_m, std::span<double> gamma,
                                        std::span<double> dkappa)>;

/// Signal-idler channel of a CW-pumped tapered structure.
class CwContext {
public:
    CwContext(MediumSpec medium, TaperProfile profile, CwPump pump, double omega_s)
        : medium_(medium), profile_(profile), pump_(pump), omega_s_(omega_s) {
        medium_.validate();
        profile_.validate();
        pump_.validate();
        omega_i_ = 2.0 * pump_.omega() - omega_s_;
        if (!(omega_s_ > 0.0) || !(omega_i_ > 0.0))
            throw domain_error("cw context: signal/idler frequency must be positive");

        const auto geoms = period_geometry(profile_);
        tables_.dz_m = profile_.period_m / profile_.steps_per_period;
        tables_.element_count =
            static_cast<std::size_t>(profile_.periods) * profile_.steps_per_period;
        tables_.slots = geoms.size();
        tables_.pairs = 1;
        tables_.gamma.resize(geoms.size());
        tables_.dkappa.resize(geoms.size());
        for (std::size_t g = 0; g < geoms.size(); ++g) {
            const PairCoefficients c = cw_coefficients(medium_, pump_, omega_s_, omega_i_, geoms[g]);
            tables_.gamma[g] = c.gamma;
            tables_.dkappa[g] = c.dkappa;
        }
    }

    const ChannelTables& tables() const { return tables_; }
    double omega_s() const { return omega_s_; }
    double omega_i() const { return omega_i_; }
    double length_m() const { return profile_.length_m(); }
    std::size_t pairs() const { return 1; }

    ChannelField field() const {
        return [this](double z, std::span<double> gamma, std::span<double> dkappa) {
            // integrators may touch the endpoints a rounding step outside [0, L]
            const double zc = std::clamp(z, 0.0, profile_.length_m());
            const PairCoefficients c =
                cw_coefficients(medium_, pump_, omega_s_, omega_i_, geometry_at(profile_, zc));
            gamma[0] = c.gamma;
            dkappa[0] = c.dkappa;
        };
    }

private:
    MediumSpec medium_;
    TaperProfile profile_;
    CwPump pump_;
    double omega_s_;
    double omega_i_ = 0.0;
    ChannelTables tables_;
};

/// All pump-pair channels feeding one (signal, idler) mode pair of a pulsed
/// pump. Ordered pairs (omega_p1 on the grid, omega_p2 = omega_s + omega_i -
/// omega_p1) are enumerated over the full grid; pairs whose spectral weight
/// is negligible are dropped before any dispersion lookup.
class PulsedContext {
public:
    static constexpr double kNegligibleExponent = 120.0;  // exp(-120) ~ 8e-53

    PulsedContext(MediumSpec medium, TaperProfile profile, GaussianPulsePump pulse,
                  double omega_s, double omega_i)
        : medium_(medium), profile_(profile), pulse_(pulse), omega_s_(omega_s),
          omega_i_(omega_i) {
        medium_.validate();
        profile_.validate();
        pulse_.validate();
        if (!(omega_s_ > 0.0) || !(omega_i_ > 0.0))
            throw domain_error("pulsed context: signal/idler frequency must be positive");

        const double omega_sum = omega_s_ + omega_i_;
        const double w0 = pulse_.omega0();
        const double dw = pulse_.delta_omega();
        const int half = (pulse_.components - 1) / 2;
        const double tau2 = pulse_.tau_s * pulse_.tau_s;
        for (int j = -half; j <= half; ++j) {
            const double p1 = w0 + j * dw;
            const double p2 = omega_sum - p1;
            if (!(p2 > 0.0)) continue;
            const double d1 = p1 - w0, d2 = p2 - w0;
            if (tau2 * (d1 * d1 + d2 * d2) > 2.0 * kNegligibleExponent) continue;
            pair_p1_.push_back(p1);
            pair_p2_.push_back(p2);
        }
        if (pair_p1_.empty())
            throw domain_error("pulsed context: no pump pair reaches this (signal, idler) point");

        const auto geoms = period_geometry(profile_);
        tables_.dz_m = profile_.period_m / profile_.steps_per_period;
        tables_.element_count =
            static_cast<std::size_t>(profile_.periods) * profile_.steps_per_period;
        tables_.slots = geoms.size();
        tables_.pairs = pair_p1_.size();
        tables_.gamma.resize(tables_.slots * tables_.pairs);
        tables_.dkappa.resize(tables_.slots * tables_.pairs);
        for (std::size_t g = 0; g < geoms.size(); ++g)
            for (std::size_t k = 0; k < pair_p1_.size(); ++k) {
                const PairCoefficients c = pulsed_pair_coefficients(
                    medium_, pulse_, pair_p1_[k], pair_p2_[k], omega_s_, omega_i_, geoms[g]);
                tables_.gamma[g * tables_.pairs + k] = c.gamma;
                tables_.dkappa[g * tables_.pairs + k] = c.dkappa;
            }
    }

    const ChannelTables& tables() const { return tables_; }
    double omega_s() const { return omega_s_; }
    double omega_i() const { return omega_i_; }
    double length_m() const { return profile_.length_m(); }
    std::size_t pairs() const { return pair_p1_.size(); }

    ChannelField field() const {
        return [this](double z, std::span<double> gamma, std::span<double> dkappa) {
            const double g_um = geometry_at(profile_, std::clamp(z, 0.0, profile_.length_m()));
            for (std::size_t k = 0; k < pair_p1_.size(); ++k) {
                const PairCoefficients c = pulsed_pair_coefficients(
                    medium_, pulse_, pair_p1_[k], pair_p2_[k], omega_s_, omega_i_, g_um);
                gamma[k] = c.gamma;
                dkappa[k] = c.dkappa;
            }
        };
    }

private:
    MediumSpec medium_;
    TaperProfile profile_;
    GaussianPulsePump pulse_;
    double omega_s_;
    double omega_i_;
    std::vector<double> pair_p1_, pair_p2_;
    ChannelTables tables_;
};

}  // namespace sfwm
