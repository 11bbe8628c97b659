#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/ode_oracle.hpp"
#include "sfwm/parallel.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/pump.hpp"
#include "sfwm/waveguide.hpp"

namespace sfwm {

// ---------------------------------------------------------------------------
// 1D photon-number spectrum, CW pump
// ---------------------------------------------------------------------------

struct SpectrumResult {
    std::vector<double> wavelength_nm;
    std::vector<double> photons;               // <N> per spectral mode
    std::vector<double> reference;             // delta = 0 run, if normalization requested

    bool has_reference() const { return !reference.empty(); }

    std::vector<double> enhancement_db() const {
        if (!has_reference()) throw domain_error("spectrum: no normalization reference");
        std::vector<double> db(photons.size());
        for (std::size_t k = 0; k < photons.size(); ++k)
            db[k] = 10.0 * std::log10(photons[k] / reference[k]);
        return db;
    }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points < 2) return {lo};
    std::vector<double> v(points);
    for (std::size_t k = 0; k < points; ++k)
        v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    return v;
}

/// <N> per signal wavelength for a CW pump, idler paired exactly as
/// omega_i = 2 omega_p - omega_s. The grid must not contain the degenerate
/// point omega_s == omega_p. With `normalize` a second run at delta = 0 on
/// the same grid provides the enhancement reference.
inline SpectrumResult spectrum_cw(const MediumSpec& medium, const TaperProfile& profile,
                                  const CwPump& pump, std::vector<double> wavelength_nm,
                                  bool normalize = false, int threads = 1) {
    pump.validate();
    const double omega_p = pump.omega();
    for (double wl : wavelength_nm)
        if (std::abs(omega_from_lambda_nm(wl) - omega_p) < 1e-9 * omega_p)
            throw domain_error("spectrum grid contains the degenerate pump wavelength");
    SpectrumResult result;
    result.wavelength_nm = std::move(wavelength_nm);
    result.photons.assign(result.wavelength_nm.size(), 0.0);
    const auto run = [&](const TaperProfile& p, std::vector<double>& out) {
        parallel_for(result.wavelength_nm.size(), threads, [&](std::size_t k) {
            const double omega_s = omega_from_lambda_nm(result.wavelength_nm[k]);
            CwContext ctx(medium, p, pump, omega_s);
            out[k] = propagate(ctx.tables()).photon_number();
        });
    };
    run(profile, result.photons);
    if (normalize) {
        TaperProfile uniform = profile;
        uniform.delta = 0.0;
        result.reference.assign(result.wavelength_nm.size(), 0.0);
        run(uniform, result.reference);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Joint spectral amplitude, pulsed pump
// ---------------------------------------------------------------------------

struct JointSpectralAmplitude {
    std::vector<double> signal_nm;                 // rows
    std::vector<double> idler_nm;                  // columns
    std::vector<std::complex<double>> values;      // row-major T(1,2)

    const std::complex<double>& at(std::size_t s, std::size_t i) const {
        return values[s * idler_nm.size() + i];
    }

    double intensity(std::size_t s, std::size_t i) const { return std::norm(at(s, i)); }
};

inline JointSpectralAmplitude jsi_pulsed(const MediumSpec& medium, const TaperProfile& profile,
                                         const GaussianPulsePump& pulse,
                                         std::vector<double> signal_nm,
                                         std::vector<double> idler_nm, int threads = 1) {
    pulse.validate();
    JointSpectralAmplitude jsa;
    jsa.signal_nm = std::move(signal_nm);
    jsa.idler_nm = std::move(idler_nm);
    jsa.values.assign(jsa.signal_nm.size() * jsa.idler_nm.size(), {0.0, 0.0});
    const std::size_t cols = jsa.idler_nm.size();
    parallel_for(jsa.values.size(), threads, [&](std::size_t cell) {
        const std::size_t s = cell / cols;
        const std::size_t i = cell % cols;
        const double omega_s = omega_from_lambda_nm(jsa.signal_nm[s]);
        const double omega_i = omega_from_lambda_nm(jsa.idler_nm[i]);
        PulsedContext ctx(medium, profile, pulse, omega_s, omega_i);
        jsa.values[cell] = propagate(ctx.tables()).matrix.t12;
    });
    return jsa;
}

/// Default grids: `points` samples spanning +-`bandwidths` pump spectral
/// widths (1/tau) around the targeted signal wavelength and its
/// energy-conserving idler partner.
struct JsaGrid {
    std::vector<double> signal_nm;
    std::vector<double> idler_nm;
};

inline JsaGrid default_jsa_grid(const GaussianPulsePump& pulse, double target_signal_nm,
                                std::size_t points = 101, double bandwidths = 3.0) {
    pulse.validate();
    const double omega_s0 = omega_from_lambda_nm(target_signal_nm);
    const double omega_i0 = 2.0 * pulse.omega0() - omega_s0;
    if (!(omega_i0 > 0.0)) throw domain_error("jsa grid: idler frequency not positive");
    const double half = bandwidths / pulse.tau_s;
    JsaGrid grid;
    grid.signal_nm.reserve(points);
    grid.idler_nm.reserve(points);
    for (std::size_t k = 0; k < points; ++k) {
        const double t = points > 1 ? static_cast<double>(k) / (points - 1) : 0.5;
        grid.signal_nm.push_back(lambda_nm_from_omega(omega_s0 + half - 2.0 * half * t));
        grid.idler_nm.push_back(lambda_nm_from_omega(omega_i0 + half - 2.0 * half * t));
    }
    std::sort(grid.signal_nm.begin(), grid.signal_nm.end());
    std::sort(grid.idler_nm.begin(), grid.idler_nm.end());
    return grid;
}

// ---------------------------------------------------------------------------
// Schmidt decomposition
// ---------------------------------------------------------------------------

struct SchmidtResult {
    std::vector<double> coefficients;  // normalized lambda_k, descending
    double purity = 0.0;               // sum lambda_k^2
    double schmidt_number = 0.0;       // 1 / purity
};

inline SchmidtResult schmidt_from_matrix(const Eigen::MatrixXcd& j) {
    const double total_sq = j.squaredNorm();
    if (!(total_sq > 0.0)) throw domain_error("schmidt: all-zero joint amplitude");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j);
    const Eigen::VectorXd sv = svd.singularValues();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) sum += sv[k] * sv[k];
    SchmidtResult out;
    out.coefficients.resize(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) out.coefficients[k] = sv[k] * sv[k] / sum;
    out.purity = 0.0;
    for (double lk : out.coefficients) out.purity += lk * lk;
    out.schmidt_number = 1.0 / out.purity;
    return out;
}

inline SchmidtResult schmidt_purity(const JointSpectralAmplitude& jsa) {
    Eigen::MatrixXcd m(jsa.signal_nm.size(), jsa.idler_nm.size());
    for (std::size_t s = 0; s < jsa.signal_nm.size(); ++s)
        for (std::size_t i = 0; i < jsa.idler_nm.size(); ++i)
            m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = jsa.at(s, i);
    return schmidt_from_matrix(m);
}

// ---------------------------------------------------------------------------
// Modulation-instability sideband prediction
// ---------------------------------------------------------------------------

struct Sideband {
    int order = 0;
    bool resonant = false;
    double omega_shift_rad_s = 0.0;   // Omega_l
    double lambda_signal_nm = 0.0;    // blue side, omega_p + Omega
    double lambda_idler_nm = 0.0;     // red side,  omega_p - Omega
};

/// Solves beta2 Omega^2 + 2 gamma P = 2 pi l / Lambda_T for each order l.
/// Orders with a negative radicand are reported as non-resonant.
inline std::vector<Sideband> mi_sidebands(double beta2_s2_m, double gamma_per_W_m, double power_W,
                                          double period_m, double lambda_pump_um,
                                          const std::vector<int>& orders) {
    if (!(beta2_s2_m > 0.0)) throw domain_error("mi_sidebands: beta2 must be > 0");
    if (!(period_m > 0.0)) throw domain_error("mi_sidebands: period must be > 0");
    const double omega_p = omega_from_lambda_um(lambda_pump_um);
    std::vector<Sideband> out;
    out.reserve(orders.size());
    for (int l : orders) {
        Sideband s;
        s.order = l;
        const double radicand = (two_pi * l / period_m - 2.0 * gamma_per_W_m * power_W) / beta2_s2_m;
        if (radicand > 0.0) {
            s.resonant = true;
            s.omega_shift_rad_s = std::sqrt(radicand);
            s.lambda_signal_nm = lambda_nm_from_omega(omega_p + s.omega_shift_rad_s);
            s.lambda_idler_nm = lambda_nm_from_omega(omega_p - s.omega_shift_rad_s);
        }
        out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enhancement map over (delta, Lambda_T)
// ---------------------------------------------------------------------------

struct EnhancementMap {
    std::vector<double> delta_axis;
    std::vector<double> period_axis_m;
    std::vector<double> enhancement_db;  // row-major [delta][period]
    std::vector<double> photons;         // same layout, unnormalized <N>

    double at(std::size_t d, std::size_t p) const {
        return enhancement_db[d * period_axis_m.size() + p];
    }
};

/// <N> at a fixed signal frequency over (delta, Lambda_T), normalized per
/// period column by the delta = 0 run of identical length and grid.
inline EnhancementMap enhancement_map(const MediumSpec& medium, const TaperProfile& base,
                                      const std::vector<double>& deltas,
                                      const std::vector<double>& periods_m, const CwPump& pump,
                                      double omega_s, int threads = 1) {
    EnhancementMap map;
    map.delta_axis = deltas;
    map.period_axis_m = periods_m;
    map.photons.assign(deltas.size() * periods_m.size(), 0.0);
    map.enhancement_db.assign(deltas.size() * periods_m.size(), 0.0);

    std::vector<double> reference(periods_m.size(), 0.0);
    parallel_for(periods_m.size(), threads, [&](std::size_t p) {
        TaperProfile uniform = base;
        uniform.delta = 0.0;
        uniform.period_m = periods_m[p];
        CwContext ctx(medium, uniform, pump, omega_s);
        reference[p] = propagate(ctx.tables()).photon_number();
    });
    parallel_for(map.photons.size(), threads, [&](std::size_t cell) {
        const std::size_t d = cell / periods_m.size();
        const std::size_t p = cell % periods_m.size();
        TaperProfile profile = base;
        profile.delta = deltas[d];
        profile.period_m = periods_m[p];
        CwContext ctx(medium, profile, pump, omega_s);
        map.photons[cell] = propagate(ctx.tables()).photon_number();
        map.enhancement_db[cell] = 10.0 * std::log10(map.photons[cell] / reference[p]);
    });
    return map;
}

}  // namespace sfwm
