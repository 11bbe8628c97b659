#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/sellmeier.hpp"

namespace sfwm {

struct DomainBox {
    double lambda_lo_um = 0.0;
    double lambda_hi_um = 0.0;
    double geometry_lo_um = 0.0;
    double geometry_hi_um = 0.0;
};

/// Maps (wavelength, local geometry parameter) -> effective index, optionally
/// mode area. Implementations are immutable after construction and all
/// queries are pure, so providers may be shared across threads freely.
/// Out-of-domain queries throw domain_error; there is no extrapolation.
class DispersionProvider {
public:
    virtual ~DispersionProvider() = default;

    virtual double effective_index(double lambda_um, double geometry_um) const = 0;

    /// Mode area for a unit-peak Gaussian profile, if this provider knows it.
    virtual std::optional<double> mode_area_um2(double lambda_um, double geometry_um) const {
        (void)lambda_um;
        (void)geometry_um;
        return std::nullopt;
    }

    virtual DomainBox domain() const = 0;

    virtual bool in_domain(double lambda_um, double geometry_um) const {
        const DomainBox b = domain();
        return lambda_um >= b.lambda_lo_um && lambda_um <= b.lambda_hi_um &&
               geometry_um >= b.geometry_lo_um && geometry_um <= b.geometry_hi_um;
    }

protected:
    void require_in_domain(double lambda_um, double geometry_um) const {
        if (!in_domain(lambda_um, geometry_um))
            throw domain_error("dispersion query (" + std::to_string(lambda_um) + " um, " +
                               std::to_string(geometry_um) + " um) outside provider domain");
    }
};

/// Bulk material: Sellmeier index, no geometry dependence, no mode area.
class SellmeierProvider final : public DispersionProvider {
public:
    explicit SellmeierProvider(SellmeierModel model) : model_(std::move(model)) {
        model_.validate();
    }

    double effective_index(double lambda_um, double /*geometry_um*/) const override {
        return material_index(model_, lambda_um);
    }

    DomainBox domain() const override {
        return {model_.range_lo_um, model_.range_hi_um,
                0.0, std::numeric_limits<double>::infinity()};
    }

    const SellmeierModel& model() const { return model_; }

private:
    SellmeierModel model_;
};

namespace detail {

inline void require_stencil(const DispersionProvider& p, double lambda_um, double geometry_um,
                            double margin_um) {
    if (!p.in_domain(lambda_um - margin_um, geometry_um) ||
        !p.in_domain(lambda_um + margin_um, geometry_um))
        throw domain_error("finite-difference stencil leaves provider domain at lambda = " +
                           std::to_string(lambda_um) + " um");
}

}  // namespace detail

/// Group index n_g = n - lambda dn/dlambda, central differences with step h.
inline double group_index(const DispersionProvider& provider, double lambda_um,
                          double geometry_um, double h_um = 1e-4) {
    detail::require_stencil(provider, lambda_um, geometry_um, h_um);
    const double n0 = provider.effective_index(lambda_um, geometry_um);
    const double np = provider.effective_index(lambda_um + h_um, geometry_um);
    const double nm = provider.effective_index(lambda_um - h_um, geometry_um);
    const double dn_dlambda = (np - nm) / (2.0 * h_um);
    return n0 - lambda_um * dn_dlambda;
}

/// beta2 = d^2 k / d omega^2 with k = n_eff(omega) omega / c, in s^2/m.
/// 5-point central stencil in omega with relative step rel_step.
inline double beta2_s2_per_m(const DispersionProvider& provider, double lambda_um,
                             double geometry_um, double rel_step = 1e-4) {
    const double omega0 = omega_from_lambda_um(lambda_um);
    const double h = rel_step * omega0;
    const auto k_of = [&](double omega) {
        const double lam = lambda_um_from_omega(omega);
        return provider.effective_index(lam, geometry_um) * omega / speed_of_light;
    };
    // the widest stencil points map to the extreme wavelengths
    detail::require_stencil(provider, lambda_um, geometry_um,
                            lambda_um - lambda_um_from_omega(omega0 + 2.0 * h));
    detail::require_stencil(provider, lambda_um, geometry_um,
                            lambda_um_from_omega(omega0 - 2.0 * h) - lambda_um);
    const double km2 = k_of(omega0 - 2.0 * h);
    const double km1 = k_of(omega0 - h);
    const double k0 = k_of(omega0);
    const double kp1 = k_of(omega0 + h);
    const double kp2 = k_of(omega0 + 2.0 * h);
    return (-kp2 + 16.0 * kp1 - 30.0 * k0 + 16.0 * km1 - km2) / (12.0 * h * h);
}

inline double beta2_ps2_per_m(const DispersionProvider& provider, double lambda_um,
                              double geometry_um, double rel_step = 1e-4) {
    return beta2_s2_per_m(provider, lambda_um, geometry_um, rel_step) * 1e24;
}

}  // namespace sfwm
