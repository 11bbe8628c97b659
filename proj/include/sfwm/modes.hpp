#pragma once

#include <cmath>
#include <string>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

/// Unit-peak Gaussian transverse profile F(x,y) = exp(-(x^2+y^2)/w^2).
struct GaussianMode {
    double radius_um = 0.0;  // field radius w
    double lambda_um = 0.0;
    double n_eff = 1.0;

    void validate() const {
        if (!(radius_um > 0.0)) throw config_error("mode: radius must be > 0");
        if (!(n_eff >= 1.0)) throw config_error("mode: n_eff must be >= 1");
    }
};

/// S = integral |F|^2 = pi w^2 / 2.
inline double mode_area_um2(const GaussianMode& mode) {
    mode.validate();
    return 0.5 * pi * mode.radius_um * mode.radius_um;
}

/// Four-mode overlap integral F_p1 F_p2 F_s* F_i* for real Gaussians:
/// pi / (1/w_p1^2 + 1/w_p2^2 + 1/w_s^2 + 1/w_i^2). Terms are grouped so that
/// exchanging the pumps or exchanging signal and idler is bitwise neutral.
inline double overlap_fwm_um2(const GaussianMode& p1, const GaussianMode& p2,
                              const GaussianMode& s, const GaussianMode& i) {
    p1.validate();
    p2.validate();
    s.validate();
    i.validate();
    const double q_pump =
        1.0 / (p1.radius_um * p1.radius_um) + 1.0 / (p2.radius_um * p2.radius_um);
    const double q_pair = 1.0 / (s.radius_um * s.radius_um) + 1.0 / (i.radius_um * i.radius_um);
    return pi / (q_pump + q_pair);
}

/// XPM overlap integral |F_a|^2 |F_b|^2: pi / (2/w_a^2 + 2/w_b^2).
/// With a == b this is the SPM integral |F|^4.
inline double overlap_xpm_um2(const GaussianMode& a, const GaussianMode& b) {
    a.validate();
    b.validate();
    const double q = 2.0 / (a.radius_um * a.radius_um) + 2.0 / (b.radius_um * b.radius_um);
    return pi / q;
}

}  // namespace sfwm
