#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sfwm/constants.hpp"
#include "sfwm/errors.hpp"

namespace sfwm {

/// Sinusoidally tapered structure: the local geometry parameter (fibre pitch
/// or planar core width, um) follows
///   g(z) = g_av [1 - delta cos(2 pi z / period)],
/// over `periods` full cycles, each cut into `steps_per_period` elements.
struct TaperProfile {
    double g_av_um = 0.0;       // average geometry parameter
    double delta = 0.0;         // modulation depth, 0 <= delta < 1
    double period_m = 0.0;      // tapering period Lambda_T
    int periods = 0;            // M
    int steps_per_period = 200;

    double length_m() const { return periods * period_m; }

    void validate() const {
        if (!(g_av_um > 0.0)) throw config_error("taper: g_av must be > 0");
        if (!(delta >= 0.0 && delta < 1.0)) throw config_error("taper: need 0 <= delta < 1");
        if (!(period_m > 0.0)) throw config_error("taper: period must be > 0");
        if (periods < 1) throw config_error("taper: need at least one period");
        if (steps_per_period < 1) throw config_error("taper: need at least one step per period");
    }
};

/// Constant-cross-section element of the discretized structure.
struct Element {
    double z0_m = 0.0;   // start position
    double dz_m = 0.0;   // thickness
    double g_um = 0.0;   // geometry sampled at the element midpoint
};

/// Local geometry parameter at position z in [0, L]. The phase argument is
/// reduced with fmod so the profile stays periodic to rounding over long
/// structures.
inline double geometry_at(const TaperProfile& profile, double z_m) {
    profile.validate();
    if (!(z_m >= 0.0 && z_m <= profile.length_m()))
        throw domain_error("geometry_at: z = " + std::to_string(z_m) + " outside [0, L]");
    const double r = std::fmod(z_m, profile.period_m);
    return profile.g_av_um * (1.0 - profile.delta * std::cos(two_pi * r / profile.period_m));
}

/// Uniform partition into periods * steps_per_period elements with geometry
/// sampled at midpoints. Midpoint phases are computed per step index, so the
/// sampled geometry repeats exactly from period to period.
inline std::vector<Element> discretize(const TaperProfile& profile) {
    profile.validate();
    const int steps = profile.steps_per_period;
    const double dz = profile.period_m / steps;
    std::vector<Element> elements;
    elements.reserve(static_cast<std::size_t>(profile.periods) * steps);
    for (int m = 0; m < profile.periods; ++m) {
        for (int s = 0; s < steps; ++s) {
            Element e;
            e.z0_m = (m * static_cast<double>(steps) + s) * dz;
            e.dz_m = dz;
            const double phase = two_pi * (s + 0.5) / steps;
            e.g_um = profile.g_av_um * (1.0 - profile.delta * std::cos(phase));
            elements.push_back(e);
        }
    }
    return elements;
}

/// Midpoint geometry values for one period; element m of the full structure
/// uses entry m % steps_per_period.
inline std::vector<double> period_geometry(const TaperProfile& profile) {
    profile.validate();
    std::vector<double> g(profile.steps_per_period);
    for (int s = 0; s < profile.steps_per_period; ++s) {
        const double phase = two_pi * (s + 0.5) / profile.steps_per_period;
        g[s] = profile.g_av_um * (1.0 - profile.delta * std::cos(phase));
    }
    return g;
}

}  // namespace sfwm
