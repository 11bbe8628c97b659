#pragma once

#include <cmath>
#include <numbers>

namespace sfwm {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// metres per micrometre / nanometre
inline constexpr double metre_per_um = 1e-6;
inline constexpr double metre_per_nm = 1e-9;
inline constexpr double um2_per_m2 = 1e12;

inline double omega_from_lambda_um(double lambda_um) {
    return two_pi * speed_of_light / (lambda_um * metre_per_um);
}

inline double lambda_um_from_omega(double omega_rad_s) {
    return two_pi * speed_of_light / omega_rad_s / metre_per_um;
}

inline double lambda_nm_from_omega(double omega_rad_s) {
    return two_pi * speed_of_light / omega_rad_s / metre_per_nm;
}

inline double omega_from_lambda_nm(double lambda_nm) {
    return two_pi * speed_of_light / (lambda_nm * metre_per_nm);
}

}  // namespace sfwm
