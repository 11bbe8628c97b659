#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sfwm/errors.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/transfer_matrix.hpp"

namespace sfwm {

/// Independent check of the transfer-matrix engine: integrates the coupled
/// mode equations
///   d b_s / dz       =  j sum_k gamma_k(z) e^{j phi_k(z)} b_i^dagger
///   d b_i^dagger /dz = -j sum_k gamma_k(z) e^{-j phi_k(z)} b_s,
///   d phi_k / dz     =  dkappa_k(z)
/// as a classical 2x2 fundamental-solution ODE with fixed-step RK4. The run
/// is repeated at twice the resolution; if the two disagree beyond
/// `refuse_tol` the result is refused instead of returned.
class OdeOracle {
public:
    struct Result {
        TransferMatrix matrix;
        double step_error = 0.0;  // max elementwise |T_N - T_2N|
    };

    static Result integrate(const ChannelField& field, std::size_t pairs, double length_m,
                            std::size_t fine_steps, double refuse_tol = 1e-6) {
        if (fine_steps < 2) throw numeric_error("ode oracle: need at least 2 steps");
        const TransferMatrix coarse = run(field, pairs, length_m, fine_steps);
        const TransferMatrix fine = run(field, pairs, length_m, 2 * fine_steps);
        const double err = std::max(
            std::max(std::abs(coarse.t11 - fine.t11), std::abs(coarse.t12 - fine.t12)),
            std::max(std::abs(coarse.t21 - fine.t21), std::abs(coarse.t22 - fine.t22)));
        if (!(err <= refuse_tol))
            throw numeric_error("ode oracle: step-doubling error " + std::to_string(err) +
                                " exceeds tolerance " + std::to_string(refuse_tol) +
                                "; increase fine_steps");
        return {fine, err};
    }

private:
    struct State {
        std::complex<double> t11{1.0, 0.0}, t12{0.0, 0.0}, t21{0.0, 0.0}, t22{1.0, 0.0};
        std::vector<double> phi;
    };

    struct Deriv {
        std::complex<double> t11, t12, t21, t22;
        std::vector<double> phi;
    };

    static TransferMatrix run(const ChannelField& field, std::size_t pairs, double length_m,
                              std::size_t steps) {
        State y;
        y.phi.assign(pairs, 0.0);
        std::vector<double> gamma(pairs), dkappa(pairs);
        const double h = length_m / static_cast<double>(steps);

        Deriv k1, k2, k3, k4;
        State tmp;
        for (std::size_t n = 0; n < steps; ++n) {
            const double z = n * h;
            rhs(field, gamma, dkappa, z, y, k1);
            advance(y, k1, 0.5 * h, tmp);
            rhs(field, gamma, dkappa, z + 0.5 * h, tmp, k2);
            advance(y, k2, 0.5 * h, tmp);
            rhs(field, gamma, dkappa, z + 0.5 * h, tmp, k3);
            advance(y, k3, h, tmp);
            rhs(field, gamma, dkappa, z + h, tmp, k4);

            y.t11 += h / 6.0 * (k1.t11 + 2.0 * k2.t11 + 2.0 * k3.t11 + k4.t11);
            y.t12 += h / 6.0 * (k1.t12 + 2.0 * k2.t12 + 2.0 * k3.t12 + k4.t12);
            y.t21 += h / 6.0 * (k1.t21 + 2.0 * k2.t21 + 2.0 * k3.t21 + k4.t21);
            y.t22 += h / 6.0 * (k1.t22 + 2.0 * k2.t22 + 2.0 * k3.t22 + k4.t22);
            for (std::size_t k = 0; k < pairs; ++k)
                y.phi[k] += h / 6.0 * (k1.phi[k] + 2.0 * k2.phi[k] + 2.0 * k3.phi[k] + k4.phi[k]);
        }
        return {y.t11, y.t12, y.t21, y.t22};
    }

    static void rhs(const ChannelField& field, std::vector<double>& gamma,
                    std::vector<double>& dkappa, double z, const State& y, Deriv& d) {
        field(z, gamma, dkappa);
        std::complex<double> coupling{0.0, 0.0};
        for (std::size_t k = 0; k < gamma.size(); ++k)
            coupling += gamma[k] * std::polar(1.0, y.phi[k]);
        const std::complex<double> up = std::complex<double>(0.0, 1.0) * coupling;
        const std::complex<double> down = std::conj(up);  // -j Gamma^*
        d.t11 = up * y.t21;
        d.t12 = up * y.t22;
        d.t21 = down * y.t11;
        d.t22 = down * y.t12;
        d.phi = dkappa;
    }

    static void advance(const State& y, const Deriv& d, double h, State& out) {
        out.t11 = y.t11 + h * d.t11;
        out.t12 = y.t12 + h * d.t12;
        out.t21 = y.t21 + h * d.t21;
        out.t22 = y.t22 + h * d.t22;
        out.phi.resize(y.phi.size());
        for (std::size_t k = 0; k < y.phi.size(); ++k) out.phi[k] = y.phi[k] + h * d.phi[k];
    }
};

/// Convenience wrapper matching the engine call shape.
inline TransferMatrix ode_oracle(const ChannelField& field, std::size_t pairs, double length_m,
                                 std::size_t fine_steps, double refuse_tol = 1e-6) {
    return OdeOracle::integrate(field, pairs, length_m, fine_steps, refuse_tol).matrix;
}

}  // namespace sfwm
