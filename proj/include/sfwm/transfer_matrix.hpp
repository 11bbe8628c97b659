#pragma once

#include <complex>

namespace sfwm {

/// 2x2 complex map relating (b_s, b_i^dagger) across an element or the whole
/// structure. The expected photon number of the signal mode is |t12|^2.
struct TransferMatrix {
    std::complex<double> t11{1.0, 0.0};
    std::complex<double> t12{0.0, 0.0};
    std::complex<double> t21{0.0, 0.0};
    std::complex<double> t22{1.0, 0.0};

    static TransferMatrix identity() { return {}; }

    double photon_number() const { return std::norm(t12); }

    /// Deviation of |t11|^2 - |t12|^2 from 1; zero for exact two-mode
    /// squeezing propagation.
    double bogoliubov_defect() const { return std::norm(t11) - std::norm(t12) - 1.0; }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.t11 * b.t11 + a.t12 * b.t21, a.t11 * b.t12 + a.t12 * b.t22,
                a.t21 * b.t11 + a.t22 * b.t21, a.t21 * b.t12 + a.t22 * b.t22};
    }
};

}  // namespace sfwm
